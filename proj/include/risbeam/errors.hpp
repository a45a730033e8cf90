// SPDX-License-Identifier: Apache-2.0
//
// risbeam: 1-bit RIS configuration, codebook and beam-sweeping simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace risbeam
{
    enum class ErrorCode
    {
        invalid_argument,
        invalid_geometry,
        degenerate_geometry,
        dimension_mismatch,
        refusal,
        io
    };

    inline const char *to_string(ErrorCode code)
    {
        switch (code)
        {
        case ErrorCode::invalid_argument:
            return "invalid-argument";
        case ErrorCode::invalid_geometry:
            return "invalid-geometry";
        case ErrorCode::degenerate_geometry:
            return "degenerate-geometry";
        case ErrorCode::dimension_mismatch:
            return "dimension-mismatch";
        case ErrorCode::refusal:
            return "refusal";
        case ErrorCode::io:
            return "io";
        }
        return "unknown";
    }

    // Single exception type for the library; the code classifies the failure.
    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &message)
            : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

        ErrorCode code() const noexcept { return code_; }

    private:
        ErrorCode code_;
    };

    // Process exit status used by the command line tool.
    inline int exit_code(ErrorCode code)
    {
        switch (code)
        {
        case ErrorCode::refusal:
            return 3;
        case ErrorCode::io:
            return 4;
        default:
            return 2;
        }
    }

    [[noreturn]] inline void fail(ErrorCode code, const std::string &message)
    {
        throw Error(code, message);
    }
}
