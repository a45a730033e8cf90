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

// Helpers for comparing experiment outputs: the '#' header block and the JSON timestamp are excluded.

#include <risbeam/scenario.hpp>

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace testutil
{
    inline std::string body_of(const std::string &text)
    {
        std::istringstream is(text);
        std::string out;
        for (std::string line; std::getline(is, line);)
            if (line.rfind("#", 0) != 0)
                out += line + '\n';
        return out;
    }

    inline std::string comparable(const std::filesystem::path &p)
    {
        const std::string text = risbeam::read_text_file(p.string());
        if (p.extension() == ".json")
        {
            auto j = nlohmann::json::parse(text);
            j.erase("timestamp");
            j.erase("output_dir");
            return j.dump();
        }
        return body_of(text);
    }

    // File name -> comparable content for every regular file in a directory.
    inline std::map<std::string, std::string> snapshot(const std::filesystem::path &dir)
    {
        std::map<std::string, std::string> out;
        for (const auto &e : std::filesystem::directory_iterator(dir))
            if (e.is_regular_file())
                out[e.path().filename().string()] = comparable(e.path());
        return out;
    }

    inline std::vector<std::vector<double>> csv_rows(const std::string &text)
    {
        std::vector<std::vector<double>> rows;
        std::istringstream is(body_of(text));
        std::string line;
        std::getline(is, line); // column names
        while (std::getline(is, line))
        {
            std::vector<double> row;
            std::istringstream ls(line);
            for (std::string cell; std::getline(ls, cell, ',');)
                row.push_back(std::stod(cell));
            rows.push_back(row);
        }
        return rows;
    }

    inline std::filesystem::path fresh_dir(const std::string &name)
    {
        const auto p = std::filesystem::temp_directory_path() / ("risbeam_test_" + name);
        std::filesystem::remove_all(p);
        return p;
    }
}
