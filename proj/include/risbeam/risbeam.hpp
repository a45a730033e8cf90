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

#include <risbeam/version.hpp>
#include <risbeam/errors.hpp>
#include <risbeam/geometry.hpp>
#include <risbeam/pattern.hpp>
#include <risbeam/phase_config.hpp>
#include <risbeam/scenario.hpp>
#include <risbeam/channel.hpp>
#include <risbeam/optimizer.hpp>
#include <risbeam/codebook.hpp>
#include <risbeam/experiment.hpp>
