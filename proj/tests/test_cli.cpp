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

#include "testutil.hpp"

#include <risbeam/codebook.hpp>

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <sys/wait.h>

using testutil::fresh_dir;
using testutil::snapshot;

namespace
{
    const std::string kCli = RISBEAM_CLI_PATH;
    const std::string kPresets = RISBEAM_PRESET_DIR;

    int run_cli(const std::string &args, const std::string &log = "/dev/null")
    {
        const std::string cmd = "'" + kCli + "' " + args + " >" + log + " 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
}

TEST_CASE("exit codes", "[cli]")
{
    const auto dir = fresh_dir("cli_codes");
    CHECK(run_cli("oracle --scenario preset:tiny --out " + dir.string()) == 0);
    CHECK(run_cli("oracle --scenario " + kPresets + "/tiny_oracle.json --out " + dir.string()) == 0);

    CHECK(run_cli("") == 2);
    CHECK(run_cli("oracle --scenario preset:tiny --objective best --out " + dir.string()) == 2);
    CHECK(run_cli("oracle --scenario preset:tiny --iterations 0 --out " + dir.string()) == 2);
    CHECK(run_cli("oracle --scenario preset:nowhere --out " + dir.string()) == 2);
    CHECK(run_cli("freq --scenario preset:tiny --frequencies 3.5e9,abc --out " + dir.string()) == 2);

    CHECK(run_cli("oracle --scenario preset:outdoor --out " + dir.string()) == 3);

    CHECK(run_cli("oracle --scenario /nonexistent/scenario.json --out " + dir.string()) == 4);
    CHECK(run_cli("sweep --scenario preset:tiny --codebook /nonexistent/cb.json --out " + dir.string()) == 4);
    CHECK(run_cli("oracle --scenario preset:tiny --out /proc/risbeam_cli_denied") == 4);
}

TEST_CASE("malformed scenario files are invalid input", "[cli]")
{
    const auto dir = fresh_dir("cli_bad");
    std::filesystem::create_directories(dir);
    risbeam::write_text_file((dir / "broken.json").string(), "{ not json");
    CHECK(run_cli("oracle --scenario " + (dir / "broken.json").string() + " --out " + (dir / "o").string()) == 2);
}

TEST_CASE("codebook build and show", "[cli]")
{
    const auto dir = fresh_dir("cli_codebook");
    std::filesystem::create_directories(dir);
    const std::string cb = (dir / "cb.json").string();
    REQUIRE(run_cli("codebook build --scenario preset:tiny --source scan --angles 0,30 --out " + cb) == 0);
    const risbeam::Codebook loaded = risbeam::load_codebook(cb);
    CHECK(loaded.entries.size() == 2);
    CHECK(run_cli("codebook show --codebook " + cb, (dir / "show.txt").string()) == 0);
    const std::string shown = risbeam::read_text_file((dir / "show.txt").string());
    CHECK(shown.find("30") != std::string::npos);
    CHECK(run_cli("codebook build --scenario preset:tiny --angles 30,0 --out " + cb) == 2);
    CHECK(run_cli("codebook show --codebook /nonexistent/cb.json") == 4);

    // A codebook from one geometry is refused on another.
    CHECK(run_cli("sweep --scenario preset:outdoor --codebook " + cb + " --out " + (dir / "o").string()) == 2);
    CHECK(run_cli("sweep --scenario preset:tiny --codebook " + cb + " --out " + (dir / "o").string()) == 0);
}

TEST_CASE("preset command reproduces the shipped preset files", "[cli]")
{
    const auto dir = fresh_dir("cli_preset");
    std::filesystem::create_directories(dir);
    for (auto [name, file] : {std::pair{"outdoor", "outdoor_fig2a.json"}, std::pair{"indoor", "indoor_fig2c.json"},
                              std::pair{"tiny", "tiny_oracle.json"}})
    {
        const auto out = dir / file;
        REQUIRE(run_cli(std::string("preset ") + name + " --out " + out.string()) == 0);
        CHECK(risbeam::read_text_file(out.string()) == risbeam::read_text_file(kPresets + "/" + file));
    }
}

TEST_CASE("run reproduces an experiment from its emitted spec", "[cli]")
{
    const auto a = fresh_dir("cli_run_a"), b = fresh_dir("cli_run_b");
    REQUIRE(run_cli("freq --scenario preset:tiny --seed 3 --frequencies 3.45e9,3.55e9 --out " + a.string()) == 0);
    REQUIRE(run_cli("run " + (a / "experiment.json").string() + " --out " + b.string()) == 0);
    CHECK(snapshot(a) == snapshot(b));
}
