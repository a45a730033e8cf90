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

#include <risbeam/risbeam.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace
{
    using namespace risbeam;

    // "preset:<name>" selects a built-in scenario; anything else is a JSON file path.
    Scenario scenario_argument(const std::string &arg)
    {
        constexpr std::string_view prefix = "preset:";
        if (arg.rfind(prefix, 0) == 0)
            return preset_by_name(arg.substr(prefix.size()));
        return load_scenario(arg);
    }

    std::vector<double> parse_frequency_list(const std::string &text)
    {
        std::vector<double> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(item, &used);
            }
            catch (const std::exception &)
            {
                fail(ErrorCode::invalid_argument, "cannot parse frequency '" + item + "'");
            }
            if (used != item.size() || !std::isfinite(v) || v <= 0.0)
                fail(ErrorCode::invalid_argument, "invalid frequency '" + item + "'");
            out.push_back(v);
        }
        if (out.empty())
            fail(ErrorCode::invalid_argument, "--frequencies needs at least one value");
        return out;
    }

    struct CommonOptions
    {
        std::string scenario;
        std::string codebook;
        std::string source = "scan";
        std::string objective = "max";
        std::size_t iterations = 1;
        std::string out = "out";
        std::uint64_t seed = 0;
        std::string frequencies;
        std::size_t case2_rows = 0;
        double grid_step = 0.0;
        double drift_threshold = 5.0;
        std::string name;
    };

    void add_common(CLI::App *cmd, CommonOptions &o, bool codebook_options)
    {
        cmd->add_option("--scenario", o.scenario, "Scenario JSON file or preset:<outdoor|indoor|tiny>")->required();
        cmd->add_option("--objective", o.objective, "Scan objective")->check(CLI::IsMember({"max", "min"}));
        cmd->add_option("--iterations", o.iterations, "Column-row scan rounds")->check(CLI::PositiveNumber);
        cmd->add_option("--out", o.out, "Output directory");
        cmd->add_option("--seed", o.seed, "Seed recorded with the run");
        cmd->add_option("--name", o.name, "Experiment name");
        if (codebook_options)
        {
            cmd->add_option("--codebook", o.codebook, "Precomputed codebook JSON (implies --source file)");
            cmd->add_option("--source", o.source, "Codebook source when no file is given")
                ->check(CLI::IsMember({"scan", "model"}));
        }
    }

    ExperimentSpec make_spec(const CommonOptions &o, ExperimentKind kind)
    {
        ExperimentSpec spec;
        spec.kind = kind;
        spec.name = o.name.empty() ? std::string(to_string(kind)) : o.name;
        spec.scenario_path = o.scenario;
        spec.scenario = scenario_argument(o.scenario);
        spec.objective = parse_objective(o.objective);
        spec.iterations = o.iterations;
        spec.output_dir = o.out;
        spec.seed = o.seed;
        if (!o.codebook.empty())
        {
            spec.codebook_source = CodebookSource::file;
            spec.codebook_path = o.codebook;
        }
        else
            spec.codebook_source = parse_codebook_source(o.source);
        if (!o.frequencies.empty())
            spec.frequencies_hz = parse_frequency_list(o.frequencies);
        if (o.case2_rows > 0)
            spec.case2_rows = o.case2_rows;
        if (o.grid_step > 0.0)
            spec.grid_step_deg = o.grid_step;
        spec.drift_threshold_deg = o.drift_threshold;
        return spec;
    }

    void report_files(const std::vector<std::string> &files)
    {
        for (const auto &f : files)
            std::cout << f << '\n';
    }

    void show_codebook(const Codebook &cb)
    {
        std::cout << "tx direction: " << cb.tx_direction.azimuth_deg << " deg azimuth, " << cb.tx_direction.elevation_deg
                  << " deg elevation\n"
                  << "geometry fingerprint: " << cb.geometry_fingerprint << '\n'
                  << "scenario fingerprint: " << cb.scenario_fingerprint << '\n'
                  << "entries: " << cb.entries.size() << '\n';
        for (const auto &e : cb.entries)
        {
            std::cout << "\n[" << e.target_azimuth_deg << " deg, " << to_string(e.provenance) << ", "
                      << e.config.rows() << "x" << e.config.cols() << "]\n"
                      << e.config.to_text();
        }
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"risbeam: 1-bit RIS configuration, codebook and beam-sweeping simulator"};
    app.set_version_flag("--version", std::string(risbeam::kVersion));
    app.require_subcommand(1);

    CommonOptions pattern_opt, sweep_opt, freq_opt, oracle_opt;

    auto *pattern = app.add_subcommand("pattern", "Case-1/Case-2 pattern predictions and measured cuts per codebook entry");
    add_common(pattern, pattern_opt, true);
    pattern->add_option("--case2-rows", pattern_opt.case2_rows, "Rows rewritten by the Case-2 extension (default rows/4)");
    pattern->add_option("--grid-step", pattern_opt.grid_step, "Pattern grid step in degrees (default 1)");

    auto *sweep = app.add_subcommand("sweep", "Codebook beam sweep at every Rx position of the scenario");
    add_common(sweep, sweep_opt, true);

    auto *freq = app.add_subcommand("freq", "Per-frequency patterns and main-lobe drift of each codebook entry");
    add_common(freq, freq_opt, true);
    freq->add_option("--frequencies", freq_opt.frequencies, "Comma-separated frequencies in Hz");
    freq->add_option("--grid-step", freq_opt.grid_step, "Pattern grid step in degrees (default 0.25)");
    freq->add_option("--drift-threshold", freq_opt.drift_threshold, "Drift flag threshold in degrees");

    auto *oracle = app.add_subcommand("oracle", "Exhaustive optimum against the column-row scan (at most 20 bits)");
    add_common(oracle, oracle_opt, false);

    std::string spec_path;
    auto *run = app.add_subcommand("run", "Rerun an experiment from its emitted experiment.json");
    run->add_option("spec", spec_path, "experiment.json")->required();
    std::string run_out;
    run->add_option("--out", run_out, "Override the output directory");

    auto *codebook = app.add_subcommand("codebook", "Build or inspect codebooks");
    codebook->require_subcommand(1);
    std::string cb_scenario, cb_source = "scan", cb_objective = "max", cb_out, cb_angles;
    std::size_t cb_iterations = 1;
    auto *build = codebook->add_subcommand("build", "Build a codebook for a scenario");
    build->add_option("--scenario", cb_scenario, "Scenario JSON file or preset:<name>")->required();
    build->add_option("--source", cb_source, "scan or model")->check(CLI::IsMember({"scan", "model"}));
    build->add_option("--objective", cb_objective, "Scan objective")->check(CLI::IsMember({"max", "min"}));
    build->add_option("--iterations", cb_iterations, "Column-row scan rounds")->check(CLI::PositiveNumber);
    build->add_option("--angles", cb_angles, "Comma-separated target azimuths (default: scenario Rx grid)");
    build->add_option("--out", cb_out, "Codebook JSON output file")->required();
    std::string show_path;
    auto *show = codebook->add_subcommand("show", "Print a codebook");
    show->add_option("--codebook", show_path, "Codebook JSON file")->required();

    std::string preset_name, preset_out;
    auto *preset = app.add_subcommand("preset", "Write a built-in scenario as JSON");
    preset->add_option("name", preset_name, "outdoor, indoor or tiny")->required();
    preset->add_option("--out", preset_out, "Output file (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    try
    {
        if (*pattern)
            report_files(run_pattern_experiment(make_spec(pattern_opt, ExperimentKind::pattern)));
        else if (*sweep)
            report_files(run_sweep_experiment(make_spec(sweep_opt, ExperimentKind::sweep)));
        else if (*freq)
            report_files(run_frequency_experiment(make_spec(freq_opt, ExperimentKind::frequency)));
        else if (*oracle)
            report_files(run_oracle_experiment(make_spec(oracle_opt, ExperimentKind::oracle)));
        else if (*run)
        {
            ExperimentSpec spec = spec_from_json(parse_json_file(spec_path));
            if (!run_out.empty())
                spec.output_dir = run_out;
            report_files(run_experiment(spec));
        }
        else if (*build)
        {
            const Scenario s = scenario_argument(cb_scenario);
            const std::vector<double> angles = cb_angles.empty() ? experiment_angles(s) : [&] {
                std::vector<double> a;
                std::stringstream ss(cb_angles);
                std::string item;
                while (std::getline(ss, item, ','))
                {
                    try
                    {
                        a.push_back(std::stod(item));
                    }
                    catch (const std::exception &)
                    {
                        fail(ErrorCode::invalid_argument, "cannot parse angle '" + item + "'");
                    }
                }
                return a;
            }();
            const Codebook cb = parse_codebook_source(cb_source) == CodebookSource::model
                                    ? build_codebook_model(s, angles, s.reflection)
                                    : build_codebook_scan(s, angles, parse_objective(cb_objective), cb_iterations,
                                                          s.reflection);
            save_codebook(cb, cb_out);
            std::cout << cb_out << '\n';
        }
        else if (*show)
            show_codebook(load_codebook(show_path));
        else if (*preset)
        {
            const Scenario s = preset_by_name(preset_name);
            if (preset_out.empty())
                std::cout << scenario_to_json(s).dump(2) << '\n';
            else
                save_scenario(s, preset_out);
        }
    }
    catch (const Error &e)
    {
        std::cerr << "risbeam: " << e.what() << '\n';
        return exit_code(e.code());
    }
    catch (const std::exception &e)
    {
        std::cerr << "risbeam: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
