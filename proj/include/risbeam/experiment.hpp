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

#include <risbeam/codebook.hpp>
#include <risbeam/version.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace risbeam
{
    enum class CodebookSource
    {
        scan,
        model,
        file
    };

    inline const char *to_string(CodebookSource c)
    {
        switch (c)
        {
        case CodebookSource::scan:
            return "scan";
        case CodebookSource::model:
            return "model";
        case CodebookSource::file:
            return "file";
        }
        return "scan";
    }

    inline CodebookSource parse_codebook_source(const std::string &s)
    {
        if (s == "scan")
            return CodebookSource::scan;
        if (s == "model")
            return CodebookSource::model;
        if (s == "file")
            return CodebookSource::file;
        fail(ErrorCode::invalid_argument, "codebook source must be scan, model or file, got '" + s + "'");
    }

    enum class ExperimentKind
    {
        pattern,
        sweep,
        frequency,
        oracle
    };

    inline const char *to_string(ExperimentKind k)
    {
        switch (k)
        {
        case ExperimentKind::pattern:
            return "pattern";
        case ExperimentKind::sweep:
            return "sweep";
        case ExperimentKind::frequency:
            return "freq";
        case ExperimentKind::oracle:
            return "oracle";
        }
        return "pattern";
    }

    inline ExperimentKind parse_experiment_kind(const std::string &s)
    {
        if (s == "pattern")
            return ExperimentKind::pattern;
        if (s == "sweep")
            return ExperimentKind::sweep;
        if (s == "freq" || s == "frequency")
            return ExperimentKind::frequency;
        if (s == "oracle")
            return ExperimentKind::oracle;
        fail(ErrorCode::invalid_argument, "unknown experiment kind '" + s + "'");
    }

    inline std::vector<double> default_report_frequencies() { return {3.50e9, 3.55e9, 3.60e9}; }

    struct ExperimentSpec
    {
        std::string name = "experiment";
        ExperimentKind kind = ExperimentKind::sweep;
        std::string scenario_path;
        std::optional<Scenario> scenario; // inline copy; takes precedence over the path
        CodebookSource codebook_source = CodebookSource::scan;
        std::string codebook_path;
        std::optional<Codebook> codebook; // inline copy for file-sourced codebooks
        Objective objective = Objective::maximize;
        std::size_t iterations = 1;
        std::string output_dir = "out";
        std::uint64_t seed = 0;
        std::vector<double> frequencies_hz = default_report_frequencies();
        std::optional<std::size_t> case2_rows;
        std::optional<double> grid_step_deg; // pattern: 1 deg, freq: 0.25 deg
        double drift_threshold_deg = 5.0;
    };

    inline nlohmann::json spec_to_json(const ExperimentSpec &spec)
    {
        nlohmann::json j;
        j["name"] = spec.name;
        j["kind"] = to_string(spec.kind);
        j["scenario_path"] = spec.scenario_path;
        if (spec.scenario)
            j["scenario"] = scenario_to_json(*spec.scenario);
        j["codebook_source"] = to_string(spec.codebook_source);
        j["codebook_path"] = spec.codebook_path;
        if (spec.codebook)
            j["codebook"] = codebook_to_json(*spec.codebook);
        j["objective"] = to_string(spec.objective);
        j["iterations"] = spec.iterations;
        j["output_dir"] = spec.output_dir;
        j["seed"] = spec.seed;
        j["frequencies_hz"] = spec.frequencies_hz;
        j["case2_rows"] = spec.case2_rows ? nlohmann::json(*spec.case2_rows) : nlohmann::json(nullptr);
        j["grid_step_deg"] = spec.grid_step_deg ? nlohmann::json(*spec.grid_step_deg) : nlohmann::json(nullptr);
        j["drift_threshold_deg"] = spec.drift_threshold_deg;
        return j;
    }

    inline ExperimentSpec spec_from_json(const nlohmann::json &j)
    {
        ExperimentSpec spec;
        try
        {
            spec.name = j.value("name", spec.name);
            spec.kind = parse_experiment_kind(j.value("kind", std::string("sweep")));
            spec.scenario_path = j.value("scenario_path", std::string());
            if (j.contains("scenario") && !j.at("scenario").is_null())
                spec.scenario = scenario_from_json(j.at("scenario"));
            spec.codebook_source = parse_codebook_source(j.value("codebook_source", std::string("scan")));
            spec.codebook_path = j.value("codebook_path", std::string());
            if (j.contains("codebook") && !j.at("codebook").is_null())
                spec.codebook = codebook_from_json(j.at("codebook"));
            spec.objective = parse_objective(j.value("objective", std::string("max")));
            spec.iterations = j.value("iterations", std::size_t{1});
            spec.output_dir = j.value("output_dir", spec.output_dir);
            spec.seed = j.value("seed", std::uint64_t{0});
            if (j.contains("frequencies_hz"))
                spec.frequencies_hz = j.at("frequencies_hz").get<std::vector<double>>();
            if (j.contains("case2_rows") && !j.at("case2_rows").is_null())
                spec.case2_rows = j.at("case2_rows").get<std::size_t>();
            if (j.contains("grid_step_deg") && !j.at("grid_step_deg").is_null())
                spec.grid_step_deg = j.at("grid_step_deg").get<double>();
            spec.drift_threshold_deg = j.value("drift_threshold_deg", 5.0);
        }
        catch (const nlohmann::json::exception &e)
        {
            fail(ErrorCode::invalid_argument, std::string("malformed experiment spec: ") + e.what());
        }
        return spec;
    }

    // ---------------------------------------------------------------------------------------------

    namespace detail
    {
        inline std::string utc_timestamp()
        {
            const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            std::tm tm{};
            gmtime_r(&now, &tm);
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
            return buf;
        }

        inline std::string angle_tag(double deg)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", deg);
            return buf;
        }

        inline std::string fmt(const char *format, double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, format, v);
            return buf;
        }

        // Writes one output file of an experiment run: a '#' header block followed by the body.
        class OutputWriter
        {
        public:
            OutputWriter(const ExperimentSpec &spec, const Scenario &scenario)
                : dir_(spec.output_dir), spec_(spec), fingerprint_(fingerprint(scenario)), timestamp_(utc_timestamp())
            {
                std::error_code ec;
                std::filesystem::create_directories(dir_, ec);
                if (ec)
                    fail(ErrorCode::io, "cannot create output directory '" + dir_.string() + "': " + ec.message());
            }

            std::string header() const
            {
                std::ostringstream os;
                os << "# risbeam " << kVersion << "\n"
                   << "# experiment: " << spec_.name << " (" << to_string(spec_.kind) << ")\n"
                   << "# scenario_fingerprint: " << fingerprint_ << "\n"
                   << "# seed: " << spec_.seed << "\n"
                   << "# timestamp: " << timestamp_ << "\n";
                return os.str();
            }

            void csv(const std::string &filename, const std::string &body)
            {
                write(filename, header() + body);
            }

            void write(const std::string &filename, const std::string &content)
            {
                const std::string path = (dir_ / filename).string();
                write_text_file(path, content);
                files_.push_back(path);
            }

            // JSON sidecar with run metadata and the rerunnable spec.
            void finish(const nlohmann::json &summary)
            {
                write("experiment.json", spec_to_json(spec_).dump(2) + "\n");
                nlohmann::json meta;
                meta["version"] = kVersion;
                meta["experiment"] = spec_.name;
                meta["kind"] = to_string(spec_.kind);
                meta["scenario_fingerprint"] = fingerprint_;
                meta["seed"] = spec_.seed;
                meta["timestamp"] = timestamp_;
                meta["summary"] = summary;
                std::vector<std::string> names;
                for (const auto &f : files_)
                    names.push_back(std::filesystem::path(f).filename().string());
                meta["files"] = names;
                write("metadata.json", meta.dump(2) + "\n");
            }

            const std::vector<std::string> &files() const { return files_; }

        private:
            std::filesystem::path dir_;
            const ExperimentSpec &spec_;
            std::string fingerprint_;
            std::string timestamp_;
            std::vector<std::string> files_;
        };

        inline std::string cut_body(const PatternCut &cut)
        {
            std::ostringstream os;
            cut.write_csv(os);
            return os.str();
        }
    }

    // Scenario referenced by a spec, resolved once and embedded so the emitted spec stands alone.
    inline Scenario resolve_scenario(ExperimentSpec &spec)
    {
        if (!spec.scenario)
        {
            if (spec.scenario_path.empty())
                fail(ErrorCode::invalid_argument, "experiment needs a scenario");
            spec.scenario = load_scenario(spec.scenario_path);
        }
        return *spec.scenario;
    }

    inline std::vector<double> experiment_angles(const Scenario &s)
    {
        if (s.rx_azimuths_deg.empty())
            fail(ErrorCode::invalid_argument, "scenario defines no Rx azimuth grid (rx_azimuths_deg)");
        return s.rx_azimuths_deg;
    }

    inline Codebook resolve_codebook(ExperimentSpec &spec, const Scenario &s)
    {
        if (!spec.codebook)
        {
            switch (spec.codebook_source)
            {
            case CodebookSource::file:
                if (spec.codebook_path.empty())
                    fail(ErrorCode::invalid_argument, "codebook source 'file' needs a codebook path");
                spec.codebook = load_codebook(spec.codebook_path);
                break;
            case CodebookSource::scan:
                return build_codebook_scan(s, experiment_angles(s), spec.objective, spec.iterations, s.reflection);
            case CodebookSource::model:
                return build_codebook_model(s, experiment_angles(s), s.reflection);
            }
        }
        spec.codebook->require_compatible(s);
        return *spec.codebook;
    }

    inline std::string codebook_text(const Codebook &cb) { return codebook_to_json(cb).dump(2) + "\n"; }

    // ---------------------------------------------------------------------------------------------

    // Case-1 / Case-2 pattern predictions and the simulated measurement cut for every codebook entry.
    inline std::vector<std::string> run_pattern_experiment(ExperimentSpec spec)
    {
        spec.kind = ExperimentKind::pattern;
        const Scenario s = resolve_scenario(spec);
        const Codebook cb = resolve_codebook(spec, s);
        detail::OutputWriter out(spec, s);

        const auto rx_grid = experiment_angles(s);
        const auto [lo, hi] = std::minmax_element(rx_grid.begin(), rx_grid.end());
        const auto grid = azimuth_grid(*lo, *hi, spec.grid_step_deg.value_or(1.0));
        const Direction aoa = incidence_parameters(tx_direction(s));
        const ArrayGeometry local = s.ris.centered_at_origin();
        const double lambda = wavelength_of(s.frequency_grid.center());
        const std::size_t k_rows = spec.case2_rows.value_or(default_case2_rows(s.ris.rows));

        std::vector<CascadeModel> measurement_models;
        for (double a : rx_grid)
            measurement_models.emplace_back(with_rx_at(s, a));

        nlohmann::json summary = nlohmann::json::array();
        for (const auto &e : cb.entries)
        {
            const std::string tag = detail::angle_tag(e.target_azimuth_deg);
            const ConfigMatrix case2 = case2_row_extension(e.config, k_rows);
            const PatternCut c1 = pattern_cut(config_to_phase_vector(e.config, s.polarization, s.reflection), aoa, local,
                                              lambda, s.ris_element, grid, true);
            const PatternCut c2 = pattern_cut(config_to_phase_vector(case2, s.polarization, s.reflection), aoa, local,
                                              lambda, s.ris_element, grid, true);
            PatternCut measured;
            measured.normalized = true;
            for (std::size_t i = 0; i < rx_grid.size(); ++i)
            {
                measured.angles.push_back({rx_grid[i], 0.0});
                measured.gains_db.push_back(wideband_power(measurement_models[i], e.config, s.reflection));
            }
            normalize_to_peak(measured.gains_db);

            out.csv("pattern_" + tag + "_case1.csv", detail::cut_body(c1));
            out.csv("pattern_" + tag + "_case2.csv", detail::cut_body(c2));
            out.csv("pattern_" + tag + "_measured.csv", detail::cut_body(measured));
            summary.push_back({{"target_azimuth_deg", e.target_azimuth_deg},
                               {"case1_main_lobe_deg", main_lobe_direction(c1).azimuth_deg},
                               {"case2_main_lobe_deg", main_lobe_direction(c2).azimuth_deg},
                               {"measured_main_lobe_deg", main_lobe_direction(measured).azimuth_deg},
                               {"case2_changed_config", !(case2 == e.config)}});
        }
        out.write("codebook.json", codebook_text(cb));
        out.finish(summary);
        return out.files();
    }

    // One sweep report per true Rx position plus a summary of errors and second-best margins.
    inline std::vector<std::string> run_sweep_experiment(ExperimentSpec spec)
    {
        spec.kind = ExperimentKind::sweep;
        const Scenario s = resolve_scenario(spec);
        const Codebook cb = resolve_codebook(spec, s);
        detail::OutputWriter out(spec, s);

        std::ostringstream summary_csv;
        summary_csv << "true_angle_deg,estimated_deg,error_deg,second_best_margin_dB\n";
        nlohmann::json summary = nlohmann::json::array();
        double worst = 0.0;
        for (double a : experiment_angles(s))
        {
            const SweepReport r = beam_sweep_estimate(with_rx_at(s, a), cb, spec.objective, s.reflection);
            std::ostringstream os;
            r.write_csv(os);
            out.csv("sweep_" + detail::angle_tag(a) + ".csv", os.str());
            const double margin = r.metric_db.size() >= 2 ? second_best_margin(r) : 0.0;
            summary_csv << detail::fmt("%.4f", a) << ',' << detail::fmt("%.4f", r.estimated_azimuth_deg) << ','
                        << detail::fmt("%.4f", r.error_deg) << ',' << detail::fmt("%.6f", margin) << '\n';
            summary.push_back({{"true_angle_deg", a}, {"estimated_deg", r.estimated_azimuth_deg}, {"error_deg", r.error_deg},
                               {"second_best_margin_db", margin}});
            worst = std::max(worst, r.error_deg);
        }
        out.csv("sweep_summary.csv", summary_csv.str());
        out.write("codebook.json", codebook_text(cb));
        out.finish({{"positions", summary}, {"max_error_deg", worst}});
        return out.files();
    }

    // Per-frequency pattern predictions of each entry and the main-lobe drift table.
    inline std::vector<std::string> run_frequency_experiment(ExperimentSpec spec)
    {
        spec.kind = ExperimentKind::frequency;
        const Scenario s = resolve_scenario(spec);
        const Codebook cb = resolve_codebook(spec, s);
        if (spec.frequencies_hz.empty())
            fail(ErrorCode::invalid_argument, "frequency experiment needs at least one frequency");
        detail::OutputWriter out(spec, s);

        const auto rx_grid = experiment_angles(s);
        const auto [lo, hi] = std::minmax_element(rx_grid.begin(), rx_grid.end());
        const auto grid = azimuth_grid(*lo, *hi, spec.grid_step_deg.value_or(0.25));
        const FrequencyReport rep =
            frequency_selectivity_report(s, cb, spec.frequencies_hz, grid, s.reflection, spec.drift_threshold_deg);

        std::ostringstream drift;
        drift << "entry_angle_deg";
        for (double f : rep.frequencies_hz)
            drift << ",main_lobe_deg@" << detail::fmt("%.3f", f / 1e9) << "GHz";
        drift << ",drift_deg,flagged\n";
        for (const auto &e : rep.entries)
        {
            std::ostringstream table;
            table << "azimuth_deg";
            for (double f : rep.frequencies_hz)
                table << ",gain_dB@" << detail::fmt("%.3f", f / 1e9) << "GHz";
            table << '\n';
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                table << detail::fmt("%.4f", grid[i]);
                for (const auto &cut : e.cuts)
                    table << ',' << detail::fmt("%.6f", cut.gains_db[i]);
                table << '\n';
            }
            out.csv("freq_" + detail::angle_tag(e.target_azimuth_deg) + ".csv", table.str());

            drift << detail::fmt("%.4f", e.target_azimuth_deg);
            for (double m : e.main_lobe_deg)
                drift << ',' << detail::fmt("%.4f", m);
            drift << ',' << detail::fmt("%.4f", e.drift_deg) << ',' << (e.flagged ? 1 : 0) << '\n';
        }
        out.csv("freq_drift.csv", drift.str());
        out.write("codebook.json", codebook_text(cb));
        out.finish({{"flagged_entries", rep.flagged_angles()}, {"drift_threshold_deg", rep.drift_threshold_deg}});
        return out.files();
    }

    // Exhaustive optimum against the column-row scan on a tiny array.
    inline std::vector<std::string> run_oracle_experiment(ExperimentSpec spec)
    {
        spec.kind = ExperimentKind::oracle;
        const Scenario s = resolve_scenario(spec);
        const CascadeModel model(s);
        const ExhaustiveResult oracle = exhaustive_oracle(model, spec.objective, s.reflection);
        const ScanResult scan = column_row_scan(model, spec.objective, spec.iterations, s.reflection);
        const double scan_db = wideband_power(model, scan.config, s.reflection);
        const double gap = std::abs(oracle.best_db - scan_db);
        const double better = fraction_better(oracle.values_db, scan_db, spec.objective);
        const bool monotone = scan.trace.is_monotone();

        detail::OutputWriter out(spec, s);
        std::ostringstream gap_csv;
        gap_csv << "objective,configurations,oracle_best_dB,scan_dB,gap_dB,fraction_better,trace_monotone\n"
                << to_string(spec.objective) << ',' << oracle.values_db.size() << ',' << detail::fmt("%.6f", oracle.best_db)
                << ',' << detail::fmt("%.6f", scan_db) << ',' << detail::fmt("%.6f", gap) << ','
                << detail::fmt("%.6f", better) << ',' << (monotone ? 1 : 0) << '\n';
        out.csv("oracle_gap.csv", gap_csv.str());
        std::ostringstream trace;
        scan.trace.write_csv(trace);
        out.csv("oracle_trace.csv", trace.str());
        out.write("oracle_best.txt", oracle.config.to_text());
        out.write("scan_result.txt", scan.config.to_text());
        out.finish({{"configurations", oracle.values_db.size()},
                    {"oracle_best_db", oracle.best_db},
                    {"scan_db", scan_db},
                    {"gap_db", gap},
                    {"fraction_better", better},
                    {"trace_monotone", monotone}});
        return out.files();
    }

    inline std::vector<std::string> run_experiment(const ExperimentSpec &spec)
    {
        switch (spec.kind)
        {
        case ExperimentKind::pattern:
            return run_pattern_experiment(spec);
        case ExperimentKind::sweep:
            return run_sweep_experiment(spec);
        case ExperimentKind::frequency:
            return run_frequency_experiment(spec);
        case ExperimentKind::oracle:
            return run_oracle_experiment(spec);
        }
        return {};
    }
}
