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

#include <risbeam/channel.hpp>
#include <risbeam/optimizer.hpp>
#include <risbeam/pattern.hpp>
#include <risbeam/phase_config.hpp>
#include <risbeam/scenario.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace risbeam
{
    enum class Provenance
    {
        scan,
        model
    };

    inline const char *to_string(Provenance p) { return p == Provenance::scan ? "scan" : "model"; }

    struct CodebookEntry
    {
        double target_azimuth_deg = 0.0;
        ConfigMatrix config;
        Provenance provenance = Provenance::scan;

        friend bool operator==(const CodebookEntry &, const CodebookEntry &) = default;
    };

    struct Codebook
    {
        std::vector<CodebookEntry> entries;
        Direction tx_direction{};          // geometric Tx direction at build time
        std::string scenario_fingerprint;  // informational
        std::string geometry_fingerprint;  // must match the scenario a sweep runs on

        friend bool operator==(const Codebook &, const Codebook &) = default;

        void validate() const
        {
            if (entries.empty())
                fail(ErrorCode::invalid_argument, "codebook has no entries");
            for (std::size_t i = 1; i < entries.size(); ++i)
                if (!(entries[i].target_azimuth_deg > entries[i - 1].target_azimuth_deg))
                    fail(ErrorCode::invalid_argument, "codebook target angles must be strictly increasing");
            const auto &first = entries.front().config;
            for (const auto &e : entries)
                if (e.config.rows() != first.rows() || e.config.cols() != first.cols())
                    fail(ErrorCode::dimension_mismatch, "codebook entries have different matrix sizes");
        }

        void require_compatible(const Scenario &s) const
        {
            validate();
            if (!geometry_fingerprint.empty() && geometry_fingerprint != risbeam::geometry_fingerprint(s.ris))
                fail(ErrorCode::invalid_argument, "codebook was built for a different RIS geometry");
            entries.front().config.require_matches(s.ris);
        }
    };

    namespace detail
    {
        inline void require_sorted_angles(std::span<const double> angles)
        {
            if (angles.empty())
                fail(ErrorCode::invalid_argument, "codebook needs at least one target angle");
            for (std::size_t i = 0; i < angles.size(); ++i)
            {
                make_ris_direction(angles[i], 0.0);
                if (i > 0 && !(angles[i] > angles[i - 1]))
                    fail(ErrorCode::invalid_argument, "codebook angles must be strictly increasing");
            }
        }
    }

    // One column-row scan per target angle with the Rx moved to that azimuth.
    inline Codebook build_codebook_scan(const Scenario &base, std::span<const double> rx_angles_deg, Objective objective,
                                        std::size_t iterations, const ReflectionModel &refl)
    {
        detail::require_sorted_angles(rx_angles_deg);
        Codebook cb;
        cb.tx_direction = tx_direction(base);
        cb.scenario_fingerprint = fingerprint(base);
        cb.geometry_fingerprint = geometry_fingerprint(base.ris);
        for (double angle : rx_angles_deg)
        {
            const ScanResult r = column_row_scan(with_rx_at(base, angle), objective, iterations, refl);
            cb.entries.push_back({angle, r.config, Provenance::scan});
        }
        return cb;
    }

    // Quantized continuous optimum per target angle. `tx_dir` is the geometric Tx direction seen from
    // the RIS; it enters the array factor through its incidence parameters. Element positions are taken
    // relative to the array center, so entries depend on angles only.
    inline Codebook build_codebook_model(const Direction &tx_dir, std::span<const double> rx_angles_deg,
                                         const ArrayGeometry &geom, double wavelength, const ReflectionModel &refl)
    {
        detail::require_sorted_angles(rx_angles_deg);
        geom.validate();
        refl.validate();
        const ArrayGeometry local = geom.centered_at_origin();
        const Direction aoa = incidence_parameters(tx_dir);
        Codebook cb;
        cb.tx_direction = tx_dir;
        cb.geometry_fingerprint = geometry_fingerprint(geom);
        for (double angle : rx_angles_deg)
        {
            const ComplexVector omega = continuous_optimal_config(aoa, {angle, 0.0}, local, wavelength);
            const auto states = quantize_1bit_states(omega, refl);
            cb.entries.push_back({angle, config_from_states(states, geom.rows, geom.cols), Provenance::model});
        }
        return cb;
    }

    inline Codebook build_codebook_model(const Scenario &s, std::span<const double> rx_angles_deg, const ReflectionModel &refl)
    {
        Codebook cb = build_codebook_model(tx_direction(s), rx_angles_deg, s.ris,
                                           wavelength_of(s.frequency_grid.center()), refl);
        cb.scenario_fingerprint = fingerprint(s);
        return cb;
    }

    // ---------------------------------------------------------------------------------------------

    // Replaces the bottom k rows by copies of the row directly above them (row N_x - k, 1-based).
    inline ConfigMatrix case2_row_extension(const ConfigMatrix &phi, std::size_t k_rows)
    {
        if (k_rows >= phi.rows())
            fail(ErrorCode::invalid_argument, "row extension needs k_rows < rows (" + std::to_string(k_rows) +
                                                  " >= " + std::to_string(phi.rows()) + ")");
        ConfigMatrix out = phi;
        if (k_rows == 0)
            return out;
        const std::size_t source = phi.rows() - k_rows - 1;
        for (std::size_t r = source + 1; r < phi.rows(); ++r)
            for (std::size_t c = 0; c < phi.cols(); ++c)
                out.set(r, c, phi(source, c));
        return out;
    }

    // Bottom quarter of the rows.
    inline std::size_t default_case2_rows(std::size_t rows) { return rows / 4; }

    // ---------------------------------------------------------------------------------------------

    struct SweepReport
    {
        Objective objective = Objective::maximize;
        std::vector<double> entry_angles_deg;
        std::vector<double> metric_db;            // absolute wideband power per entry
        std::vector<double> normalized_db;        // max_to_0 (maximize) or min_to_0 (minimize)
        std::size_t chosen = 0;
        double estimated_azimuth_deg = 0.0;
        double true_azimuth_deg = 0.0;
        double error_deg = 0.0;

        void write_csv(std::ostream &os) const
        {
            os << "entry_angle_deg,metric_dB_normalized,chosen,true_angle_deg,error_deg\n";
            char buf[160];
            for (std::size_t i = 0; i < entry_angles_deg.size(); ++i)
            {
                std::snprintf(buf, sizeof buf, "%.4f,%.6f,%d,%.4f,%.4f\n", entry_angles_deg[i], normalized_db[i],
                              i == chosen ? 1 : 0, true_azimuth_deg, error_deg);
                os << buf;
            }
        }
    };

    // Picks the extremum of already-computed per-entry metrics; ties go to the smaller angle (entries
    // are sorted, so the first extremum wins).
    inline SweepReport make_sweep_report(std::span<const double> angles, std::span<const double> metric_db,
                                         Objective objective, double true_azimuth_deg)
    {
        if (angles.empty() || angles.size() != metric_db.size())
            fail(ErrorCode::invalid_argument, "sweep needs one metric per codebook entry");
        SweepReport r;
        r.objective = objective;
        r.entry_angles_deg.assign(angles.begin(), angles.end());
        r.metric_db.assign(metric_db.begin(), metric_db.end());
        r.normalized_db = normalize_powers(metric_db, objective == Objective::maximize ? NormalizeMode::max_to_0
                                                                                       : NormalizeMode::min_to_0);
        for (std::size_t i = 1; i < metric_db.size(); ++i)
            if (improves(objective, metric_db[i], metric_db[r.chosen]))
                r.chosen = i;
        r.estimated_azimuth_deg = angles[r.chosen];
        r.true_azimuth_deg = true_azimuth_deg;
        r.error_deg = std::abs(r.estimated_azimuth_deg - true_azimuth_deg);
        return r;
    }

    inline SweepReport beam_sweep_estimate(const CascadeModel &model, double true_azimuth_deg, const Codebook &cb,
                                           Objective objective, const ReflectionModel &refl)
    {
        cb.validate();
        std::vector<double> angles, metric;
        for (const auto &e : cb.entries)
        {
            angles.push_back(e.target_azimuth_deg);
            metric.push_back(wideband_power(model, e.config, refl));
        }
        return make_sweep_report(angles, metric, objective, true_azimuth_deg);
    }

    inline SweepReport beam_sweep_estimate(const Scenario &s, const Codebook &cb, Objective objective,
                                           const ReflectionModel &refl)
    {
        cb.require_compatible(s);
        return beam_sweep_estimate(CascadeModel(s), true_rx_azimuth(s), cb, objective, refl);
    }

    // |metric(best) - metric(second best)|
    inline double second_best_margin(const SweepReport &r)
    {
        if (r.metric_db.size() < 2)
            fail(ErrorCode::invalid_argument, "second-best margin needs at least two entries");
        double runner_up = r.objective == Objective::maximize ? -INFINITY : INFINITY;
        for (std::size_t i = 0; i < r.metric_db.size(); ++i)
            if (i != r.chosen && improves(r.objective, r.metric_db[i], runner_up))
                runner_up = r.metric_db[i];
        return std::abs(r.metric_db[r.chosen] - runner_up);
    }

    // ---------------------------------------------------------------------------------------------

    struct FrequencyEntryReport
    {
        double target_azimuth_deg = 0.0;
        std::vector<PatternCut> cuts;        // one per frequency, normalized
        std::vector<double> main_lobe_deg;   // one per frequency
        double drift_deg = 0.0;              // max - min main-lobe azimuth
        bool flagged = false;
    };

    struct FrequencyReport
    {
        std::vector<double> frequencies_hz;
        double drift_threshold_deg = 5.0;
        std::vector<FrequencyEntryReport> entries;

        std::vector<double> flagged_angles() const
        {
            std::vector<double> out;
            for (const auto &e : entries)
                if (e.flagged)
                    out.push_back(e.target_azimuth_deg);
            return out;
        }
    };

    // Pattern prediction of every entry at each frequency, with the main-lobe drift across frequencies.
    inline FrequencyReport frequency_selectivity_report(const Scenario &s, const Codebook &cb, std::span<const double> freqs_hz,
                                                        std::span<const double> azimuth_grid_deg, const ReflectionModel &refl,
                                                        double drift_threshold_deg = 5.0)
    {
        if (freqs_hz.empty())
            fail(ErrorCode::invalid_argument, "frequency report needs at least one frequency");
        cb.require_compatible(s);
        const Direction aoa = incidence_parameters(tx_direction(s));
        const ArrayGeometry local = s.ris.centered_at_origin();
        FrequencyReport rep;
        rep.frequencies_hz.assign(freqs_hz.begin(), freqs_hz.end());
        rep.drift_threshold_deg = drift_threshold_deg;
        for (const auto &e : cb.entries)
        {
            FrequencyEntryReport er;
            er.target_azimuth_deg = e.target_azimuth_deg;
            const PhaseVector omega = config_to_phase_vector(e.config, s.polarization, refl);
            for (double f : freqs_hz)
            {
                er.cuts.push_back(pattern_cut(omega, aoa, local, wavelength_of(f), s.ris_element, azimuth_grid_deg, true));
                er.main_lobe_deg.push_back(main_lobe_direction(er.cuts.back()).azimuth_deg);
            }
            const auto [lo, hi] = std::minmax_element(er.main_lobe_deg.begin(), er.main_lobe_deg.end());
            er.drift_deg = *hi - *lo;
            er.flagged = er.drift_deg > drift_threshold_deg;
            rep.entries.push_back(std::move(er));
        }
        return rep;
    }

    // ---------------------------------------------------------------------------------------------
    // Codebook file

    inline nlohmann::json codebook_to_json(const Codebook &cb)
    {
        nlohmann::json j;
        j["format"] = "risbeam-codebook";
        j["version"] = 1;
        j["geometry_fingerprint"] = cb.geometry_fingerprint;
        j["scenario_fingerprint"] = cb.scenario_fingerprint;
        j["tx_direction"] = {{"azimuth_deg", cb.tx_direction.azimuth_deg}, {"elevation_deg", cb.tx_direction.elevation_deg}};
        j["entries"] = nlohmann::json::array();
        for (const auto &e : cb.entries)
            j["entries"].push_back({{"target_azimuth_deg", e.target_azimuth_deg},
                                    {"provenance", to_string(e.provenance)},
                                    {"config", e.config}});
        return j;
    }

    inline Codebook codebook_from_json(const nlohmann::json &j)
    {
        Codebook cb;
        try
        {
            if (j.value("format", std::string()) != "risbeam-codebook")
                fail(ErrorCode::invalid_argument, "not a codebook file");
            cb.geometry_fingerprint = j.value("geometry_fingerprint", std::string());
            cb.scenario_fingerprint = j.value("scenario_fingerprint", std::string());
            if (j.contains("tx_direction"))
                cb.tx_direction = {j.at("tx_direction").value("azimuth_deg", 0.0), j.at("tx_direction").value("elevation_deg", 0.0)};
            for (const auto &e : j.at("entries"))
            {
                const std::string prov = e.value("provenance", std::string("scan"));
                if (prov != "scan" && prov != "model")
                    fail(ErrorCode::invalid_argument, "unknown codebook provenance '" + prov + "'");
                cb.entries.push_back({e.at("target_azimuth_deg").get<double>(), e.at("config").get<ConfigMatrix>(),
                                      prov == "scan" ? Provenance::scan : Provenance::model});
            }
        }
        catch (const nlohmann::json::exception &e)
        {
            fail(ErrorCode::invalid_argument, std::string("malformed codebook: ") + e.what());
        }
        cb.validate();
        return cb;
    }

    inline Codebook load_codebook(const std::string &path) { return codebook_from_json(parse_json_file(path)); }

    inline void save_codebook(const Codebook &cb, const std::string &path)
    {
        write_text_file(path, codebook_to_json(cb).dump(2) + "\n");
    }
}
