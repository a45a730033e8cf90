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

#include "oracles.hpp"

#include <risbeam/codebook.hpp>

#include <catch_amalgamated.hpp>

#include <filesystem>

using namespace risbeam;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    const Codebook &outdoor_scan_codebook()
    {
        static const Codebook cb = [] {
            const Scenario s = outdoor_preset();
            return build_codebook_scan(s, s.rx_azimuths_deg, Objective::maximize, 1, s.reflection);
        }();
        return cb;
    }

    ConfigMatrix random_config(std::size_t rows, std::size_t element_cols, std::mt19937_64 &rng)
    {
        std::bernoulli_distribution b(0.5);
        ConfigMatrix m(rows, element_cols);
        for (std::size_t i = 0; i < m.bit_count(); ++i)
            m.set_bit(i, b(rng));
        return m;
    }

    template <class F>
    ErrorCode code_of(F &&f)
    {
        try
        {
            f();
        }
        catch (const Error &e)
        {
            return e.code();
        }
        return ErrorCode::io;
    }
}

TEST_CASE("scan codebooks have one entry per angle", "[codebook]")
{
    const Codebook &cb = outdoor_scan_codebook();
    CHECK(cb.entries.size() == 13);
    for (std::size_t i = 0; i < cb.entries.size(); ++i)
    {
        CHECK(cb.entries[i].target_azimuth_deg == 5.0 * double(i));
        CHECK(cb.entries[i].provenance == Provenance::scan);
        CHECK(cb.entries[i].config.matches(outdoor_preset().ris));
    }
    CHECK_THAT(cb.tx_direction.azimuth_deg, WithinAbs(-15.0, 1e-12));

    const Scenario indoor = indoor_preset();
    CHECK(build_codebook_scan(indoor, indoor.rx_azimuths_deg, Objective::minimize, 1, indoor.reflection).entries.size() == 4);

    Scenario small = indoor;
    small.ris = ArrayGeometry{4, 4, kDefaultPitch, kDefaultPitch, small.ris.center};
    const std::vector<double> one{20.0};
    const Codebook single = build_codebook_scan(small, one, Objective::maximize, 1, small.reflection);
    REQUIRE(single.entries.size() == 1);
    CHECK(single.entries[0].provenance == Provenance::scan);
}

TEST_CASE("codebook angles must be sorted and inside the front half-space", "[codebook][errors]")
{
    const Scenario s = tiny_preset();
    const std::vector<double> unsorted{10.0, 5.0}, repeated{5.0, 5.0}, outside{0.0, 95.0}, none;
    for (const auto *angles : {&unsorted, &repeated, &outside, &none})
    {
        CHECK(code_of([&] { build_codebook_scan(s, *angles, Objective::maximize, 1, s.reflection); }) ==
              ErrorCode::invalid_argument);
        CHECK(code_of([&] { build_codebook_model(s, *angles, s.reflection); }) == ErrorCode::invalid_argument);
    }
}

TEST_CASE("model codebook entry at the specular angle is all state 1", "[codebook]")
{
    const ArrayGeometry g = ArrayGeometry::prototype();
    const std::vector<double> angles{15.0};
    const Codebook cb = build_codebook_model(Direction{-15.0, 0.0}, angles, g, kSpeedOfLight / 3.5e9, ReflectionModel{});
    const ConfigMatrix &m = cb.entries[0].config;
    CHECK(cb.entries[0].provenance == Provenance::model);
    for (std::size_t i = 0; i < m.bit_count(); ++i)
        CHECK(m.bit(i) == 1);
}

TEST_CASE("unquantized model entries are coherent", "[codebook]")
{
    const ArrayGeometry g = ArrayGeometry::prototype({0.0, 0.0, 1.3}).centered_at_origin();
    const double lambda = kSpeedOfLight / 3.5e9;
    const Direction aoa = incidence_parameters({-15.0, 0.0});
    for (double angle : azimuth_grid(0.0, 60.0, 5.0))
    {
        const auto w = continuous_optimal_config(aoa, {angle, 0.0}, g, lambda);
        CHECK_THAT(array_factor(w, aoa, {angle, 0.0}, g, lambda), WithinRel(1024.0 * 1024.0, 1e-9));
    }
}

TEST_CASE("quantized 20 degree model entry steers to 20 degrees", "[codebook][oracle]")
{
    // Broadside illumination keeps the conjugate lobe of the 1-bit pattern at -20 deg, off the cut.
    const ArrayGeometry g = ArrayGeometry::prototype();
    const double lambda = kSpeedOfLight / 3.5e9;
    const std::vector<double> angles{20.0};
    const Codebook cb = build_codebook_model(Direction{0.0, 0.0}, angles, g, lambda, ReflectionModel{});
    const auto w = config_to_phase_vector(cb.entries[0].config, Polarization::horizontal, ReflectionModel{});
    const auto grid = azimuth_grid(0.0, 60.0, 0.25);
    const auto cut = pattern_cut(w, {0.0, 0.0}, g, lambda, CosinePattern{}, grid, true);

    const auto u = oracle::positions(32, 32, g.pitch_y, g.pitch_z);
    std::vector<double> ref;
    for (double az : grid)
        ref.push_back(oracle::array_factor(u, w, 0.0, 0.0, az, 0.0, lambda) * std::pow(std::cos(oracle::rad(az)), 2));
    CHECK(main_lobe_direction(cut).azimuth_deg == grid[oracle::argmax(ref)]);
    CHECK(std::abs(main_lobe_direction(cut).azimuth_deg - 20.0) <= 2.0);
}

TEST_CASE("model codebook depends on angles only", "[codebook][property]")
{
    const Scenario s = outdoor_preset();
    Scenario far = s;
    far.rx.position = polar_position(s.ris.center, 25.0, 30.0, 1.3);
    far.ground.reset();
    const std::vector<double> angles{0.0, 20.0, 40.0};
    const Codebook a = build_codebook_model(s, angles, s.reflection);
    const Codebook b = build_codebook_model(far, angles, far.reflection);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        CHECK(a.entries[i].config == b.entries[i].config);
}

TEST_CASE("row extension examples", "[codebook]")
{
    ConfigMatrix m(4, 2);
    m.set(0, 0, true);
    m.set(1, 1, true);
    m.set(2, 2, true);
    m.set(3, 3, true);
    CHECK(case2_row_extension(m, 0) == m);
    const ConfigMatrix e = case2_row_extension(m, 2);
    CHECK(e.to_lines() == std::vector<std::string>{"1000", "0100", "0100", "0100"});
    CHECK(case2_row_extension(e, 2) == e);
    CHECK(code_of([&] { case2_row_extension(m, 4); }) == ErrorCode::invalid_argument);
    CHECK(default_case2_rows(32) == 8);
}

TEST_CASE("row extension is idempotent and leaves upper rows untouched", "[codebook][property]")
{
    std::mt19937_64 rng(55);
    for (int t = 0; t < 300; ++t)
    {
        const std::size_t rows = 1 + t % 9;
        const ConfigMatrix m = random_config(rows, 1 + t % 5, rng);
        const std::size_t k = std::size_t(t) % rows;
        const ConfigMatrix once = case2_row_extension(m, k);
        CHECK(case2_row_extension(once, k) == once);
        for (std::size_t r = 0; r + k < rows; ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                CHECK(once(r, c) == m(r, c));
    }
}

TEST_CASE("outdoor sweep with the scan codebook is exact", "[codebook][slow]")
{
    const Scenario s = outdoor_preset();
    const Codebook &cb = outdoor_scan_codebook();
    for (double angle : s.rx_azimuths_deg)
    {
        const SweepReport r = beam_sweep_estimate(with_rx_at(s, angle), cb, Objective::maximize, s.reflection);
        CHECK(r.error_deg == 0.0);
        CHECK(second_best_margin(r) >= 3.0);
        CHECK(r.normalized_db[r.chosen] == 0.0);
        CHECK(std::count(r.normalized_db.begin(), r.normalized_db.end(), 0.0) == 1);
    }
}

TEST_CASE("precomputed outdoor codebook applied indoors stays within 15 degrees", "[codebook][slow]")
{
    const Scenario s = indoor_preset();
    double worst = 0.0;
    for (double angle : s.rx_azimuths_deg)
        worst = std::max(worst, beam_sweep_estimate(with_rx_at(s, angle), outdoor_scan_codebook(), Objective::maximize,
                                                    s.reflection)
                                    .error_deg);
    CHECK(worst <= 15.0);
}

TEST_CASE("single-entry codebook is always chosen", "[codebook]")
{
    const Scenario s = with_rx_at(tiny_preset(), 40.0);
    Codebook cb;
    cb.entries.push_back({10.0, ConfigMatrix(2, 2), Provenance::model});
    const SweepReport r = beam_sweep_estimate(s, cb, Objective::maximize, s.reflection);
    CHECK(r.chosen == 0);
    CHECK(r.estimated_azimuth_deg == 10.0);
    CHECK_THAT(r.error_deg, WithinAbs(30.0, 1e-9));
    CHECK(code_of([&] { second_best_margin(r); }) == ErrorCode::invalid_argument);
}

TEST_CASE("sweep decisions", "[codebook]")
{
    const std::vector<double> angles{0.0, 5.0, 10.0};
    SECTION("margin")
    {
        const std::vector<double> m{0.0, -5.0, -7.0};
        CHECK(second_best_margin(make_sweep_report(angles, m, Objective::maximize, 0.0)) == 5.0);
        const std::vector<double> tie{-1.0, -1.0, -7.0};
        const SweepReport r = make_sweep_report(angles, tie, Objective::maximize, 5.0);
        CHECK(second_best_margin(r) == 0.0);
        CHECK(r.chosen == 0);
        CHECK(r.error_deg == 5.0);
    }
    SECTION("minimization normalizes to the minimum")
    {
        const std::vector<double> m{-60.0, -72.0, -65.0};
        const SweepReport r = make_sweep_report(angles, m, Objective::minimize, 5.0);
        CHECK(r.chosen == 1);
        CHECK(r.normalized_db == std::vector<double>{12.0, 0.0, 7.0});
        CHECK(r.error_deg == 0.0);
    }
    SECTION("a common offset does not change the decision")
    {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> v(-90.0, -40.0), off(-30.0, 30.0);
        for (int t = 0; t < 100; ++t)
        {
            std::vector<double> m{v(rng), v(rng), v(rng)};
            const double o = off(rng);
            std::vector<double> shifted(m);
            for (auto &x : shifted)
                x += o;
            for (Objective obj : {Objective::maximize, Objective::minimize})
                CHECK(make_sweep_report(angles, m, obj, 0.0).chosen == make_sweep_report(angles, shifted, obj, 0.0).chosen);
        }
    }
    SECTION("CSV layout")
    {
        const std::vector<double> m{-3.0, 0.0, -1.0};
        std::ostringstream os;
        make_sweep_report(angles, m, Objective::maximize, 5.0).write_csv(os);
        CHECK(os.str() == "entry_angle_deg,metric_dB_normalized,chosen,true_angle_deg,error_deg\n"
                          "0.0000,-3.000000,0,5.0000,0.0000\n"
                          "5.0000,0.000000,1,5.0000,0.0000\n"
                          "10.0000,-1.000000,0,5.0000,0.0000\n");
    }
}

TEST_CASE("empty or incompatible codebooks are rejected", "[codebook][errors]")
{
    const Scenario s = tiny_preset();
    Codebook empty;
    CHECK(code_of([&] { beam_sweep_estimate(s, empty, Objective::maximize, s.reflection); }) == ErrorCode::invalid_argument);
    const std::vector<double> angles{0.0, 30.0};
    const Codebook cb = build_codebook_model(s, angles, s.reflection);
    Scenario other = s;
    other.ris.rows = 3;
    CHECK(code_of([&] { beam_sweep_estimate(other, cb, Objective::maximize, s.reflection); }) == ErrorCode::invalid_argument);
    Codebook stripped = cb;
    stripped.geometry_fingerprint.clear();
    CHECK(code_of([&] { beam_sweep_estimate(other, stripped, Objective::maximize, s.reflection); }) ==
          ErrorCode::dimension_mismatch);
}

TEST_CASE("frequency report layout", "[codebook]")
{
    const Scenario s = outdoor_preset();
    const std::vector<double> angles{10.0, 40.0};
    const Codebook cb = build_codebook_model(s, angles, s.reflection);
    const auto grid = azimuth_grid(0.0, 60.0, 1.0);
    const std::vector<double> three{3.50e9, 3.55e9, 3.60e9};
    const auto rep = frequency_selectivity_report(s, cb, three, grid, s.reflection);
    REQUIRE(rep.entries.size() == 2);
    for (const auto &e : rep.entries)
    {
        CHECK(e.cuts.size() == 3);
        CHECK(e.main_lobe_deg.size() == 3);
        for (const auto &cut : e.cuts)
            CHECK(cut.gains_db.size() == grid.size());
    }
    const std::vector<double> one{3.5e9};
    for (const auto &e : frequency_selectivity_report(s, cb, one, grid, s.reflection).entries)
        CHECK(e.drift_deg == 0.0);
    CHECK(code_of([&] { frequency_selectivity_report(s, cb, std::vector<double>{}, grid, s.reflection); }) ==
          ErrorCode::invalid_argument);
    const auto strict = frequency_selectivity_report(s, cb, three, grid, s.reflection, -1.0);
    CHECK(strict.flagged_angles() == angles);
}

TEST_CASE("outdoor scan codebook keeps its main lobes across the band", "[codebook][slow]")
{
    const Scenario s = outdoor_preset();
    const auto grid = azimuth_grid(-90.0, 90.0, 0.25);
    const std::vector<double> band{3.4e9, 3.5e9, 3.6e9};
    const auto rep = frequency_selectivity_report(s, outdoor_scan_codebook(), band, grid, s.reflection);
    for (const auto &e : rep.entries)
        CHECK(e.drift_deg <= 5.0);
    CHECK(rep.flagged_angles().empty());
}

TEST_CASE("codebook file round-trip and errors", "[codebook]")
{
    const Scenario s = outdoor_preset();
    const std::vector<double> angles{0.0, 25.0, 50.0};
    const Codebook cb = build_codebook_model(s, angles, s.reflection);
    const auto path = (std::filesystem::temp_directory_path() / "risbeam_codebook_test.json").string();
    save_codebook(cb, path);
    CHECK(load_codebook(path) == cb);
    const auto j = parse_json_file(path);
    CHECK(j.at("geometry_fingerprint") == geometry_fingerprint(s.ris));
    CHECK(j.at("entries").at(0).at("config").at("states").size() == 32);

    write_text_file(path, R"({"format": "risbeam-codebook", "entries": []})");
    CHECK(code_of([&] { load_codebook(path); }) == ErrorCode::invalid_argument);
    write_text_file(path, R"({"format": "something-else", "entries": []})");
    CHECK(code_of([&] { load_codebook(path); }) == ErrorCode::invalid_argument);
    std::filesystem::remove(path);
    CHECK(code_of([&] { load_codebook(path); }) == ErrorCode::io);
}
