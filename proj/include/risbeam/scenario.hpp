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

#include <risbeam/errors.hpp>
#include <risbeam/geometry.hpp>
#include <risbeam/pattern.hpp>
#include <risbeam/phase_config.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace risbeam
{
    struct FrequencyGrid
    {
        double f_start = 3.4e9; // Hz
        double f_stop = 3.6e9;  // Hz
        std::size_t n_points = 801;

        friend bool operator==(const FrequencyGrid &, const FrequencyGrid &) = default;

        void validate() const
        {
            if (!(f_start > 0.0) || !(f_stop > f_start) || !std::isfinite(f_stop))
                fail(ErrorCode::invalid_argument, "frequency grid needs 0 < f_start < f_stop");
            if (n_points == 0)
                fail(ErrorCode::invalid_argument, "frequency grid needs at least one point");
        }

        double center() const { return 0.5 * (f_start + f_stop); }

        // Evenly spaced, endpoints included. A single-point grid sits at the band center.
        std::vector<double> frequencies() const
        {
            validate();
            if (n_points == 1)
                return {center()};
            std::vector<double> f(n_points);
            const double step = (f_stop - f_start) / double(n_points - 1);
            for (std::size_t i = 0; i < n_points; ++i)
                f[i] = f_start + double(i) * step;
            f.back() = f_stop;
            return f;
        }
    };

    // Tx or Rx terminal. Without an explicit boresight the antenna points at the RIS center.
    struct Node
    {
        Position position{};
        ElementPattern antenna = IsotropicPattern{};
        std::optional<Direction> boresight;

        friend bool operator==(const Node &, const Node &) = default;
    };

    // Ground plane z = 0.
    struct GroundPlane
    {
        Complex reflection{-1.0, 0.0};
        friend bool operator==(const GroundPlane &, const GroundPlane &) = default;
    };

    struct Point2
    {
        double x = 0.0, y = 0.0;
        friend bool operator==(const Point2 &, const Point2 &) = default;
    };

    // Vertical reflecting plane restricted to the horizontal footprint start -> end.
    struct WallSegment
    {
        Point2 start;
        Point2 end;
        Complex reflection{-0.6, 0.0};
        friend bool operator==(const WallSegment &, const WallSegment &) = default;
    };

    struct NoiseSettings
    {
        double variance = 0.0;
        std::uint64_t seed = 0;
        friend bool operator==(const NoiseSettings &, const NoiseSettings &) = default;
    };

    // Per-element phase model of the RIS legs. Planar uses the plane-wave array response at the ray
    // direction; spherical uses the exact distance from each element to the (image) terminal.
    enum class Wavefront
    {
        planar,
        spherical
    };

    inline const char *to_string(Wavefront w) { return w == Wavefront::planar ? "planar" : "spherical"; }

    inline Wavefront parse_wavefront(const std::string &s)
    {
        if (s == "planar")
            return Wavefront::planar;
        if (s == "spherical")
            return Wavefront::spherical;
        fail(ErrorCode::invalid_argument, "wavefront must be 'planar' or 'spherical', got '" + s + "'");
    }

    struct Scenario
    {
        std::string name = "scenario";
        ArrayGeometry ris;
        ElementPattern ris_element = CosinePattern{1.0, 5.0};
        Node tx;
        Node rx;
        std::optional<GroundPlane> ground;
        std::vector<WallSegment> reflectors;
        bool direct_link_enabled = true;
        FrequencyGrid frequency_grid;
        std::optional<NoiseSettings> noise;
        Polarization polarization = Polarization::horizontal;
        ReflectionModel reflection;
        std::vector<double> rx_azimuths_deg; // Rx positions of the experiment grid
        Wavefront wavefront = Wavefront::planar;

        friend bool operator==(const Scenario &, const Scenario &) = default;

        const Position &ris_center() const { return ris.center; }

        Direction boresight_of(const Node &n) const
        {
            return n.boresight ? *n.boresight : direction_between(n.position, ris.center).direction;
        }

        void validate() const
        {
            ris.validate();
            risbeam::validate(ris_element);
            risbeam::validate(tx.antenna);
            risbeam::validate(rx.antenna);
            frequency_grid.validate();
            reflection.validate();
            for (const Node *n : {&tx, &rx})
            {
                const char *which = n == &tx ? "tx" : "rx";
                if (!n->position.finite())
                    fail(ErrorCode::invalid_argument, std::string(which) + " position must be finite");
                if (!(n->position.x > ris.center.x))
                    fail(ErrorCode::invalid_geometry, std::string(which) + " must lie in front of the RIS (x > RIS x)");
                if (ground && !(n->position.z > 0.0))
                    fail(ErrorCode::invalid_geometry, std::string(which) + " must be above the ground plane");
            }
            if (ground && !(ris.center.z > 0.0))
                fail(ErrorCode::invalid_geometry, "RIS center must be above the ground plane");
            if (ground && std::abs(ground->reflection) > 1.0)
                fail(ErrorCode::invalid_argument, "ground reflection magnitude exceeds 1");
            for (const auto &w : reflectors)
            {
                if (std::abs(w.reflection) > 1.0)
                    fail(ErrorCode::invalid_argument, "reflector coefficient magnitude exceeds 1");
                if (w.start == w.end)
                    fail(ErrorCode::invalid_geometry, "reflector footprint has zero length");
            }
            if (noise && !(noise->variance >= 0.0))
                fail(ErrorCode::invalid_argument, "noise variance must be nonnegative");
            for (double a : rx_azimuths_deg)
                make_ris_direction(a, 0.0);
        }
    };

    // Geometric direction of the Tx as seen from the RIS center.
    inline Direction tx_direction(const Scenario &s) { return direction_between(s.ris.center, s.tx.position).direction; }

    // True AoA used for scoring: Rx azimuth at the RIS center, rounded to 1e-9 deg so that positions
    // placed by with_rx_at give back their nominal angle exactly.
    inline double true_rx_azimuth(const Scenario &s)
    {
        const double az = direction_between(s.ris.center, s.rx.position).direction.azimuth_deg;
        return std::round(az * 1e9) / 1e9;
    }

    // Moves the Rx to a new azimuth around the RIS center, keeping its horizontal range and height.
    // The Rx antenna is re-aimed at the RIS.
    inline Scenario with_rx_at(const Scenario &s, double azimuth_deg)
    {
        make_ris_direction(azimuth_deg, 0.0);
        Scenario out = s;
        const Vec3 rel = s.rx.position - s.ris.center;
        const double range = std::hypot(rel.x, rel.y);
        if (range == 0.0)
            fail(ErrorCode::degenerate_geometry, "Rx sits above the RIS center; azimuth undefined");
        const double az = deg_to_rad(azimuth_deg);
        out.rx.position = {s.ris.center.x + range * std::cos(az), s.ris.center.y + range * std::sin(az), s.rx.position.z};
        out.rx.boresight.reset();
        return out;
    }

    // ---------------------------------------------------------------------------------------------
    // JSON (units: meters, Hz, degrees, dB)

    namespace detail
    {
        inline nlohmann::json complex_json(Complex c) { return {c.real(), c.imag()}; }

        inline Complex complex_from(const nlohmann::json &j)
        {
            if (j.is_number())
                return {j.get<double>(), 0.0};
            const auto v = j.get<std::vector<double>>();
            if (v.size() != 2)
                fail(ErrorCode::invalid_argument, "complex values are [re, im] pairs");
            return {v[0], v[1]};
        }

        inline nlohmann::json vec_json(const Vec3 &v) { return {v.x, v.y, v.z}; }

        inline Vec3 vec_from(const nlohmann::json &j)
        {
            const auto v = j.get<std::vector<double>>();
            if (v.size() != 3)
                fail(ErrorCode::invalid_argument, "positions are [x, y, z] triples");
            return {v[0], v[1], v[2]};
        }

        inline nlohmann::json node_json(const Node &n)
        {
            nlohmann::json j = {{"position_m", vec_json(n.position)}, {"antenna", n.antenna}};
            if (n.boresight)
                j["boresight"] = {{"azimuth_deg", n.boresight->azimuth_deg}, {"elevation_deg", n.boresight->elevation_deg}};
            return j;
        }

        inline Node node_from(const nlohmann::json &j)
        {
            Node n;
            n.position = vec_from(j.at("position_m"));
            if (j.contains("antenna"))
                n.antenna = j.at("antenna").get<ElementPattern>();
            if (j.contains("boresight") && !j.at("boresight").is_null())
                n.boresight = make_direction(j.at("boresight").at("azimuth_deg").get<double>(),
                                             j.at("boresight").value("elevation_deg", 0.0));
            return n;
        }
    }

    inline nlohmann::json scenario_to_json(const Scenario &s)
    {
        using nlohmann::json;
        json j;
        j["name"] = s.name;
        j["ris"] = {{"rows", s.ris.rows},
                    {"cols", s.ris.cols},
                    {"pitch_y_m", s.ris.pitch_y},
                    {"pitch_z_m", s.ris.pitch_z},
                    {"center_m", detail::vec_json(s.ris.center)},
                    {"element_pattern", s.ris_element}};
        j["tx"] = detail::node_json(s.tx);
        j["rx"] = detail::node_json(s.rx);
        j["ground"] = s.ground ? json{{"reflection", detail::complex_json(s.ground->reflection)}} : json(nullptr);
        j["reflectors"] = json::array();
        for (const auto &w : s.reflectors)
            j["reflectors"].push_back({{"start_m", {w.start.x, w.start.y}},
                                       {"end_m", {w.end.x, w.end.y}},
                                       {"reflection", detail::complex_json(w.reflection)}});
        j["direct_link"] = s.direct_link_enabled;
        j["frequency_grid"] = {{"start_hz", s.frequency_grid.f_start},
                               {"stop_hz", s.frequency_grid.f_stop},
                               {"points", s.frequency_grid.n_points}};
        j["noise"] = s.noise ? json{{"variance", s.noise->variance}, {"seed", s.noise->seed}} : json(nullptr);
        j["polarization"] = to_string(s.polarization);
        j["reflection_model"] = s.reflection;
        j["rx_azimuths_deg"] = s.rx_azimuths_deg;
        j["wavefront"] = to_string(s.wavefront);
        return j;
    }

    inline Scenario scenario_from_json(const nlohmann::json &j)
    {
        Scenario s;
        try
        {
            s.name = j.value("name", std::string("scenario"));
            const auto &r = j.at("ris");
            s.ris.rows = r.at("rows").get<std::size_t>();
            s.ris.cols = r.at("cols").get<std::size_t>();
            s.ris.pitch_y = r.value("pitch_y_m", kDefaultPitch);
            s.ris.pitch_z = r.value("pitch_z_m", kDefaultPitch);
            s.ris.center = r.contains("center_m") ? detail::vec_from(r.at("center_m")) : Position{};
            if (r.contains("element_pattern"))
                s.ris_element = r.at("element_pattern").get<ElementPattern>();
            s.tx = detail::node_from(j.at("tx"));
            s.rx = detail::node_from(j.at("rx"));
            if (j.contains("ground") && !j.at("ground").is_null())
            {
                GroundPlane g;
                if (j.at("ground").contains("reflection"))
                    g.reflection = detail::complex_from(j.at("ground").at("reflection"));
                s.ground = g;
            }
            for (const auto &w : j.value("reflectors", nlohmann::json::array()))
            {
                const auto a = w.at("start_m").get<std::vector<double>>();
                const auto b = w.at("end_m").get<std::vector<double>>();
                if (a.size() != 2 || b.size() != 2)
                    fail(ErrorCode::invalid_argument, "reflector endpoints are [x, y] pairs");
                WallSegment seg{{a[0], a[1]}, {b[0], b[1]}};
                if (w.contains("reflection"))
                    seg.reflection = detail::complex_from(w.at("reflection"));
                s.reflectors.push_back(seg);
            }
            s.direct_link_enabled = j.value("direct_link", true);
            if (j.contains("frequency_grid"))
            {
                const auto &f = j.at("frequency_grid");
                s.frequency_grid = {f.at("start_hz").get<double>(), f.at("stop_hz").get<double>(),
                                    f.at("points").get<std::size_t>()};
            }
            if (j.contains("noise") && !j.at("noise").is_null())
                s.noise = NoiseSettings{j.at("noise").value("variance", 0.0), j.at("noise").value("seed", std::uint64_t{0})};
            s.polarization = parse_polarization(j.value("polarization", std::string("h")));
            if (j.contains("reflection_model"))
                s.reflection = j.at("reflection_model").get<ReflectionModel>();
            s.rx_azimuths_deg = j.value("rx_azimuths_deg", std::vector<double>{});
            s.wavefront = parse_wavefront(j.value("wavefront", std::string("planar")));
        }
        catch (const nlohmann::json::exception &e)
        {
            fail(ErrorCode::invalid_argument, std::string("malformed scenario: ") + e.what());
        }
        s.validate();
        return s;
    }

    inline std::string read_text_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            fail(ErrorCode::io, "cannot open '" + path + "'");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return text;
    }

    inline void write_text_file(const std::string &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            fail(ErrorCode::io, "cannot write '" + path + "'");
        out << text;
        if (!out)
            fail(ErrorCode::io, "write failed for '" + path + "'");
    }

    inline nlohmann::json parse_json_file(const std::string &path)
    {
        const std::string text = read_text_file(path);
        try
        {
            return nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            fail(ErrorCode::invalid_argument, "'" + path + "' is not valid JSON: " + e.what());
        }
    }

    inline Scenario load_scenario(const std::string &path) { return scenario_from_json(parse_json_file(path)); }

    inline void save_scenario(const Scenario &s, const std::string &path)
    {
        write_text_file(path, scenario_to_json(s).dump(2) + "\n");
    }

    // ---------------------------------------------------------------------------------------------
    // Fingerprints: FNV-1a 64 over canonical JSON.

    inline std::string fnv1a_hex(const std::string &text)
    {
        std::uint64_t h = 14695981039346656037ULL;
        for (unsigned char ch : text)
        {
            h ^= ch;
            h *= 1099511628211ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    inline std::string fingerprint(const Scenario &s) { return fnv1a_hex(scenario_to_json(s).dump()); }

    // Geometry fingerprint ignores the mounting point: a codebook depends on the grid, not on where
    // the panel hangs.
    inline std::string geometry_fingerprint(const ArrayGeometry &g)
    {
        const nlohmann::json j = {{"rows", g.rows}, {"cols", g.cols}, {"pitch_y_m", g.pitch_y}, {"pitch_z_m", g.pitch_z}};
        return fnv1a_hex(j.dump());
    }

    // ---------------------------------------------------------------------------------------------
    // Presets

    inline constexpr double kNodeHeight = 1.3; // m
    inline constexpr double kPanelBeamwidth = 20.0; // deg, Tx/Rx flat-panel antennas

    inline Position polar_position(const Position &origin, double range, double azimuth_deg, double height)
    {
        const double az = deg_to_rad(azimuth_deg);
        return {origin.x + range * std::cos(az), origin.y + range * std::sin(az), height};
    }

    // Open-field setup: Tx fixed at -15 deg, 8.5 m; Rx at 8.5 m on 0..60 deg (5 deg steps); all nodes at
    // 1.3 m over ground; 3.4-3.6 GHz sampled at 801 points. At 8.5 m the 32x32 panel is well inside its
    // Fraunhofer distance, so the preset traces exact per-element path lengths.
    inline Scenario outdoor_preset()
    {
        Scenario s;
        s.name = "outdoor";
        s.ris = ArrayGeometry::prototype({0.0, 0.0, kNodeHeight});
        s.ris_element = CosinePattern{1.0, 5.0};
        s.tx.position = polar_position(s.ris.center, 8.5, -15.0, kNodeHeight);
        s.tx.antenna = cosine_with_beamwidth(kPanelBeamwidth);
        s.rx.position = polar_position(s.ris.center, 8.5, 30.0, kNodeHeight);
        s.rx.antenna = cosine_with_beamwidth(kPanelBeamwidth);
        s.ground = GroundPlane{{-1.0, 0.0}};
        s.direct_link_enabled = true;
        s.frequency_grid = {3.4e9, 3.6e9, 801};
        s.rx_azimuths_deg = azimuth_grid(0.0, 60.0, 5.0);
        s.wavefront = Wavefront::spherical;
        return s;
    }

    // Room setup: Tx fixed at -15 deg, 5.5 m; Rx at 8.5 m on 0..45 deg (15 deg steps). The room layout is
    // an assumption: side walls at y = -4 m and y = +7 m, back wall at x = 10 m, reflective floor.
    inline Scenario indoor_preset()
    {
        Scenario s = outdoor_preset();
        s.name = "indoor";
        s.tx.position = polar_position(s.ris.center, 5.5, -15.0, kNodeHeight);
        s.rx.position = polar_position(s.ris.center, 8.5, 15.0, kNodeHeight);
        s.ground = GroundPlane{{-0.7, 0.0}};
        s.reflectors = {
            WallSegment{{0.0, -4.0}, {10.0, -4.0}, {-0.7, 0.0}},
            WallSegment{{0.0, 7.0}, {10.0, 7.0}, {-0.7, 0.0}},
            WallSegment{{10.0, -4.0}, {10.0, 7.0}, {-0.7, 0.0}},
        };
        s.rx_azimuths_deg = azimuth_grid(0.0, 45.0, 15.0);
        return s;
    }

    // Smallest useful setup for the exhaustive oracle: a 2x2 panel (8 state bits) with plane-wave
    // illumination and a handful of frequency points.
    inline Scenario tiny_preset()
    {
        Scenario s;
        s.name = "tiny";
        s.ris.rows = 2;
        s.ris.cols = 2;
        s.ris.center = {0.0, 0.0, kNodeHeight};
        s.tx.position = polar_position(s.ris.center, 3.0, -15.0, kNodeHeight);
        s.tx.antenna = IsotropicPattern{};
        s.rx.position = polar_position(s.ris.center, 3.0, 30.0, kNodeHeight);
        s.rx.antenna = IsotropicPattern{};
        s.ground = GroundPlane{{-1.0, 0.0}};
        s.direct_link_enabled = false;
        s.frequency_grid = {3.4e9, 3.6e9, 11};
        s.rx_azimuths_deg = {30.0};
        return s;
    }

    inline Scenario preset_by_name(const std::string &name)
    {
        if (name == "outdoor")
            return outdoor_preset();
        if (name == "indoor")
            return indoor_preset();
        if (name == "tiny")
            return tiny_preset();
        fail(ErrorCode::invalid_argument, "unknown preset '" + name + "' (expected outdoor, indoor or tiny)");
    }
}
