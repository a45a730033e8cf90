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

#include <risbeam/geometry.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace risbeam
{
    // dB floor used whenever a linear gain of zero has to be written out.
    inline constexpr double kDbFloor = -200.0;

    inline double to_db(double linear)
    {
        if (!(linear > 0.0))
            return kDbFloor;
        return std::max(kDbFloor, 10.0 * std::log10(linear));
    }

    inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

    // ---------------------------------------------------------------------------------------------
    // Element patterns (linear power gain, evaluated in the element's local frame: boresight +x)

    struct IsotropicPattern
    {
        friend bool operator==(const IsotropicPattern &, const IsotropicPattern &) = default;
    };

    // peak * max(cos psi, 0)^(2q), psi = angle off boresight
    struct CosinePattern
    {
        double q = 1.0;
        double peak_gain_dbi = 5.0;
        friend bool operator==(const CosinePattern &, const CosinePattern &) = default;
    };

    // 3GPP TR 38.901 single-element pattern (vertical and horizontal cuts combined).
    struct Tr38901Pattern
    {
        double peak_gain_dbi = 8.0;
        double sla_v_db = 30.0; // also used as the maximum attenuation
        double beamwidth_deg = 65.0;
        friend bool operator==(const Tr38901Pattern &, const Tr38901Pattern &) = default;
    };

    using ElementPattern = std::variant<IsotropicPattern, CosinePattern, Tr38901Pattern>;

    // Cosine-power pattern with the requested half-power beamwidth. When the peak gain is not given,
    // the directivity of cos^(2q) over the front half-space, 2(2q+1), is used.
    inline CosinePattern cosine_with_beamwidth(double hpbw_deg, std::optional<double> peak_gain_dbi = std::nullopt)
    {
        if (!(hpbw_deg > 0.0) || !(hpbw_deg < 180.0))
            fail(ErrorCode::invalid_argument, "half-power beamwidth must lie in (0, 180) degrees");
        const double q = std::log(0.5) / (2.0 * std::log(std::cos(deg_to_rad(0.5 * hpbw_deg))));
        const double peak = peak_gain_dbi ? *peak_gain_dbi : 10.0 * std::log10(2.0 * (2.0 * q + 1.0));
        return {q, peak};
    }

    inline void validate(const ElementPattern &p)
    {
        std::visit([](const auto &v)
                   {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, CosinePattern>)
            {
                if (!(v.q >= 0.0) || !std::isfinite(v.q) || !std::isfinite(v.peak_gain_dbi))
                    fail(ErrorCode::invalid_argument, "cosine pattern needs finite q >= 0 and a finite peak gain");
            }
            else if constexpr (std::is_same_v<T, Tr38901Pattern>)
            {
                if (!(v.beamwidth_deg > 0.0) || !(v.sla_v_db >= 0.0) || !std::isfinite(v.peak_gain_dbi))
                    fail(ErrorCode::invalid_argument, "tr38901 pattern needs beamwidth > 0 and sla_v >= 0");
            } },
                   p);
    }

    // Gain towards a unit vector given in the element's local frame.
    inline double element_gain(const ElementPattern &p, const Vec3 &local_unit)
    {
        return std::visit([&](const auto &v) -> double
                          {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IsotropicPattern>)
                return 1.0;
            else if constexpr (std::is_same_v<T, CosinePattern>)
            {
                const double c = std::max(local_unit.x, 0.0);
                if (c == 0.0)
                    return 0.0;
                return from_db(v.peak_gain_dbi) * std::pow(c, 2.0 * v.q);
            }
            else
            {
                const Direction d = Direction::from_vector(local_unit);
                const double a_v = std::min(12.0 * std::pow(d.elevation_deg / v.beamwidth_deg, 2), v.sla_v_db);
                const double a_h = std::min(12.0 * std::pow(d.azimuth_deg / v.beamwidth_deg, 2), v.sla_v_db);
                const double att = std::min(a_v + a_h, v.sla_v_db);
                return from_db(v.peak_gain_dbi - att);
            } },
                          p);
    }

    inline double element_gain(const ElementPattern &p, const Direction &local)
    {
        return element_gain(p, local.unit());
    }

    // Expresses a global-frame vector in the local frame of an antenna whose boresight points along
    // `boresight` (rotation about z by -azimuth, then about y by +elevation).
    inline Vec3 to_local_frame(const Vec3 &v, const Direction &boresight)
    {
        const double az = boresight.azimuth_rad(), el = boresight.elevation_rad();
        const double x1 = std::cos(az) * v.x + std::sin(az) * v.y;
        const double y1 = -std::sin(az) * v.x + std::cos(az) * v.y;
        return {x1 * std::cos(el) + v.z * std::sin(el), y1, -x1 * std::sin(el) + v.z * std::cos(el)};
    }

    // ---------------------------------------------------------------------------------------------
    // Array factor

    // Evaluates A(aod) = |omega^T (a(aoa) .* conj(a(aod)))|^2 for a fixed configuration and AoA.
    class ArrayFactorEvaluator
    {
    public:
        ArrayFactorEvaluator(std::span<const Complex> omega, const Direction &aoa, const ArrayGeometry &geom, double wavelength)
            : positions_(element_positions(geom)), wavelength_(wavelength)
        {
            if (omega.size() != positions_.size())
                fail(ErrorCode::dimension_mismatch, "phase vector has " + std::to_string(omega.size()) +
                                                        " entries, geometry has " + std::to_string(positions_.size()));
            const ComplexVector a = array_response(positions_, aoa, wavelength);
            weighted_.resize(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                weighted_[i] = omega[i] * a[i];
        }

        double operator()(const Direction &aod) const
        {
            const Vec3 k = wave_vector(aod, wavelength_);
            Complex sum = 0.0;
            for (std::size_t i = 0; i < weighted_.size(); ++i)
                sum += weighted_[i] * std::polar(1.0, k.dot(positions_[i]));
            return std::norm(sum);
        }

    private:
        std::vector<Position> positions_;
        ComplexVector weighted_;
        double wavelength_;
    };

    inline double array_factor(std::span<const Complex> omega, const Direction &aoa, const Direction &aod,
                               const ArrayGeometry &geom, double wavelength)
    {
        return ArrayFactorEvaluator(omega, aoa, geom, wavelength)(aod);
    }

    // G = A(aod) G_R0(aoa) G_R0(aod); the RIS element frame coincides with the global frame.
    inline double overall_gain(std::span<const Complex> omega, const Direction &aoa, const Direction &aod,
                               const ArrayGeometry &geom, double wavelength, const ElementPattern &element)
    {
        return array_factor(omega, aoa, aod, geom, wavelength) * element_gain(element, aoa) * element_gain(element, aod);
    }

    // ---------------------------------------------------------------------------------------------
    // Pattern cuts

    struct PatternCut
    {
        std::vector<Direction> angles;
        std::vector<double> gains_db;
        bool normalized = false;

        void write_csv(std::ostream &os) const
        {
            os << "azimuth_deg,gain_dB\n";
            char buf[96];
            for (std::size_t i = 0; i < angles.size(); ++i)
            {
                std::snprintf(buf, sizeof buf, "%.4f,%.6f\n", angles[i].azimuth_deg, gains_db[i]);
                os << buf;
            }
        }
    };

    // Inclusive grid start, start+step, ..., stop (stop is included when it lies on the grid).
    inline std::vector<double> azimuth_grid(double start_deg, double stop_deg, double step_deg)
    {
        if (!(step_deg > 0.0) || !(stop_deg >= start_deg))
            fail(ErrorCode::invalid_argument, "azimuth grid needs step > 0 and stop >= start");
        const auto n = static_cast<std::size_t>(std::floor((stop_deg - start_deg) / step_deg + 1e-9)) + 1;
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = start_deg + double(i) * step_deg;
        return out;
    }

    // Subtracts the maximum so that the peak sits at exactly 0 dB.
    inline void normalize_to_peak(std::vector<double> &db)
    {
        if (db.empty())
            return;
        const double peak = *std::max_element(db.begin(), db.end());
        for (double &v : db)
            v -= peak;
    }

    inline PatternCut pattern_cut(std::span<const Complex> omega, const Direction &aoa, const ArrayGeometry &geom,
                                  double wavelength, const ElementPattern &element, std::span<const double> azimuths_deg,
                                  bool normalize, double elevation_deg = 0.0)
    {
        if (azimuths_deg.empty())
            fail(ErrorCode::invalid_argument, "pattern cut needs a nonempty azimuth grid");
        const ArrayFactorEvaluator af(omega, aoa, geom, wavelength);
        const double aoa_gain = element_gain(element, aoa);
        PatternCut cut;
        cut.normalized = normalize;
        cut.angles.reserve(azimuths_deg.size());
        cut.gains_db.reserve(azimuths_deg.size());
        for (double az : azimuths_deg)
        {
            const Direction aod{az, elevation_deg};
            cut.angles.push_back(aod);
            cut.gains_db.push_back(to_db(af(aod) * aoa_gain * element_gain(element, aod)));
        }
        if (normalize)
            normalize_to_peak(cut.gains_db);
        return cut;
    }

    // Grid angle of maximum gain; ties go to the smaller azimuth.
    inline Direction main_lobe_direction(const PatternCut &cut)
    {
        if (cut.angles.empty() || cut.angles.size() != cut.gains_db.size())
            fail(ErrorCode::invalid_argument, "main lobe of an empty or malformed cut");
        std::size_t best = 0;
        for (std::size_t i = 1; i < cut.gains_db.size(); ++i)
        {
            const double g = cut.gains_db[i], b = cut.gains_db[best];
            if (g > b || (g == b && cut.angles[i].azimuth_deg < cut.angles[best].azimuth_deg))
                best = i;
        }
        return cut.angles[best];
    }

    // ---------------------------------------------------------------------------------------------
    // JSON

    inline void to_json(nlohmann::json &j, const ElementPattern &p)
    {
        std::visit([&](const auto &v)
                   {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IsotropicPattern>)
                j = {{"kind", "isotropic"}};
            else if constexpr (std::is_same_v<T, CosinePattern>)
                j = {{"kind", "cosine"}, {"q", v.q}, {"peak_gain_dbi", v.peak_gain_dbi}};
            else
                j = {{"kind", "tr38901"}, {"peak_gain_dbi", v.peak_gain_dbi}, {"sla_v_db", v.sla_v_db}, {"beamwidth_deg", v.beamwidth_deg}}; },
                   p);
    }

    // Accepted forms: {"kind":"isotropic"}, {"kind":"cosine","q":..,"peak_gain_dbi":..},
    // {"kind":"cosine","half_power_beamwidth_deg":..[,"peak_gain_dbi":..]}, {"kind":"tr38901",...}.
    inline void from_json(const nlohmann::json &j, ElementPattern &p)
    {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "isotropic")
            p = IsotropicPattern{};
        else if (kind == "cosine")
        {
            if (j.contains("half_power_beamwidth_deg"))
            {
                std::optional<double> peak;
                if (j.contains("peak_gain_dbi"))
                    peak = j.at("peak_gain_dbi").get<double>();
                p = cosine_with_beamwidth(j.at("half_power_beamwidth_deg").get<double>(), peak);
            }
            else
                p = CosinePattern{j.value("q", 1.0), j.value("peak_gain_dbi", 5.0)};
        }
        else if (kind == "tr38901")
            p = Tr38901Pattern{j.value("peak_gain_dbi", 8.0), j.value("sla_v_db", 30.0), j.value("beamwidth_deg", 65.0)};
        else
            fail(ErrorCode::invalid_argument, "unknown element pattern kind '" + kind + "'");
        validate(p);
    }
}
