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

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace risbeam
{
    using Complex = std::complex<double>;
    using ComplexVector = std::vector<Complex>;

    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kSpeedOfLight = 299792458.0; // m/s

    constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
    constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

    inline double wavelength_of(double frequency_hz)
    {
        if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
            fail(ErrorCode::invalid_argument, "frequency must be positive, got " + std::to_string(frequency_hz));
        return kSpeedOfLight / frequency_hz;
    }

    // ---------------------------------------------------------------------------------------------
    // 3-vectors. Global frame: RIS plane is x = 0 with broadside along +x, columns along +y, rows
    // stacked along z (positive up).

    struct Vec3
    {
        double x = 0.0, y = 0.0, z = 0.0;

        Vec3 &operator+=(const Vec3 &o)
        {
            x += o.x, y += o.y, z += o.z;
            return *this;
        }
        Vec3 &operator-=(const Vec3 &o)
        {
            x -= o.x, y -= o.y, z -= o.z;
            return *this;
        }
        friend Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
        friend Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
        friend Vec3 operator*(double s, const Vec3 &v) { return {s * v.x, s * v.y, s * v.z}; }
        friend Vec3 operator-(const Vec3 &v) { return {-v.x, -v.y, -v.z}; }
        friend bool operator==(const Vec3 &, const Vec3 &) = default;

        double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
        double norm() const { return std::sqrt(dot(*this)); }
        bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
    };

    using Position = Vec3;

    // ---------------------------------------------------------------------------------------------
    // Direction in degrees. Azimuth is measured in the horizontal plane from +x towards +y, elevation
    // from the horizontal plane (positive up). Directions seen from the RIS lie in the front half-space
    // (|azimuth| <= 90); directions seen from the Tx/Rx nodes may use the full azimuth circle.

    struct Direction
    {
        double azimuth_deg = 0.0;
        double elevation_deg = 0.0;

        friend bool operator==(const Direction &, const Direction &) = default;

        double azimuth_rad() const { return deg_to_rad(azimuth_deg); }
        double elevation_rad() const { return deg_to_rad(elevation_deg); }

        // Unit vector [cos(el)cos(az), cos(el)sin(az), sin(el)].
        Vec3 unit() const
        {
            const double az = azimuth_rad(), el = elevation_rad();
            return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
        }

        bool in_front() const { return azimuth_deg >= -90.0 && azimuth_deg <= 90.0; }

        static Direction from_vector(const Vec3 &v)
        {
            const double horizontal = std::hypot(v.x, v.y);
            if (horizontal == 0.0 && v.z == 0.0)
                fail(ErrorCode::degenerate_geometry, "direction of a zero-length vector");
            return {rad_to_deg(std::atan2(v.y, v.x)), rad_to_deg(std::atan2(v.z, horizontal))};
        }
    };

    // Validating constructor for user-supplied angles.
    inline Direction make_direction(double azimuth_deg, double elevation_deg)
    {
        if (!std::isfinite(azimuth_deg) || !std::isfinite(elevation_deg))
            fail(ErrorCode::invalid_argument, "direction angles must be finite");
        if (azimuth_deg < -180.0 || azimuth_deg > 180.0)
            fail(ErrorCode::invalid_argument, "azimuth out of [-180, 180]: " + std::to_string(azimuth_deg));
        if (elevation_deg < -90.0 || elevation_deg > 90.0)
            fail(ErrorCode::invalid_argument, "elevation out of [-90, 90]: " + std::to_string(elevation_deg));
        return {azimuth_deg, elevation_deg};
    }

    // Same as make_direction, restricted to the RIS front half-space.
    inline Direction make_ris_direction(double azimuth_deg, double elevation_deg)
    {
        if (azimuth_deg < -90.0 || azimuth_deg > 90.0)
            fail(ErrorCode::invalid_argument, "RIS-side azimuth out of [-90, 90]: " + std::to_string(azimuth_deg));
        return make_direction(azimuth_deg, elevation_deg);
    }

    // Array-factor angle convention: a wave incident from geometric direction d has the same in-plane
    // wave-vector components as a wave leaving towards the mirror image of d through the surface
    // normal. The specular outgoing direction therefore carries the incident direction's parameters.
    inline Direction incidence_parameters(const Direction &geometric)
    {
        return {-geometric.azimuth_deg, -geometric.elevation_deg};
    }

    struct Bearing
    {
        Direction direction;
        double distance = 0.0;
    };

    inline Bearing direction_between(const Position &from, const Position &to)
    {
        if (!from.finite() || !to.finite())
            fail(ErrorCode::invalid_argument, "non-finite position");
        const Vec3 d = to - from;
        const double dist = d.norm();
        if (dist == 0.0)
            fail(ErrorCode::degenerate_geometry, "coincident points");
        return {Direction::from_vector(d), dist};
    }

    // ---------------------------------------------------------------------------------------------

    // Default element pitch: half a wavelength at 3.5 GHz.
    inline constexpr double kDefaultPitch = kSpeedOfLight / 3.5e9 / 2.0;

    struct ArrayGeometry
    {
        std::size_t rows = 32; // N_x, stacked along z, row 0 on top
        std::size_t cols = 32; // N_y, along +y
        double pitch_y = kDefaultPitch;
        double pitch_z = kDefaultPitch;
        Position center{};

        friend bool operator==(const ArrayGeometry &, const ArrayGeometry &) = default;

        std::size_t size() const { return rows * cols; }

        void validate() const
        {
            if (rows == 0 || cols == 0)
                fail(ErrorCode::invalid_geometry, "array needs at least one row and one column");
            if (!(pitch_y > 0.0) || !(pitch_z > 0.0) || !std::isfinite(pitch_y) || !std::isfinite(pitch_z))
                fail(ErrorCode::invalid_geometry, "element pitch must be positive");
            if (!center.finite())
                fail(ErrorCode::invalid_geometry, "array center must be finite");
        }

        ArrayGeometry centered_at_origin() const
        {
            ArrayGeometry g = *this;
            g.center = {};
            return g;
        }

        // Four 16x16 tiles in a 2x2 arrangement.
        static ArrayGeometry prototype(Position center = {})
        {
            return {32, 32, kDefaultPitch, kDefaultPitch, center};
        }
    };

    // Row-major element positions, row 0 at the top, column 0 at the most negative y.
    inline std::vector<Position> element_positions(const ArrayGeometry &geom)
    {
        geom.validate();
        std::vector<Position> out;
        out.reserve(geom.size());
        const double row_mid = 0.5 * double(geom.rows - 1);
        const double col_mid = 0.5 * double(geom.cols - 1);
        for (std::size_t r = 0; r < geom.rows; ++r)
            for (std::size_t c = 0; c < geom.cols; ++c)
                out.push_back({geom.center.x,
                               geom.center.y + (double(c) - col_mid) * geom.pitch_y,
                               geom.center.z + (row_mid - double(r)) * geom.pitch_z});
        return out;
    }

    // k = 2pi/lambda [cos(el)cos(az), cos(el)sin(az), sin(el)] in rad/m.
    inline Vec3 wave_vector(const Direction &dir, double wavelength)
    {
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            fail(ErrorCode::invalid_argument, "wavelength must be positive");
        return (2.0 * kPi / wavelength) * dir.unit();
    }

    // a_i = exp(-j k^T u_i)
    inline ComplexVector array_response(const std::vector<Position> &positions, const Direction &dir, double wavelength)
    {
        const Vec3 k = wave_vector(dir, wavelength);
        ComplexVector a(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i)
            a[i] = std::polar(1.0, -k.dot(positions[i]));
        return a;
    }

    inline ComplexVector array_response(const ArrayGeometry &geom, const Direction &dir, double wavelength)
    {
        return array_response(element_positions(geom), dir, wavelength);
    }
}
