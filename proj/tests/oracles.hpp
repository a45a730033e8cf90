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

// Reference computations written from the defining formulas, independently of the library code paths.
// They use plain arrays and explicit loops, and share no helpers with include/risbeam.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle
{
    using cplx = std::complex<double>;
    using vec3 = std::array<double, 3>;

    constexpr double pi = 3.14159265358979323846;
    constexpr double c0 = 299792458.0;

    inline double rad(double deg) { return deg * pi / 180.0; }

    // Grid positions: x = 0 plane, column c along +y, row r along -z (row 0 on top), centered.
    inline std::vector<vec3> positions(std::size_t rows, std::size_t cols, double pitch_y, double pitch_z,
                                       vec3 center = {0.0, 0.0, 0.0})
    {
        std::vector<vec3> out;
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
            {
                const double y = (2.0 * double(c) - double(cols - 1)) * pitch_y / 2.0;
                const double z = (double(rows - 1) - 2.0 * double(r)) * pitch_z / 2.0;
                out.push_back({center[0], center[1] + y, center[2] + z});
            }
        return out;
    }

    inline vec3 wave(double az_deg, double el_deg, double lambda)
    {
        const double k = 2.0 * pi / lambda;
        const double az = rad(az_deg), el = rad(el_deg);
        return {k * std::cos(el) * std::cos(az), k * std::cos(el) * std::sin(az), k * std::sin(el)};
    }

    inline double kdotu(const vec3 &k, const vec3 &u) { return k[0] * u[0] + k[1] * u[1] + k[2] * u[2]; }

    // |sum_i w_i exp(-j k_aoa.u_i) exp(+j k_aod.u_i)|^2, summed term by term.
    inline double array_factor(const std::vector<vec3> &u, const std::vector<cplx> &w, double aoa_az, double aoa_el,
                               double aod_az, double aod_el, double lambda)
    {
        const vec3 ka = wave(aoa_az, aoa_el, lambda), kd = wave(aod_az, aod_el, lambda);
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
        {
            const double phase = -kdotu(ka, u[i]) + kdotu(kd, u[i]);
            re += w[i].real() * std::cos(phase) - w[i].imag() * std::sin(phase);
            im += w[i].real() * std::sin(phase) + w[i].imag() * std::cos(phase);
        }
        return re * re + im * im;
    }

    // (sum_i conj(h_r,i) conj(w_i) h_g,i + h_d) s + z, with each product expanded into real arithmetic.
    inline cplx received(const std::vector<cplx> &hg, const std::vector<cplx> &hr, const std::vector<cplx> &w, cplx hd,
                         cplx s, cplx z)
    {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
        {
            // conj(hr) * conj(w) = conj(hr * w)
            const double pr = hr[i].real() * w[i].real() - hr[i].imag() * w[i].imag();
            const double pi_ = -(hr[i].real() * w[i].imag() + hr[i].imag() * w[i].real());
            re += pr * hg[i].real() - pi_ * hg[i].imag();
            im += pr * hg[i].imag() + pi_ * hg[i].real();
        }
        const cplx cascade{re + hd.real(), im + hd.imag()};
        return {cascade.real() * s.real() - cascade.imag() * s.imag() + z.real(),
                cascade.real() * s.imag() + cascade.imag() * s.real() + z.imag()};
    }

    // Length of the ground-reflected path between two points above z = 0.
    inline double ground_path(const vec3 &a, const vec3 &b)
    {
        const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] + b[2];
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    inline double friis_amplitude(double lambda, double d) { return lambda / (4.0 * pi * d); }

    // Argmax over a list; ties resolved towards the lower index.
    template <class T>
    std::size_t argmax(const std::vector<T> &v)
    {
        std::size_t best = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[best])
                best = i;
        return best;
    }

    inline cplx unit_phasor(std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> ph(-pi, pi);
        const double a = ph(rng);
        return {std::cos(a), std::sin(a)};
    }

    inline cplx gaussian(std::mt19937_64 &rng)
    {
        std::normal_distribution<double> n(0.0, 1.0);
        const double re = n(rng);
        return {re, n(rng)};
    }
}
