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
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace risbeam
{
    enum class Polarization
    {
        horizontal, // first column of each pair
        vertical    // second column of each pair
    };

    inline const char *to_string(Polarization p) { return p == Polarization::horizontal ? "h" : "v"; }

    inline Polarization parse_polarization(const std::string &s)
    {
        if (s == "h" || s == "horizontal")
            return Polarization::horizontal;
        if (s == "v" || s == "vertical")
            return Polarization::vertical;
        fail(ErrorCode::invalid_argument, "unknown polarization '" + s + "'");
    }

    // ---------------------------------------------------------------------------------------------
    // Binary state matrix of a dual-polarized RIS: rows x (2 * element columns). Columns 2k and 2k+1
    // (0-based) drive the two polarizations of element column k.

    class ConfigMatrix
    {
    public:
        ConfigMatrix() = default;

        ConfigMatrix(std::size_t rows, std::size_t element_cols, std::uint8_t fill = 0)
            : rows_(rows), cols_(2 * element_cols), states_(rows * 2 * element_cols, fill ? 1 : 0)
        {
            if (rows == 0 || element_cols == 0)
                fail(ErrorCode::invalid_argument, "configuration matrix needs at least one row and column");
        }

        static ConfigMatrix zeros(const ArrayGeometry &geom) { return ConfigMatrix(geom.rows, geom.cols, 0); }

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }
        std::size_t element_cols() const { return cols_ / 2; }
        std::size_t bit_count() const { return states_.size(); }

        std::uint8_t operator()(std::size_t r, std::size_t c) const { return states_[r * cols_ + c]; }
        void set(std::size_t r, std::size_t c, bool v) { states_[r * cols_ + c] = v ? 1 : 0; }

        // Linear bit access in row-major order.
        std::uint8_t bit(std::size_t i) const { return states_[i]; }
        void set_bit(std::size_t i, bool v) { states_[i] = v ? 1 : 0; }

        void flip_column(std::size_t c)
        {
            for (std::size_t r = 0; r < rows_; ++r)
                states_[r * cols_ + c] ^= 1;
        }

        void flip_row(std::size_t r)
        {
            for (std::size_t c = 0; c < cols_; ++c)
                states_[r * cols_ + c] ^= 1;
        }

        void flip_all()
        {
            for (auto &s : states_)
                s ^= 1;
        }

        bool matches(const ArrayGeometry &geom) const { return rows_ == geom.rows && cols_ == 2 * geom.cols; }

        void require_matches(const ArrayGeometry &geom) const
        {
            if (!matches(geom))
                fail(ErrorCode::dimension_mismatch, "configuration " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                                                        " does not fit a " + std::to_string(geom.rows) + "x" +
                                                        std::to_string(geom.cols) + " dual-polarized array");
        }

        // Every column uniform across rows.
        bool is_column_constant() const
        {
            for (std::size_t c = 0; c < cols_; ++c)
                for (std::size_t r = 1; r < rows_; ++r)
                    if ((*this)(r, c) != (*this)(0, c))
                        return false;
            return true;
        }

        friend bool operator==(const ConfigMatrix &, const ConfigMatrix &) = default;

        // Plain-text grid, one line of '0'/'1' characters per row.
        std::vector<std::string> to_lines() const
        {
            std::vector<std::string> lines(rows_, std::string(cols_, '0'));
            for (std::size_t r = 0; r < rows_; ++r)
                for (std::size_t c = 0; c < cols_; ++c)
                    lines[r][c] = (*this)(r, c) ? '1' : '0';
            return lines;
        }

        std::string to_text() const
        {
            std::string out;
            for (const auto &l : to_lines())
                out += l + '\n';
            return out;
        }

        static ConfigMatrix from_lines(const std::vector<std::string> &lines)
        {
            if (lines.empty())
                fail(ErrorCode::invalid_argument, "empty configuration grid");
            const std::size_t width = lines.front().size();
            if (width == 0 || width % 2 != 0)
                fail(ErrorCode::invalid_argument, "configuration rows need an even, nonzero number of states");
            ConfigMatrix m(lines.size(), width / 2);
            for (std::size_t r = 0; r < lines.size(); ++r)
            {
                if (lines[r].size() != width)
                    fail(ErrorCode::invalid_argument, "ragged configuration grid at row " + std::to_string(r + 1));
                for (std::size_t c = 0; c < width; ++c)
                {
                    const char ch = lines[r][c];
                    if (ch != '0' && ch != '1')
                        fail(ErrorCode::invalid_argument, std::string("invalid state character '") + ch + "'");
                    m.set(r, c, ch == '1');
                }
            }
            return m;
        }

        static ConfigMatrix from_text(const std::string &text)
        {
            std::istringstream is(text);
            std::vector<std::string> lines;
            for (std::string line; std::getline(is, line);)
            {
                while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
                    line.pop_back();
                if (!line.empty())
                    lines.push_back(line);
            }
            return from_lines(lines);
        }

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<std::uint8_t> states_;
    };

    inline void to_json(nlohmann::json &j, const ConfigMatrix &m)
    {
        j = {{"rows", m.rows()}, {"cols", m.cols()}, {"states", m.to_lines()}};
    }

    inline void from_json(const nlohmann::json &j, ConfigMatrix &m)
    {
        m = ConfigMatrix::from_lines(j.at("states").get<std::vector<std::string>>());
        if (j.contains("rows") && j.at("rows").get<std::size_t>() != m.rows())
            fail(ErrorCode::invalid_argument, "configuration 'rows' does not match its grid");
        if (j.contains("cols") && j.at("cols").get<std::size_t>() != m.cols())
            fail(ErrorCode::invalid_argument, "configuration 'cols' does not match its grid");
    }

    // ---------------------------------------------------------------------------------------------

    // Complex reflection coefficient per binary state. State 0 is -pi/2, state 1 is +pi/2 by default.
    struct ReflectionModel
    {
        Complex state0{0.0, -1.0};
        Complex state1{0.0, 1.0};

        friend bool operator==(const ReflectionModel &, const ReflectionModel &) = default;

        static ReflectionModel ideal() { return {}; }

        // Ideal phases with a per-state amplitude (phase-dependent amplitude imperfection).
        static ReflectionModel with_amplitudes(double amplitude0, double amplitude1)
        {
            ReflectionModel m{std::polar(amplitude0, -kPi / 2), std::polar(amplitude1, kPi / 2)};
            m.validate();
            return m;
        }

        Complex coefficient(bool state) const { return state ? state1 : state0; }

        void validate() const
        {
            constexpr double tol = 1e-12;
            if (!(std::abs(state0) <= 1.0 + tol) || !(std::abs(state1) <= 1.0 + tol))
                fail(ErrorCode::invalid_argument, "reflection coefficients must satisfy |c| <= 1");
            if (std::abs(state0) == 0.0 || std::abs(state1) == 0.0)
                fail(ErrorCode::invalid_argument, "reflection coefficients must be nonzero");
        }
    };

    inline void to_json(nlohmann::json &j, const ReflectionModel &m)
    {
        j = {{"state0", {m.state0.real(), m.state0.imag()}}, {"state1", {m.state1.real(), m.state1.imag()}}};
    }

    inline void from_json(const nlohmann::json &j, ReflectionModel &m)
    {
        const auto c0 = j.at("state0").get<std::vector<double>>();
        const auto c1 = j.at("state1").get<std::vector<double>>();
        if (c0.size() != 2 || c1.size() != 2)
            fail(ErrorCode::invalid_argument, "reflection states are [re, im] pairs");
        m = {{c0[0], c0[1]}, {c1[0], c1[1]}};
        m.validate();
    }

    // One coefficient per physical element (row-major) for the simulated polarization.
    using PhaseVector = ComplexVector;

    // Selected polarization's states, row-major, one per physical element.
    inline std::vector<std::uint8_t> selected_states(const ConfigMatrix &phi, Polarization pol)
    {
        const std::size_t offset = pol == Polarization::horizontal ? 0 : 1;
        std::vector<std::uint8_t> bits;
        bits.reserve(phi.rows() * phi.element_cols());
        for (std::size_t r = 0; r < phi.rows(); ++r)
            for (std::size_t k = 0; k < phi.element_cols(); ++k)
                bits.push_back(phi(r, 2 * k + offset));
        return bits;
    }

    inline PhaseVector config_to_phase_vector(const ConfigMatrix &phi, Polarization pol, const ReflectionModel &refl)
    {
        const auto bits = selected_states(phi, pol);
        PhaseVector omega(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i)
            omega[i] = refl.coefficient(bits[i]);
        return omega;
    }

    inline PhaseVector config_to_phase_vector(const ConfigMatrix &phi, const ArrayGeometry &geom, Polarization pol,
                                              const ReflectionModel &refl)
    {
        phi.require_matches(geom);
        return config_to_phase_vector(phi, pol, refl);
    }

    // Builds a configuration from per-element states with both polarizations driven identically.
    inline ConfigMatrix config_from_states(std::span<const std::uint8_t> states, std::size_t rows, std::size_t element_cols)
    {
        if (states.size() != rows * element_cols)
            fail(ErrorCode::dimension_mismatch, "state count does not match the array size");
        ConfigMatrix m(rows, element_cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t k = 0; k < element_cols; ++k)
            {
                const bool s = states[r * element_cols + k] != 0;
                m.set(r, 2 * k, s);
                m.set(r, 2 * k + 1, s);
            }
        return m;
    }

    // ---------------------------------------------------------------------------------------------

    // omega^T = (a(aoa) .* conj(a(aod)))^H, which makes A(aoa -> aod) = N^2.
    inline ComplexVector continuous_optimal_config(const Direction &aoa, const Direction &aod, const ArrayGeometry &geom,
                                                   double wavelength)
    {
        const auto positions = element_positions(geom);
        const ComplexVector a_in = array_response(positions, aoa, wavelength);
        const ComplexVector a_out = array_response(positions, aod, wavelength);
        ComplexVector omega(positions.size());
        for (std::size_t i = 0; i < omega.size(); ++i)
            omega[i] = std::conj(a_in[i] * std::conj(a_out[i]));
        return omega;
    }

    namespace detail
    {
        inline double phase_distance(Complex a, Complex b) { return std::abs(std::arg(a * std::conj(b))); }
        inline constexpr double kTieTolerance = 1e-12;
    }

    // Nearest state by phase distance; equidistant entries snap to state 1.
    inline std::vector<std::uint8_t> quantize_1bit_states(std::span<const Complex> omega, const ReflectionModel &refl)
    {
        std::vector<std::uint8_t> bits(omega.size());
        for (std::size_t i = 0; i < omega.size(); ++i)
        {
            if (omega[i] == Complex(0.0))
                fail(ErrorCode::invalid_argument, "cannot quantize a zero entry (index " + std::to_string(i) + ")");
            const double d0 = detail::phase_distance(omega[i], refl.state0);
            const double d1 = detail::phase_distance(omega[i], refl.state1);
            bits[i] = d1 <= d0 + detail::kTieTolerance ? 1 : 0;
        }
        return bits;
    }

    inline PhaseVector quantize_1bit(std::span<const Complex> omega, const ReflectionModel &refl)
    {
        const auto bits = quantize_1bit_states(omega, refl);
        PhaseVector out(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i)
            out[i] = refl.coefficient(bits[i]);
        return out;
    }
}
