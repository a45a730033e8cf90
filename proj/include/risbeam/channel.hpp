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
#include <risbeam/pattern.hpp>
#include <risbeam/phase_config.hpp>
#include <risbeam/scenario.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace risbeam
{
    enum class RayKind
    {
        los,
        ground_bounce,
        wall_reflection,
        direct
    };

    inline const char *to_string(RayKind k)
    {
        switch (k)
        {
        case RayKind::los:
            return "los";
        case RayKind::ground_bounce:
            return "ground_bounce";
        case RayKind::wall_reflection:
            return "wall_reflection";
        case RayKind::direct:
            return "direct";
        }
        return "unknown";
    }

    enum class Segment
    {
        tx_to_ris,
        ris_to_rx,
        tx_to_rx
    };

    struct Ray
    {
        RayKind kind = RayKind::los;
        Position start{};
        Position end{};
        std::optional<Position> bounce;
        double path_length = 0.0;
        Complex reflection{1.0, 0.0}; // cumulative
        Direction departure{};        // at start, towards the next point of the path
        Direction arrival{};          // at end, pointing back along the incoming path
    };

    namespace detail
    {
        inline Ray make_ray(RayKind kind, const Position &start, const Position &end, std::optional<Position> bounce,
                            double length, Complex gamma)
        {
            const Position &next = bounce ? *bounce : end;
            const Position &prev = bounce ? *bounce : start;
            return {kind, start, end, bounce, length, gamma,
                    direction_between(start, next).direction, direction_between(end, prev).direction};
        }

        inline std::optional<Ray> ground_ray(const Position &a, const Position &b, Complex gamma)
        {
            if (!(a.z > 0.0) || !(b.z > 0.0))
                return std::nullopt;
            const Position image{a.x, a.y, -a.z};
            const double t = a.z / (a.z + b.z);
            const Position bounce = image + t * (b - image);
            return make_ray(RayKind::ground_bounce, a, b, bounce, (b - image).norm(), gamma);
        }

        // Single specular bounce off an infinite vertical plane, kept only when the specular point
        // falls on the wall footprint and both endpoints are strictly on the same side.
        inline std::optional<Ray> wall_ray(const Position &a, const Position &b, const WallSegment &w)
        {
            const double wx = w.end.x - w.start.x, wy = w.end.y - w.start.y;
            const double len = std::hypot(wx, wy);
            if (len == 0.0)
                return std::nullopt;
            const double nx = -wy / len, ny = wx / len;
            const double da = nx * (a.x - w.start.x) + ny * (a.y - w.start.y);
            const double db = nx * (b.x - w.start.x) + ny * (b.y - w.start.y);
            if (!(da * db > 0.0))
                return std::nullopt;
            const Position image{a.x - 2.0 * da * nx, a.y - 2.0 * da * ny, a.z};
            const double t = da / (da + db);
            const Position bounce = image + t * (b - image);
            const double u = ((bounce.x - w.start.x) * wx + (bounce.y - w.start.y) * wy) / (len * len);
            if (u < 0.0 || u > 1.0)
                return std::nullopt;
            return make_ray(RayKind::wall_reflection, a, b, bounce, (b - image).norm(), w.reflection);
        }
    }

    // LoS plus ground bounce (image method) plus one single-bounce ray per reflector that admits a
    // specular point on its footprint.
    inline std::vector<Ray> trace_rays(const Scenario &s, Segment segment)
    {
        Position a, b;
        switch (segment)
        {
        case Segment::tx_to_ris:
            a = s.tx.position, b = s.ris.center;
            break;
        case Segment::ris_to_rx:
            a = s.ris.center, b = s.rx.position;
            break;
        case Segment::tx_to_rx:
            a = s.tx.position, b = s.rx.position;
            break;
        }
        std::vector<Ray> rays;
        const Bearing los = direction_between(a, b);
        rays.push_back(detail::make_ray(segment == Segment::tx_to_rx ? RayKind::direct : RayKind::los, a, b,
                                        std::nullopt, los.distance, {1.0, 0.0}));
        if (s.ground)
            if (auto r = detail::ground_ray(a, b, s.ground->reflection))
                rays.push_back(*r);
        for (const auto &w : s.reflectors)
            if (auto r = detail::wall_ray(a, b, w))
                rays.push_back(*r);
        return rays;
    }

    // ---------------------------------------------------------------------------------------------

    // Channel at one frequency: y = (h_r^H Theta h_g + h_d) s + z.
    struct ChannelRealization
    {
        double frequency_hz = 0.0;
        ComplexVector h_g; // Tx -> RIS
        ComplexVector h_r; // RIS -> Rx (conjugated in the signal model)
        Complex h_d{};     // Tx -> Rx
    };

    namespace detail
    {
        struct RayTerm
        {
            double amplitude_factor; // sqrt(antenna gains), frequency independent
            double path_length;
            Complex reflection;
            std::vector<double> offsets; // d . u_i for RIS legs, empty otherwise
        };

        inline double node_gain(const Scenario &s, const Node &n, const Direction &global_dir)
        {
            return element_gain(n.antenna, to_local_frame(global_dir.unit(), s.boresight_of(n)));
        }

        inline std::vector<RayTerm> ray_terms(const Scenario &s, Segment seg, const std::vector<Position> &offsets)
        {
            std::vector<RayTerm> terms;
            for (const Ray &ray : trace_rays(s, seg))
            {
                RayTerm t{1.0, ray.path_length, ray.reflection, {}};
                Direction at_ris{};
                switch (seg)
                {
                case Segment::tx_to_ris:
                    at_ris = ray.arrival;
                    t.amplitude_factor = std::sqrt(node_gain(s, s.tx, ray.departure) * element_gain(s.ris_element, at_ris));
                    break;
                case Segment::ris_to_rx:
                    at_ris = ray.departure;
                    t.amplitude_factor = std::sqrt(element_gain(s.ris_element, at_ris) * node_gain(s, s.rx, ray.arrival));
                    break;
                case Segment::tx_to_rx:
                    t.amplitude_factor = std::sqrt(node_gain(s, s.tx, ray.departure) * node_gain(s, s.rx, ray.arrival));
                    break;
                }
                if (seg != Segment::tx_to_rx)
                {
                    // Path-length reduction of element i relative to the array center.
                    const Vec3 d = at_ris.unit();
                    t.offsets.resize(offsets.size());
                    if (s.wavefront == Wavefront::planar)
                        for (std::size_t i = 0; i < offsets.size(); ++i)
                            t.offsets[i] = d.dot(offsets[i]);
                    else
                    {
                        // (image) terminal lies on the ray line at the full unfolded path length
                        const Vec3 virtual_terminal = ray.path_length * d;
                        for (std::size_t i = 0; i < offsets.size(); ++i)
                            t.offsets[i] = ray.path_length - (virtual_terminal - offsets[i]).norm();
                    }
                }
                terms.push_back(std::move(t));
            }
            return terms;
        }

        inline std::vector<Position> element_offsets(const ArrayGeometry &g)
        {
            return element_positions(g.centered_at_origin());
        }

        // Per-element physical coefficient amp * gamma * exp(-j k L) * exp(+j k d.u_i); the per-element
        // factor is conj(a_i(d)) of the RIS array response at the ray's direction.
        inline void accumulate(ComplexVector &h, const std::vector<RayTerm> &terms, double frequency)
        {
            const double lambda = wavelength_of(frequency);
            const double k = 2.0 * kPi / lambda;
            for (const RayTerm &t : terms)
            {
                const Complex coef = t.reflection * std::polar(t.amplitude_factor * lambda / (4.0 * kPi * t.path_length),
                                                               -k * t.path_length);
                for (std::size_t i = 0; i < h.size(); ++i)
                    h[i] += coef * std::polar(1.0, k * t.offsets[i]);
            }
        }

        struct ScenarioTerms
        {
            std::vector<RayTerm> incident, reflected, direct;
            std::size_t n_elements;
        };

        inline ScenarioTerms scenario_terms(const Scenario &s)
        {
            s.validate();
            const auto offsets = element_offsets(s.ris);
            return {ray_terms(s, Segment::tx_to_ris, offsets), ray_terms(s, Segment::ris_to_rx, offsets),
                    s.direct_link_enabled ? ray_terms(s, Segment::tx_to_rx, offsets) : std::vector<RayTerm>{},
                    offsets.size()};
        }

        inline ChannelRealization assemble(const ScenarioTerms &terms, double frequency)
        {
            ChannelRealization ch;
            ch.frequency_hz = frequency;
            ch.h_g.assign(terms.n_elements, Complex{});
            ComplexVector g(terms.n_elements, Complex{});
            accumulate(ch.h_g, terms.incident, frequency);
            accumulate(g, terms.reflected, frequency);
            ch.h_r.resize(g.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                ch.h_r[i] = std::conj(g[i]);
            const double lambda = wavelength_of(frequency);
            for (const RayTerm &t : terms.direct)
                ch.h_d += t.reflection * std::polar(t.amplitude_factor * lambda / (4.0 * kPi * t.path_length),
                                                    -2.0 * kPi / lambda * t.path_length);
            return ch;
        }
    }

    inline ChannelRealization assemble_channels(const Scenario &s, double frequency_hz)
    {
        return detail::assemble(detail::scenario_terms(s), frequency_hz);
    }

    inline std::vector<ChannelRealization> assemble_channels(const Scenario &s, std::span<const double> frequencies)
    {
        const auto terms = detail::scenario_terms(s);
        std::vector<ChannelRealization> out;
        out.reserve(frequencies.size());
        for (double f : frequencies)
            out.push_back(detail::assemble(terms, f));
        return out;
    }

    // ---------------------------------------------------------------------------------------------

    // (h_r^H diag(omega^H) h_g + h_d) s + z
    inline Complex received_signal(const ChannelRealization &ch, std::span<const Complex> omega, Complex symbol,
                                   Complex noise_draw)
    {
        if (omega.size() != ch.h_g.size() || ch.h_r.size() != ch.h_g.size())
            fail(ErrorCode::dimension_mismatch, "phase vector and channel lengths differ");
        Complex cascade{};
        for (std::size_t i = 0; i < omega.size(); ++i)
            cascade += std::conj(ch.h_r[i]) * std::conj(omega[i]) * ch.h_g[i];
        return (cascade + ch.h_d) * symbol + noise_draw;
    }

    inline Complex received_signal(const ChannelRealization &ch, const ConfigMatrix &phi, const ReflectionModel &refl,
                                   Complex symbol, Complex noise_draw, Polarization pol = Polarization::horizontal)
    {
        if (phi.rows() * phi.element_cols() != ch.h_g.size())
            fail(ErrorCode::dimension_mismatch, "configuration does not match the channel length");
        const PhaseVector omega = config_to_phase_vector(phi, pol, refl);
        return received_signal(ch, omega, symbol, noise_draw);
    }

    // Circularly-symmetric complex Gaussian draws with the scenario's variance and seed.
    inline ComplexVector noise_draws(const NoiseSettings &noise, std::size_t count)
    {
        std::mt19937_64 rng(noise.seed);
        std::normal_distribution<double> gauss(0.0, std::sqrt(noise.variance / 2.0));
        ComplexVector z(count);
        for (auto &v : z)
        {
            const double re = gauss(rng);
            v = {re, gauss(rng)};
        }
        return z;
    }

    // Received samples per frequency for a unit symbol, with the scenario's noise when configured.
    inline ComplexVector received_samples(const Scenario &s, const ConfigMatrix &phi, const ReflectionModel &refl)
    {
        const auto freqs = s.frequency_grid.frequencies();
        const auto channels = assemble_channels(s, freqs);
        const ComplexVector z = s.noise ? noise_draws(*s.noise, channels.size()) : ComplexVector(channels.size());
        ComplexVector y(channels.size());
        for (std::size_t i = 0; i < channels.size(); ++i)
            y[i] = received_signal(channels[i], phi, refl, {1.0, 0.0}, z[i], s.polarization);
        return y;
    }

    // ---------------------------------------------------------------------------------------------

    // Per-frequency cascade products c_i = conj(h_r,i) h_g,i and direct terms, so that the noiseless
    // received power for a configuration is |sum_i conj(omega_i) c_i + h_d|^2.
    class CascadeModel
    {
    public:
        CascadeModel(const Scenario &s, std::span<const double> frequencies)
            : geometry_(s.ris), polarization_(s.polarization), frequencies_(frequencies.begin(), frequencies.end())
        {
            if (frequencies_.empty())
                fail(ErrorCode::invalid_argument, "cascade model needs at least one frequency");
            const auto terms = detail::scenario_terms(s);
            products_.reserve(frequencies_.size());
            direct_.reserve(frequencies_.size());
            for (double f : frequencies_)
            {
                const ChannelRealization ch = detail::assemble(terms, f);
                ComplexVector c(ch.h_g.size());
                for (std::size_t i = 0; i < c.size(); ++i)
                    c[i] = std::conj(ch.h_r[i]) * ch.h_g[i];
                products_.push_back(std::move(c));
                direct_.push_back(ch.h_d);
            }
        }

        explicit CascadeModel(const Scenario &s) : CascadeModel(s, s.frequency_grid.frequencies()) {}

        const ArrayGeometry &geometry() const { return geometry_; }
        Polarization polarization() const { return polarization_; }
        const std::vector<double> &frequencies() const { return frequencies_; }
        std::size_t size() const { return geometry_.size(); }

        // |y_f|^2 for every frequency.
        std::vector<double> powers(std::span<const Complex> omega) const
        {
            if (omega.size() != size())
                fail(ErrorCode::dimension_mismatch, "phase vector length " + std::to_string(omega.size()) +
                                                        " does not match " + std::to_string(size()) + " elements");
            std::vector<double> p(frequencies_.size());
            for (std::size_t f = 0; f < frequencies_.size(); ++f)
            {
                const ComplexVector &c = products_[f];
                Complex y = direct_[f];
                for (std::size_t i = 0; i < c.size(); ++i)
                    y += std::conj(omega[i]) * c[i];
                p[f] = std::norm(y);
            }
            return p;
        }

        double mean_power(std::span<const Complex> omega) const
        {
            const auto p = powers(omega);
            return std::accumulate(p.begin(), p.end(), 0.0) / double(p.size());
        }

        double mean_power(const ConfigMatrix &phi, const ReflectionModel &refl) const
        {
            phi.require_matches(geometry_);
            return mean_power(config_to_phase_vector(phi, polarization_, refl));
        }

    private:
        ArrayGeometry geometry_;
        Polarization polarization_;
        std::vector<double> frequencies_;
        std::vector<ComplexVector> products_;
        ComplexVector direct_;
    };

    // 10 log10 of the mean noiseless received power over the scenario's frequency grid.
    inline double wideband_power(const CascadeModel &model, const ConfigMatrix &phi, const ReflectionModel &refl)
    {
        return to_db(model.mean_power(phi, refl));
    }

    inline double wideband_power(const Scenario &s, const ConfigMatrix &phi, const ReflectionModel &refl)
    {
        return wideband_power(CascadeModel(s), phi, refl);
    }

    enum class NormalizeMode
    {
        max_to_0,
        min_to_0
    };

    inline std::vector<double> normalize_powers(std::span<const double> values_db, NormalizeMode mode)
    {
        if (values_db.empty())
            fail(ErrorCode::invalid_argument, "cannot normalize an empty list");
        const auto [lo, hi] = std::minmax_element(values_db.begin(), values_db.end());
        const double ref = mode == NormalizeMode::max_to_0 ? *hi : *lo;
        std::vector<double> out(values_db.begin(), values_db.end());
        for (double &v : out)
            v -= ref;
        return out;
    }
}
