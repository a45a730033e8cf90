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
#include <risbeam/phase_config.hpp>
#include <risbeam/scenario.hpp>

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace risbeam
{
    enum class Objective
    {
        maximize,
        minimize
    };

    inline const char *to_string(Objective o) { return o == Objective::maximize ? "max" : "min"; }

    inline Objective parse_objective(const std::string &s)
    {
        if (s == "max" || s == "maximize")
            return Objective::maximize;
        if (s == "min" || s == "minimize")
            return Objective::minimize;
        fail(ErrorCode::invalid_argument, "objective must be 'max' or 'min', got '" + s + "'");
    }

    // Strict improvement in the objective's direction.
    inline bool improves(Objective o, double candidate, double best)
    {
        return o == Objective::maximize ? candidate > best : candidate < best;
    }

    enum class StepKind
    {
        column_pair,
        row
    };

    struct ScanStep
    {
        StepKind kind = StepKind::column_pair;
        std::size_t index = 0; // 1-based: first column of the pair, or row number
        std::size_t iteration = 1;
        double candidate_db = 0.0;
        bool accepted = false;
        double best_db = 0.0;
    };

    struct ScanTrace
    {
        Objective objective = Objective::maximize;
        double baseline_db = 0.0;
        std::vector<ScanStep> steps;

        // Best-so-far never moves against the objective.
        bool is_monotone() const
        {
            double prev = baseline_db;
            for (const auto &s : steps)
            {
                if (improves(objective, prev, s.best_db))
                    return false;
                prev = s.best_db;
            }
            return true;
        }

        double final_db() const { return steps.empty() ? baseline_db : steps.back().best_db; }

        void write_csv(std::ostream &os) const
        {
            os << "step_kind,index,candidate_dB,accepted,best_dB\n";
            char buf[160];
            for (const auto &s : steps)
            {
                std::snprintf(buf, sizeof buf, "%s,%zu,%.6f,%d,%.6f\n", s.kind == StepKind::column_pair ? "column_pair" : "row",
                              s.index, s.candidate_db, s.accepted ? 1 : 0, s.best_db);
                os << buf;
            }
        }
    };

    struct ScanResult
    {
        ConfigMatrix config;
        ScanTrace trace;
    };

    // Column-row scanning: start from the all-0 matrix, then per iteration invert column pairs
    // (col, col+1) left to right, then whole rows top to bottom, keeping a change only when the
    // measured power strictly improves.
    inline ScanResult column_row_scan(const CascadeModel &model, Objective objective, std::size_t iterations,
                                      const ReflectionModel &refl)
    {
        if (iterations == 0)
            fail(ErrorCode::invalid_argument, "column-row scan needs at least one iteration");
        refl.validate();
        ScanResult out;
        out.config = ConfigMatrix::zeros(model.geometry());
        out.trace.objective = objective;
        ConfigMatrix &phi = out.config;

        double best = model.mean_power(phi, refl);
        out.trace.baseline_db = to_db(best);

        auto try_step = [&](StepKind kind, std::size_t index, std::size_t iteration, auto &&invert)
        {
            invert();
            const double p = model.mean_power(phi, refl);
            const bool keep = improves(objective, p, best);
            if (keep)
                best = p;
            else
                invert();
            out.trace.steps.push_back({kind, index, iteration, to_db(p), keep, to_db(best)});
        };

        for (std::size_t it = 1; it <= iterations; ++it)
        {
            for (std::size_t col = 0; col < phi.cols(); col += 2)
                try_step(StepKind::column_pair, col + 1, it, [&]
                         { phi.flip_column(col), phi.flip_column(col + 1); });
            for (std::size_t row = 0; row < phi.rows(); ++row)
                try_step(StepKind::row, row + 1, it, [&]
                         { phi.flip_row(row); });
        }
        return out;
    }

    inline ScanResult column_row_scan(const Scenario &s, Objective objective, std::size_t iterations,
                                      const ReflectionModel &refl)
    {
        return column_row_scan(CascadeModel(s), objective, iterations, refl);
    }

    // ---------------------------------------------------------------------------------------------

    inline constexpr std::size_t kOracleMaxBits = 20;

    struct ExhaustiveResult
    {
        ConfigMatrix config;
        double best_db = 0.0;
        std::vector<double> values_db; // every configuration, indexed by its bit pattern
    };

    // Global optimum by enumeration of all 2^(rows * 2 cols) configurations. Bit i of the enumeration
    // index is the i-th state in row-major order. The first configuration attaining the optimum wins.
    inline ExhaustiveResult exhaustive_oracle(const CascadeModel &model, Objective objective, const ReflectionModel &refl,
                                              std::size_t max_bits = kOracleMaxBits)
    {
        const ArrayGeometry &g = model.geometry();
        const std::size_t bits = g.rows * 2 * g.cols;
        if (max_bits > kOracleMaxBits)
            fail(ErrorCode::refusal, "oracle bit limit is capped at " + std::to_string(kOracleMaxBits));
        if (bits > max_bits)
            fail(ErrorCode::refusal, "exhaustive search over " + std::to_string(bits) + " bits exceeds the limit of " +
                                         std::to_string(max_bits));
        refl.validate();
        const std::size_t total = std::size_t{1} << bits;
        ExhaustiveResult out;
        out.values_db.resize(total);
        ConfigMatrix phi = ConfigMatrix::zeros(g);
        std::size_t best_index = 0;
        double best = 0.0;
        for (std::size_t idx = 0; idx < total; ++idx)
        {
            for (std::size_t b = 0; b < bits; ++b)
                phi.set_bit(b, (idx >> b) & 1U);
            const double p = model.mean_power(phi, refl);
            out.values_db[idx] = to_db(p);
            if (idx == 0 || improves(objective, p, best))
            {
                best = p;
                best_index = idx;
            }
        }
        out.config = ConfigMatrix::zeros(g);
        for (std::size_t b = 0; b < bits; ++b)
            out.config.set_bit(b, (best_index >> b) & 1U);
        out.best_db = to_db(best);
        return out;
    }

    inline ExhaustiveResult exhaustive_oracle(const Scenario &s, Objective objective, const ReflectionModel &refl,
                                              std::size_t max_bits = kOracleMaxBits)
    {
        const std::size_t bits = s.ris.rows * 2 * s.ris.cols;
        if (bits > std::min(max_bits, kOracleMaxBits))
            fail(ErrorCode::refusal, "exhaustive search over " + std::to_string(bits) + " bits exceeds the limit of " +
                                         std::to_string(std::min(max_bits, kOracleMaxBits)));
        return exhaustive_oracle(CascadeModel(s), objective, refl, max_bits);
    }

    // Fraction of configurations strictly better than `value_db` in the objective's direction.
    inline double fraction_better(const std::vector<double> &values_db, double value_db, Objective objective)
    {
        std::size_t better = 0;
        for (double v : values_db)
            if (improves(objective, v, value_db))
                ++better;
        return values_db.empty() ? 0.0 : double(better) / double(values_db.size());
    }
}
