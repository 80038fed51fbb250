#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "wtar/errors.hpp"

namespace wtar::optimize {

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    int dim() const { return static_cast<int>(lower.size()); }

    void validate() const {
        if (lower.size() != upper.size() || lower.empty())
            throw DomainError("bounds must be non-empty and of equal length");
        for (std::size_t i = 0; i < lower.size(); ++i)
            if (!(lower[i] < upper[i])) throw DomainError("each lower bound must be below its upper bound");
    }

    double clamp(int j, double v) const {
        if (v < lower[j]) return lower[j];
        if (v > upper[j]) return upper[j];
        return v;
    }
};

struct DeOptions {
    int population = 40;
    int generations = 200;
    double crossover = 0.9;
    double weight = 0.8;
    std::uint64_t seed = 0;
    std::vector<double> seed_member;  // optional warm start injected as member 0
};

struct DeResult {
    std::vector<double> best;
    double best_value = 0.0;
    std::vector<std::vector<double>> population;
    std::vector<double> values;
};

/// rand/1/bin differential evolution over a box, out-of-bounds trial
/// coordinates clamped to the box edge. Greedy selection keeps the trial on
/// ties, matching the usual DE engines.
template <typename Objective>
DeResult differential_evolution(Objective&& objective, const Bounds& bounds, const DeOptions& opt) {
    bounds.validate();
    const int dim = bounds.dim();
    const int np = opt.population < 4 ? 4 : opt.population;
    std::mt19937_64 engine(opt.seed);
    auto uniform = [&engine]() {
        return (static_cast<double>(engine() >> 11) + 0.5) * 0x1p-53;
    };

    std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
    std::vector<double> value(np);
    for (int i = 0; i < np; ++i) {
        for (int j = 0; j < dim; ++j)
            pop[i][j] = bounds.lower[j] + uniform() * (bounds.upper[j] - bounds.lower[j]);
        value[i] = objective(pop[i]);
    }
    if (!opt.seed_member.empty()) {
        if (static_cast<int>(opt.seed_member.size()) != dim)
            throw DomainError("warm-start member must match the box dimension");
        for (int j = 0; j < dim; ++j) pop[0][j] = bounds.clamp(j, opt.seed_member[j]);
        value[0] = objective(pop[0]);
    }

    std::vector<double> trial(dim);
    for (int gen = 0; gen < opt.generations; ++gen) {
        for (int i = 0; i < np; ++i) {
            int r1, r2, r3;
            do { r1 = static_cast<int>(engine() % np); } while (r1 == i);
            do { r2 = static_cast<int>(engine() % np); } while (r2 == i || r2 == r1);
            do { r3 = static_cast<int>(engine() % np); } while (r3 == i || r3 == r1 || r3 == r2);
            const int j_rand = static_cast<int>(engine() % dim);
            for (int j = 0; j < dim; ++j) {
                if (j == j_rand || uniform() < opt.crossover) {
                    trial[j] = bounds.clamp(j, pop[r1][j] + opt.weight * (pop[r2][j] - pop[r3][j]));
                } else {
                    trial[j] = pop[i][j];
                }
            }
            const double trial_value = objective(trial);
            if (trial_value <= value[i]) {
                pop[i] = trial;
                value[i] = trial_value;
            }
        }
    }

    int best = 0;
    for (int i = 1; i < np; ++i)
        if (value[i] < value[best]) best = i;
    return DeResult{pop[best], value[best], std::move(pop), std::move(value)};
}

}  // namespace wtar::optimize
