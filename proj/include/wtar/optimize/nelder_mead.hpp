#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "wtar/optimize/differential_evolution.hpp"

namespace wtar::optimize {

struct NelderMeadOptions {
    int max_iterations = 500;
    double tolerance = 1e-8;  // absolute spread of simplex objective values
    double initial_step = 0.05;  // fraction of the box width per coordinate
};

struct NelderMeadResult {
    std::vector<double> best;
    double best_value = 0.0;
    int iterations = 0;
};

/// Downhill simplex restricted to a box (candidate points are projected onto
/// it). Returns the best point ever evaluated, so the result never regresses
/// below the supplied start.
template <typename Objective>
NelderMeadResult nelder_mead(Objective&& objective, std::span<const double> start,
                             const Bounds& bounds, const NelderMeadOptions& opt = {}) {
    bounds.validate();
    const int dim = bounds.dim();
    const int n_pts = dim + 1;

    auto project = [&bounds, dim](std::vector<double>& x) {
        for (int j = 0; j < dim; ++j) x[j] = bounds.clamp(j, x[j]);
    };

    std::vector<std::vector<double>> simplex(n_pts, std::vector<double>(start.begin(), start.end()));
    std::vector<double> value(n_pts);
    for (int j = 0; j < dim; ++j) {
        double step = opt.initial_step * (bounds.upper[j] - bounds.lower[j]);
        if (simplex[j + 1][j] + step > bounds.upper[j]) step = -step;
        simplex[j + 1][j] += step;
        project(simplex[j + 1]);
    }
    for (int i = 0; i < n_pts; ++i) value[i] = objective(simplex[i]);

    std::vector<double> best = simplex[0];
    double best_value = value[0];
    auto remember = [&](const std::vector<double>& x, double f) {
        if (f < best_value) {
            best_value = f;
            best = x;
        }
    };
    for (int i = 1; i < n_pts; ++i) remember(simplex[i], value[i]);

    std::vector<int> order(n_pts);
    std::vector<double> centroid(dim), candidate(dim);
    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return value[a] < value[b]; });
        const int lo = order[0], hi = order[n_pts - 1], second_hi = order[n_pts - 2];
        if (std::fabs(value[hi] - value[lo]) <= opt.tolerance) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (int i = 0; i < n_pts; ++i) {
            if (i == hi) continue;
            for (int j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= dim;

        auto try_point = [&](double coeff) {
            for (int j = 0; j < dim; ++j)
                candidate[j] = bounds.clamp(j, centroid[j] + coeff * (centroid[j] - simplex[hi][j]));
            const double f = objective(candidate);
            remember(candidate, f);
            return f;
        };

        const double reflected = try_point(1.0);
        if (reflected < value[order[0]]) {
            std::vector<double> reflected_pt = candidate;
            const double expanded = try_point(2.0);
            if (expanded < reflected) {
                simplex[hi] = candidate;
                value[hi] = expanded;
            } else {
                simplex[hi] = std::move(reflected_pt);
                value[hi] = reflected;
            }
        } else if (reflected < value[second_hi]) {
            simplex[hi] = candidate;
            value[hi] = reflected;
        } else {
            const double contracted = try_point(-0.5);
            if (contracted < value[hi]) {
                simplex[hi] = candidate;
                value[hi] = contracted;
            } else {
                for (int i = 0; i < n_pts; ++i) {
                    if (i == lo) continue;
                    for (int j = 0; j < dim; ++j)
                        simplex[i][j] = bounds.clamp(j, simplex[lo][j] + 0.5 * (simplex[i][j] - simplex[lo][j]));
                    value[i] = objective(simplex[i]);
                    remember(simplex[i], value[i]);
                }
            }
        }
    }
    return NelderMeadResult{std::move(best), best_value, iter};
}

}  // namespace wtar::optimize
