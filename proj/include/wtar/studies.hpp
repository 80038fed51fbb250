#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wtar/bootstrap.hpp"

namespace wtar::studies {

/// Knobs for the replication studies. A zero means "study default":
/// generations 200 for the estimation studies, 60 for the coverage study
/// (whose 200 x 200 refit grid dominates the runtime); population 10 * dim.
struct StudyOptions {
    int replications = 100;
    int T = 2048;
    std::uint64_t seed = 0;
    int threads = 0;
    int generations = 0;
    int population = 0;
    // coverage study only
    int mc_reps = 200;
    int bootstrap_b = 200;
    double alpha = 0.95;
};

struct ParameterRow {
    std::string name;
    double truth = 0.0;
    double mean_estimate = 0.0;
    double rmse = 0.0;
};

struct StudyReport {
    std::string study;
    int replications = 0;
    std::vector<ParameterRow> rows;
    std::map<int, int> resolution_histogram;  // selected J -> count
    int modal_resolution = 0;
};

inline constexpr std::array<const char*, 5> kParameterNames{"phi0_low", "phi1_low", "phi0_high",
                                                            "phi1_high", "sigma2"};

/// Step threshold taking 1 on [0, 0.25) and [0.75, 1), 1.5 in between,
/// written exactly in the Haar level-2 coefficients.
inline wavelets::WaveletCoefficients step_threshold_coefficients() {
    wavelets::WaveletCoefficients c = wavelets::WaveletCoefficients::zeros(2);
    c.c00 = 1.25;
    c.detail(1, 0) = -0.125 * M_SQRT2;
    c.detail(1, 1) = 0.125 * M_SQRT2;
    return c;
}

/// The abrupt-threshold study model: low regime (0.5, -0.3), high regime
/// (1.0, 0.3), sigma2 = 2, step threshold above.
inline SetarModel study1_model() {
    SetarModel model;
    model.coeffs = {0.5, -0.3, 1.0, 0.3};
    model.sigma2 = 2.0;
    auto haar = std::make_shared<const wavelets::WaveletBasis>(
        wavelets::build_filter_bank(wavelets::Family::Haar, 1));
    model.threshold = WaveletThreshold{std::move(haar), step_threshold_coefficients()};
    return model;
}

/// The smooth-threshold study: gamma(u) = -0.5 + 0.5 (2u - 1)^2.
inline std::vector<double> study2_threshold_path(int T) {
    std::vector<double> path(T);
    for (int t = 0; t < T; ++t) {
        const double v = 2.0 * t / T - 1.0;
        path[t] = -0.5 + 0.5 * v * v;
    }
    return path;
}

inline RegimeCoefficients study2_coeffs() { return {0.5, 0.3, -1.0, 0.5}; }

namespace detail {

inline std::vector<ParameterRow> summarize(const std::array<double, 5>& truth,
                                           const std::vector<std::array<double, 5>>& estimates) {
    std::vector<ParameterRow> rows(5);
    const double n = static_cast<double>(estimates.size());
    for (int p = 0; p < 5; ++p) {
        double mean = 0.0, sq = 0.0;
        for (const auto& e : estimates) {
            mean += e[p];
            const double d = e[p] - truth[p];
            sq += d * d;
        }
        rows[p] = {kParameterNames[p], truth[p], mean / n, std::sqrt(sq / n)};
    }
    return rows;
}

inline SearchSpace study_search(const TimeSeries& series, int dim, std::uint64_t est_seed,
                                const StudyOptions& opt, int default_generations) {
    SearchSpace s = SearchSpace::for_series(series, dim, est_seed);
    s.generations = opt.generations > 0 ? opt.generations : default_generations;
    if (opt.population > 0) s.population = opt.population;
    return s;
}

}  // namespace detail

/// Replicates the abrupt-threshold experiment: simulate T observations,
/// fit Haar at J = 2, report the mean estimate and RMSE per parameter.
inline StudyReport run_simulation_study1(const StudyOptions& opt) {
    const SetarModel model = study1_model();
    const auto& spec = std::get<WaveletThreshold>(model.threshold);
    const std::array<double, 5> truth{0.5, -0.3, 1.0, 0.3, 2.0};

    std::vector<std::array<double, 5>> estimates(opt.replications);
    wavelets::cached_threshold_basis(*spec.basis, 2, opt.T);
    parallel_for(opt.replications, opt.threads, [&](int r) {
        const std::uint64_t sim_seed = derived_seed(opt.seed, 2 * static_cast<std::uint64_t>(r));
        const std::uint64_t est_seed = derived_seed(opt.seed, 2 * static_cast<std::uint64_t>(r) + 1);
        const TimeSeries series = simulate(model, opt.T, 0.0, sim_seed);
        const FitResult fit =
            fit_wavelet(series, spec.basis, 2, detail::study_search(series, 4, est_seed, opt, 200));
        estimates[r] = {fit.model.coeffs.phi0_low, fit.model.coeffs.phi1_low,
                        fit.model.coeffs.phi0_high, fit.model.coeffs.phi1_high, fit.sigma2_hat};
    });

    StudyReport report;
    report.study = "sim1";
    report.replications = opt.replications;
    report.rows = detail::summarize(truth, estimates);
    report.resolution_histogram[2] = opt.replications;
    report.modal_resolution = 2;
    return report;
}

/// Replicates the smooth-threshold experiment: LA(4) fits at J in {2,3,4,5},
/// J selected per replicate by RMSE of the fitted threshold path against the
/// true path.
inline StudyReport run_simulation_study2(const StudyOptions& opt) {
    const RegimeCoefficients coeffs = study2_coeffs();
    const double sigma2 = 1.0;
    const std::array<double, 5> truth{0.5, 0.3, -1.0, 0.5, 1.0};
    const std::vector<double> truth_path = study2_threshold_path(opt.T);
    const std::vector<int> j_candidates{2, 3, 4, 5};

    auto basis = std::make_shared<const wavelets::WaveletBasis>(
        wavelets::build_filter_bank(wavelets::Family::DaubechiesLeastAsymmetric, 4));
    for (const int J : j_candidates) wavelets::cached_threshold_basis(*basis, J, opt.T);

    std::vector<std::array<double, 5>> estimates(opt.replications);
    std::vector<int> selected(opt.replications);
    parallel_for(opt.replications, opt.threads, [&](int r) {
        const std::uint64_t sim_seed = derived_seed(opt.seed, 2 * static_cast<std::uint64_t>(r));
        const std::uint64_t est_seed = derived_seed(opt.seed, 2 * static_cast<std::uint64_t>(r) + 1);
        const TimeSeries series = simulate_on_path(coeffs, truth_path, sigma2, 0.0, sim_seed);
        auto [j_star, fit] = select_resolution(
            series, basis, j_candidates, SelectionMode::VsTruth, truth_path, [&](int J) {
                return detail::study_search(series, 1 << J, est_seed, opt, 200);
            });
        selected[r] = j_star;
        estimates[r] = {fit.model.coeffs.phi0_low, fit.model.coeffs.phi1_low,
                        fit.model.coeffs.phi0_high, fit.model.coeffs.phi1_high, fit.sigma2_hat};
    });

    StudyReport report;
    report.study = "sim2";
    report.replications = opt.replications;
    report.rows = detail::summarize(truth, estimates);
    for (const int j : selected) ++report.resolution_histogram[j];
    int best_count = -1;
    for (const auto& [j, count] : report.resolution_histogram) {
        if (count > best_count) {
            best_count = count;
            report.modal_resolution = j;
        }
    }
    return report;
}

/// Interval and band coverage for the abrupt-threshold model at the
/// requested Monte Carlo and bootstrap scales.
inline CoverageReport run_coverage_study(const StudyOptions& opt) {
    const SetarModel model = study1_model();
    const auto& spec = std::get<WaveletThreshold>(model.threshold);
    wavelets::cached_threshold_basis(*spec.basis, 2, opt.T);

    // one representative draw sizes the search box for the whole experiment
    const TimeSeries probe = simulate(model, opt.T, 0.0, opt.seed);
    SearchSpace search = detail::study_search(probe, 4, opt.seed, opt, 60);
    if (opt.population == 0) search.population = 24;
    return coverage_experiment(model, opt.T, opt.mc_reps, opt.bootstrap_b, opt.alpha, opt.seed,
                               search, opt.threads);
}

}  // namespace wtar::studies
