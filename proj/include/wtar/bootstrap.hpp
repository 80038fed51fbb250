#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "wtar/estimation.hpp"
#include "wtar/parallel.hpp"

namespace wtar {

/// Residuals shifted to mean zero.
inline std::vector<double> center_residuals(std::span<const double> residuals) {
    if (residuals.size() < 2) throw DomainError("need at least two residuals to center");
    double mean = 0.0;
    for (double r : residuals) mean += r;
    mean /= static_cast<double>(residuals.size());
    std::vector<double> out(residuals.begin(), residuals.end());
    for (double& r : out) r -= mean;
    return out;
}

/// One bootstrap pseudo-series: centered residuals resampled with
/// replacement drive the fitted recursion against the fitted threshold path,
/// restarted from the original first observation.
inline TimeSeries resample_path(const FitResult& fit, std::uint64_t seed) {
    const int T = static_cast<int>(fit.threshold_path.size());
    const std::vector<double> centered = center_residuals(fit.residuals);
    // scrambled so the draw stream shares nothing with the refit's DE stream,
    // whose seed is the same replicate offset
    std::mt19937_64 engine(scramble_seed(seed));
    std::vector<double> innovations(T - 1);
    for (double& e : innovations)
        e = centered[engine() % centered.size()];
    TimeSeries out;
    out.values = recurse_setar(fit.model.coeffs, fit.threshold_path, innovations, fit.y0);
    return out;
}

/// Empirical quantile Q(p) = ceil(p*B)-th order statistic (left-continuous
/// inverse of the step CDF). The tiny slack keeps p*B that is an integer in
/// exact arithmetic from spilling to the next order statistic.
inline double empirical_quantile(std::vector<double> sorted_draws, double p) {
    const auto b = static_cast<double>(sorted_draws.size());
    int idx = static_cast<int>(std::ceil(p * b - 1e-9));
    idx = std::clamp(idx, 1, static_cast<int>(b));
    return sorted_draws[idx - 1];
}

/// Central percentile interval [Q(0.5 - alpha/2), Q(0.5 + alpha/2)].
inline std::pair<double, double> percentile_interval(std::span<const double> draws, double alpha) {
    if (draws.size() < 20) throw DomainError("percentile interval needs at least 20 draws");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
    std::vector<double> sorted(draws.begin(), draws.end());
    std::sort(sorted.begin(), sorted.end());
    return {empirical_quantile(sorted, 0.5 - 0.5 * alpha),
            empirical_quantile(std::move(sorted), 0.5 + 0.5 * alpha)};
}

struct SupTBand {
    std::vector<double> lower, upper;
    std::vector<double> pointwise_sd;  // after flooring
    double c_crit = 0.0;
    int floored_points = 0;  // grid points whose raw sd fell below the floor
};

/// Simultaneous band: per-replication sup of |path - pointwise mean| / sd,
/// critical value at the requested level, band centered on gamma_hat with
/// half-width c * sd(t). The pointwise sd (divisor B-1) is floored at
/// 1e-10 * (1 + |gamma_hat(t)|) so the ratio stays defined under zero spread.
inline SupTBand sup_t_band(const std::vector<std::vector<double>>& threshold_paths,
                           std::span<const double> gamma_hat, double level = 0.95) {
    const int B = static_cast<int>(threshold_paths.size());
    if (B < 2) throw DomainError("sup-t band needs at least two replications");
    const int T = static_cast<int>(gamma_hat.size());
    for (const auto& path : threshold_paths)
        if (static_cast<int>(path.size()) != T)
            throw DomainError("all bootstrap threshold paths must match the fit length");

    std::vector<double> mean(T, 0.0);
    for (const auto& path : threshold_paths)
        for (int t = 0; t < T; ++t) mean[t] += path[t];
    for (double& m : mean) m /= B;

    SupTBand band;
    band.pointwise_sd.resize(T);
    for (int t = 0; t < T; ++t) {
        double acc = 0.0;
        for (const auto& path : threshold_paths) {
            const double d = path[t] - mean[t];
            acc += d * d;
        }
        double sd = std::sqrt(acc / (B - 1));
        const double floor = 1e-10 * (1.0 + std::fabs(gamma_hat[t]));
        if (sd < floor) {
            sd = floor;
            ++band.floored_points;
        }
        band.pointwise_sd[t] = sd;
    }

    std::vector<double> sup_stats(B);
    for (int b = 0; b < B; ++b) {
        double sup = 0.0;
        for (int t = 0; t < T; ++t) {
            const double d = std::fabs(threshold_paths[b][t] - mean[t]) / band.pointwise_sd[t];
            if (d > sup) sup = d;
        }
        sup_stats[b] = sup;
    }
    std::sort(sup_stats.begin(), sup_stats.end());
    band.c_crit = empirical_quantile(std::move(sup_stats), level);

    band.lower.resize(T);
    band.upper.resize(T);
    for (int t = 0; t < T; ++t) {
        const double half = band.c_crit * band.pointwise_sd[t];
        band.lower[t] = gamma_hat[t] - half;
        band.upper[t] = gamma_hat[t] + half;
    }
    return band;
}

struct BootstrapResult {
    int requested = 0;  // B
    int dropped = 0;
    double alpha = 0.95;
    std::uint64_t seed = 0;
    // surviving replicates, in replicate order: (phi0_low, phi1_low,
    // phi0_high, phi1_high, sigma2)
    std::vector<std::array<double, 5>> estimates;
    std::vector<std::vector<double>> threshold_paths;
    std::array<std::pair<double, double>, 5> intervals;
    SupTBand band;
};

/// Full residual-bootstrap pass for a wavelet-threshold fit: B resample +
/// refit rounds, percentile intervals for the AR parameters and sigma2, and
/// the sup-t band for the threshold path.
///
/// Refits reuse the original search box with the DE seed offset by the
/// replicate index; failed refits are dropped, and more than 10% drops is an
/// error.
inline BootstrapResult bootstrap_model(const TimeSeries& series, const FitResult& fit, int B,
                                       double alpha, std::uint64_t seed) {
    if (B < 50) throw DomainError("bootstrap needs B >= 50 replications");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
    if (fit.family != ThresholdFamily::Wavelet)
        throw DomainError("bootstrap_model expects a wavelet-threshold fit");
    const auto& spec = std::get<WaveletThreshold>(fit.model.threshold);
    if (static_cast<int>(fit.threshold_path.size()) != series.size())
        throw DomainError("fit does not belong to the supplied series");

    BootstrapResult out;
    out.requested = B;
    out.alpha = alpha;
    out.seed = seed;
    out.estimates.reserve(B);
    out.threshold_paths.reserve(B);

    for (int b = 1; b <= B; ++b) {
        const TimeSeries pseudo = resample_path(fit, derived_seed(seed, b));
        SearchSpace search = fit.search;
        search.seed = fit.search.seed + static_cast<std::uint64_t>(b);
        search.initial_guess = fit.theta_hat;  // refit optima sit near the original
        try {
            const FitResult refit = fit_wavelet(pseudo, spec.basis, fit.resolution, search);
            out.estimates.push_back({refit.model.coeffs.phi0_low, refit.model.coeffs.phi1_low,
                                     refit.model.coeffs.phi0_high, refit.model.coeffs.phi1_high,
                                     refit.sigma2_hat});
            out.threshold_paths.push_back(refit.threshold_path);
        } catch (const FitFailed&) {
            ++out.dropped;
        }
    }
    if (out.dropped * 10 > B)
        throw BootstrapUnstable("bootstrap dropped " + std::to_string(out.dropped) + " of " +
                                std::to_string(B) + " replicates");

    std::vector<double> draws(out.estimates.size());
    for (int p = 0; p < 5; ++p) {
        for (std::size_t i = 0; i < out.estimates.size(); ++i) draws[i] = out.estimates[i][p];
        out.intervals[p] = percentile_interval(draws, alpha);
    }
    out.band = sup_t_band(out.threshold_paths, fit.threshold_path, alpha);
    return out;
}

struct CoverageReport {
    int monte_carlo_reps = 0;
    std::array<double, 5> parameter_coverage{};  // phi0_low..sigma2
    double band_coverage = 0.0;
};

/// Repeats simulate -> fit -> bootstrap `mc_reps` times on the given true
/// model and reports how often the intervals (and the band, at every t)
/// contain the truth. Replicates run on a worker pool; all seeds derive
/// from `seed` and the replicate index, so the report is deterministic.
inline CoverageReport coverage_experiment(const SetarModel& model, int T, int mc_reps, int B,
                                          double alpha, std::uint64_t seed,
                                          const SearchSpace& search_template, int threads = 0) {
    if (mc_reps < 1) throw DomainError("coverage experiment needs at least one replication");
    if (!std::holds_alternative<WaveletThreshold>(model.threshold))
        throw DomainError("coverage experiment expects a wavelet-threshold truth");
    const auto& spec = std::get<WaveletThreshold>(model.threshold);
    const int J = spec.coeffs.J;
    const std::vector<double> truth_path = threshold_path(model.threshold, T);
    const std::array<double, 5> truth{model.coeffs.phi0_low, model.coeffs.phi1_low,
                                      model.coeffs.phi0_high, model.coeffs.phi1_high,
                                      model.sigma2};

    std::vector<std::array<bool, 6>> hits(mc_reps);  // 5 params + band
    parallel_for(mc_reps, threads, [&](int r) {
        const std::uint64_t sim_seed = derived_seed(seed, 2 * static_cast<std::uint64_t>(r));
        const std::uint64_t est_seed = derived_seed(seed, 2 * static_cast<std::uint64_t>(r) + 1);
        const TimeSeries series = simulate(model, T, 0.0, sim_seed);
        SearchSpace search = search_template;
        search.seed = est_seed;
        const FitResult fit = fit_wavelet(series, spec.basis, J, search);
        const BootstrapResult boot = bootstrap_model(series, fit, B, alpha, est_seed);
        for (int p = 0; p < 5; ++p)
            hits[r][p] = boot.intervals[p].first <= truth[p] && truth[p] <= boot.intervals[p].second;
        bool band_ok = true;
        for (int t = 0; t < T && band_ok; ++t)
            band_ok = boot.band.lower[t] <= truth_path[t] && truth_path[t] <= boot.band.upper[t];
        hits[r][5] = band_ok;
    });

    CoverageReport report;
    report.monte_carlo_reps = mc_reps;
    for (int p = 0; p < 6; ++p) {
        double acc = 0.0;
        for (int r = 0; r < mc_reps; ++r) acc += hits[r][p] ? 1.0 : 0.0;
        if (p < 5)
            report.parameter_coverage[p] = acc / mc_reps;
        else
            report.band_coverage = acc / mc_reps;
    }
    return report;
}

}  // namespace wtar
