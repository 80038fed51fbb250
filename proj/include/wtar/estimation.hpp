#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wtar/model.hpp"
#include "wtar/optimize/differential_evolution.hpp"
#include "wtar/optimize/nelder_mead.hpp"

namespace wtar {

/// Regression reparameterization: (phi0_high, phi1_high,
/// phi0_low - phi0_high, phi1_low - phi1_high).
struct BetaVector {
    double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
};

inline constexpr int kMinRegimePoints = 3;

/// Regressor row for step t: (1, y(t-1), I(y(t-1) <= gamma_t), y(t-1) I(...)).
inline std::array<double, 4> design_row(const TimeSeries& series, int t, double gamma_t) {
    const double prev = series[t - 1];
    const double ind = prev <= gamma_t ? 1.0 : 0.0;
    return {1.0, prev, ind, prev * ind};
}

/// Outcome of the inner least-squares step for one threshold path.
struct ClsSolution {
    bool ok = false;
    int shortfall = 0;  // occupancy missing from the 3-point minimum
    BetaVector beta;
    RegimeCoefficients phi;
    double ssr = std::numeric_limits<double>::infinity();
    int n_low = 0, n_high = 0;
};

/// Exact conditional least squares of y(t) on the regime-split AR(1) design
/// over t = 1..T-1.
///
/// The four-column normal equations decouple into one two-parameter
/// regression per regime; each is solved through centered (Welford)
/// accumulators and the SSR comes from an explicit residual pass, so a
/// perfectly interpolable series really does report ~0. A regime with fewer
/// than three points, or with no spread in its regressor, is degenerate.
inline ClsSolution conditional_ls(const TimeSeries& series, std::span<const double> threshold) {
    const int T = series.size();
    ClsSolution out;
    if (T < 2 || static_cast<int>(threshold.size()) != T) return out;

    struct Accum {
        long long n = 0;
        double mean_x = 0.0, mean_y = 0.0, sxx = 0.0, sxy = 0.0;
        void add(double x, double y) {
            ++n;
            const double dx = x - mean_x;
            mean_x += dx / static_cast<double>(n);
            mean_y += (y - mean_y) / static_cast<double>(n);
            sxx += dx * (x - mean_x);
            sxy += dx * (y - mean_y);
        }
    } low, high;

    for (int t = 1; t < T; ++t) {
        const double x = series[t - 1];
        const double y = series[t];
        if (x <= threshold[t]) {
            low.add(x, y);
        } else {
            high.add(x, y);
        }
    }
    out.n_low = static_cast<int>(low.n);
    out.n_high = static_cast<int>(high.n);
    out.shortfall = std::max(0, kMinRegimePoints - out.n_low) +
                    std::max(0, kMinRegimePoints - out.n_high);
    if (out.shortfall > 0) return out;

    auto solve = [](const Accum& a, double& intercept, double& slope) {
        const double scale = static_cast<double>(a.n) * (1.0 + a.mean_x * a.mean_x);
        if (!(a.sxx > 1e-12 * scale)) return false;
        slope = a.sxy / a.sxx;
        intercept = a.mean_y - slope * a.mean_x;
        return true;
    };
    if (!solve(low, out.phi.phi0_low, out.phi.phi1_low) ||
        !solve(high, out.phi.phi0_high, out.phi.phi1_high))
        return out;

    out.beta.b1 = out.phi.phi0_high;
    out.beta.b2 = out.phi.phi1_high;
    out.beta.b3 = out.phi.phi0_low - out.phi.phi0_high;
    out.beta.b4 = out.phi.phi1_low - out.phi.phi1_high;

    double ssr = 0.0;
    for (int t = 1; t < T; ++t) {
        const double x = series[t - 1];
        const bool is_low = x <= threshold[t];
        const double fitted = is_low ? out.phi.phi0_low + out.phi.phi1_low * x
                                     : out.phi.phi0_high + out.phi.phi1_high * x;
        const double r = series[t] - fitted;
        ssr += r * r;
    }
    out.ssr = ssr;
    out.ok = true;
    return out;
}

enum class ThresholdFamily { Constant, Fourier, Wavelet };

/// Profile SSR objective over theta for one threshold family binding.
/// Degenerate regimes map to a large finite penalty, never an exception.
class ProfileProblem {
public:
    /// Wavelet binding: theta is the flat coefficient vector.
    ProfileProblem(const TimeSeries& series, std::shared_ptr<const wavelets::ThresholdBasis> basis)
        : series_(&series), basis_(std::move(basis)), family_(ThresholdFamily::Wavelet) {
        init_penalty();
    }

    /// Fourier binding at fixed frequency k: theta = (gamma0, gamma1, gamma2).
    ProfileProblem(const TimeSeries& series, int fourier_k)
        : series_(&series), fourier_k_(fourier_k), family_(ThresholdFamily::Fourier) {
        init_penalty();
    }

    /// Constant binding: theta = (gamma).
    explicit ProfileProblem(const TimeSeries& series)
        : series_(&series), family_(ThresholdFamily::Constant) {
        init_penalty();
    }

    ThresholdFamily family() const { return family_; }
    double penalty_base() const { return penalty_base_; }

    std::vector<double> path(std::span<const double> theta) const {
        const int T = series_->size();
        std::vector<double> gamma(T);
        switch (family_) {
            case ThresholdFamily::Wavelet:
                basis_->path(theta, gamma);
                break;
            case ThresholdFamily::Fourier:
                for (int t = 0; t < T; ++t) {
                    const double w = 2.0 * M_PI * fourier_k_ * t / T;
                    gamma[t] = theta[0] + theta[1] * std::sin(w) + theta[2] * std::cos(w);
                }
                break;
            case ThresholdFamily::Constant:
                std::fill(gamma.begin(), gamma.end(), theta[0]);
                break;
        }
        return gamma;
    }

    ClsSolution solve(std::span<const double> theta) const {
        return conditional_ls(*series_, path(theta));
    }

    double operator()(std::span<const double> theta) const {
        const ClsSolution sol = solve(theta);
        return sol.ok ? sol.ssr : penalty_base_ + sol.shortfall;
    }
    double operator()(const std::vector<double>& theta) const {
        return (*this)(std::span<const double>(theta));
    }

private:
    void init_penalty() {
        double sum_sq = 0.0;
        for (int t = 1; t < series_->size(); ++t) sum_sq += series_->values[t] * series_->values[t];
        penalty_base_ = 10.0 * sum_sq;
    }

    const TimeSeries* series_;
    std::shared_ptr<const wavelets::ThresholdBasis> basis_;
    int fourier_k_ = 0;
    ThresholdFamily family_;
    double penalty_base_ = 0.0;
};

/// Profile SSR at theta (penalty-total; see ProfileProblem).
inline double profile_objective(const TimeSeries& series,
                                std::shared_ptr<const wavelets::ThresholdBasis> basis,
                                std::span<const double> theta) {
    return ProfileProblem(series, std::move(basis))(theta);
}

/// Box and optimizer settings for the outer search over theta.
struct SearchSpace {
    optimize::Bounds bounds;
    int population = 0;  // 0 -> 10 * dim
    int generations = 200;
    double crossover = 0.9;
    double weight = 0.8;
    int simplex_iterations = 500;
    double tolerance = 1e-8;
    std::uint64_t seed = 0;
    std::vector<double> initial_guess;  // optional warm start for the DE stage

    /// Data-driven default box: the leading coordinate (overall level) spans
    /// the sample range widened by half, every other coordinate spans
    /// +-range.
    static SearchSpace for_series(const TimeSeries& series, int dim, std::uint64_t seed = 0) {
        const auto [lo_it, hi_it] = std::minmax_element(series.values.begin(), series.values.end());
        const double lo = *lo_it, hi = *hi_it;
        const double range = hi - lo;
        if (!(range > 0.0)) throw FitFailed("series has zero range; thresholds are unidentifiable");
        SearchSpace s;
        s.bounds.lower.assign(dim, -range);
        s.bounds.upper.assign(dim, range);
        s.bounds.lower[0] = lo - 0.5 * range;
        s.bounds.upper[0] = hi + 0.5 * range;
        s.seed = seed;
        return s;
    }
};

/// Everything the outer estimation produces for one model.
struct FitResult {
    SetarModel model;                 // fitted AR coefficients, threshold, sigma2_hat
    ThresholdFamily family = ThresholdFamily::Constant;
    std::vector<double> theta_hat;    // flat threshold parameters
    int resolution = 0;               // J (wavelet fits)
    int fourier_k = 0;                // chosen k (fourier fits)
    BetaVector beta_hat;
    double ssr = 0.0;
    double sigma2_hat = 0.0;
    std::vector<double> residuals;    // t = 1..T-1
    int n_low = 0, n_high = 0;
    std::vector<double> threshold_path;  // t = 0..T-1
    SearchSpace search;
    double y0 = 0.0;                  // first observation of the fitted series
    std::vector<std::string> warnings;
    std::vector<std::pair<int, double>> selection_trace;  // (J or k, score)
};

namespace detail {

inline FitResult assemble_fit(const TimeSeries& series, const ProfileProblem& problem,
                              std::vector<double> theta, const SearchSpace& search,
                              ThresholdFamily family) {
    const ClsSolution sol = problem.solve(theta);
    if (!sol.ok)
        throw FitFailed("optimum is degenerate: regime occupancy " + std::to_string(sol.n_low) +
                        "/" + std::to_string(sol.n_high));
    const int T = series.size();

    FitResult fit;
    fit.family = family;
    fit.theta_hat = std::move(theta);
    fit.beta_hat = sol.beta;
    fit.ssr = sol.ssr;
    fit.sigma2_hat = sol.ssr / (T - 1);
    fit.n_low = sol.n_low;
    fit.n_high = sol.n_high;
    fit.threshold_path = problem.path(fit.theta_hat);
    fit.search = search;
    fit.y0 = series[0];

    fit.model.coeffs = sol.phi;
    fit.model.sigma2 = fit.sigma2_hat;

    fit.residuals.resize(T - 1);
    for (int t = 1; t < T; ++t) {
        const double x = series[t - 1];
        const bool is_low = x <= fit.threshold_path[t];
        const double fitted = is_low ? sol.phi.phi0_low + sol.phi.phi1_low * x
                                     : sol.phi.phi0_high + sol.phi.phi1_high * x;
        fit.residuals[t - 1] = series[t] - fitted;
    }

    if (!is_ergodic(sol.phi))
        fit.warnings.push_back("fitted slopes violate the ergodicity conditions");
    return fit;
}

/// DE global stage followed by simplex refinement; returns the best theta
/// ever evaluated together with the final DE population (the refined point
/// is guaranteed not to be worse than any population member).
inline std::pair<std::vector<double>, optimize::DeResult> profile_search(
    const ProfileProblem& problem, const SearchSpace& search) {
    optimize::DeOptions de_opt;
    const int dim = search.bounds.dim();
    de_opt.population = search.population > 0 ? search.population : 10 * dim;
    de_opt.generations = search.generations;
    de_opt.crossover = search.crossover;
    de_opt.weight = search.weight;
    de_opt.seed = search.seed;
    de_opt.seed_member = search.initial_guess;
    auto de = optimize::differential_evolution(problem, search.bounds, de_opt);

    optimize::NelderMeadOptions nm_opt;
    nm_opt.max_iterations = search.simplex_iterations;
    nm_opt.tolerance = search.tolerance;
    auto nm = optimize::nelder_mead(problem, de.best, search.bounds, nm_opt);
    std::vector<double> theta = nm.best_value <= de.best_value ? nm.best : de.best;
    return {std::move(theta), std::move(de)};
}

}  // namespace detail

/// Profile conditional-least-squares fit of the wavelet-threshold model at
/// resolution J. Requires T >= 32 and 2^J <= T/16.
inline FitResult fit_wavelet(const TimeSeries& series,
                             std::shared_ptr<const wavelets::WaveletBasis> basis, int J,
                             const SearchSpace& search) {
    validate_for_fitting(series, 32);
    const int T = series.size();
    if (J < 1) throw DomainError("resolution level must be >= 1");
    if ((1 << J) * 16 > T) throw DomainError("resolution too fine: need 2^J <= T/16");
    const int dim = 1 << J;
    if (search.bounds.dim() != dim) throw DomainError("search box dimension must equal 2^J");

    auto tbasis = wavelets::cached_threshold_basis(*basis, J, T);
    ProfileProblem problem(series, tbasis);
    auto [theta, de] = detail::profile_search(problem, search);
    if ((*std::min_element(de.values.begin(), de.values.end())) >= problem.penalty_base())
        throw FitFailed("every candidate threshold left a regime empty or collinear");

    FitResult fit = detail::assemble_fit(series, problem, std::move(theta), search,
                                         ThresholdFamily::Wavelet);
    fit.resolution = J;
    fit.model.threshold = WaveletThreshold{
        basis, wavelets::WaveletCoefficients::from_flat(J, fit.theta_hat)};
    return fit;
}

/// Fourier-threshold fit: profile search over (gamma0, gamma1, gamma2) for
/// each candidate frequency, keeping the smallest SSR (ties to the smaller k).
inline FitResult fit_fourier(const TimeSeries& series, std::span<const int> k_candidates,
                             const SearchSpace& search) {
    validate_for_fitting(series, 16);
    if (k_candidates.empty()) throw DomainError("need at least one Fourier frequency candidate");
    if (search.bounds.dim() != 3) throw DomainError("Fourier search box must be 3-dimensional");

    std::vector<int> ks(k_candidates.begin(), k_candidates.end());
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::optional<FitResult> best;
    std::vector<std::pair<int, double>> trace;
    for (const int k : ks) {
        if (k < 1) throw DomainError("Fourier frequency must be positive");
        ProfileProblem problem(series, k);
        auto [theta, de] = detail::profile_search(problem, search);
        if ((*std::min_element(de.values.begin(), de.values.end())) >= problem.penalty_base()) {
            trace.emplace_back(k, std::numeric_limits<double>::infinity());
            continue;
        }
        FitResult fit = detail::assemble_fit(series, problem, std::move(theta), search,
                                             ThresholdFamily::Fourier);
        fit.fourier_k = k;
        fit.model.threshold = FourierThreshold{fit.theta_hat[0], fit.theta_hat[1],
                                               fit.theta_hat[2], k};
        trace.emplace_back(k, fit.ssr);
        if (!best || fit.ssr < best->ssr) best = std::move(fit);
    }
    if (!best) throw FitFailed("no Fourier frequency produced a feasible fit");
    best->selection_trace = std::move(trace);
    return *std::move(best);
}

/// Constant-threshold fit by grid search over the observed values between
/// the 15% and 85% sample quantiles (ties to the smaller gamma).
inline FitResult fit_constant(const TimeSeries& series) {
    validate_for_fitting(series, 16);
    const int T = series.size();

    std::vector<double> sorted = series.values;
    std::sort(sorted.begin(), sorted.end());
    const int lo_idx = static_cast<int>(std::ceil(0.15 * (T - 1)));
    const int hi_idx = static_cast<int>(std::floor(0.85 * (T - 1)));
    std::vector<double> candidates(sorted.begin() + lo_idx, sorted.begin() + hi_idx + 1);
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    ProfileProblem problem(series);
    std::optional<std::pair<double, double>> best;  // (gamma, ssr)
    for (const double gamma : candidates) {
        const double theta[1] = {gamma};
        const ClsSolution sol = problem.solve(theta);
        if (!sol.ok) continue;
        if (!best || sol.ssr < best->second) best = {gamma, sol.ssr};
    }
    if (!best) throw FitFailed("no constant threshold produced two viable regimes");

    SearchSpace search;  // grid search: recorded box is the candidate span
    search.bounds.lower = {candidates.front()};
    search.bounds.upper = {candidates.back() + 1.0};
    FitResult fit = detail::assemble_fit(series, problem, {best->first}, search,
                                         ThresholdFamily::Constant);
    fit.model.threshold = ConstantThreshold{best->first};
    return fit;
}

enum class SelectionMode { VsTruth, InSample };

/// Fits each candidate J and keeps the arg-min of the selection score:
/// RMSE of the fitted threshold path against `truth` (VsTruth) or residual
/// RMSE sqrt(SSR/(T-1)) (InSample). Ties break toward the smaller J.
///
/// `make_search` supplies the box for each dimension 2^J.
template <typename MakeSearch>
std::pair<int, FitResult> select_resolution(const TimeSeries& series,
                                            std::shared_ptr<const wavelets::WaveletBasis> basis,
                                            std::span<const int> j_candidates, SelectionMode mode,
                                            std::span<const double> truth, MakeSearch&& make_search) {
    if (j_candidates.empty()) throw DomainError("need at least one resolution candidate");
    std::vector<int> js(j_candidates.begin(), j_candidates.end());
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    for (const int J : js)
        if (J < 1 || J > 6) throw DomainError("resolution candidates must lie in 1..6");
    if (mode == SelectionMode::VsTruth && static_cast<int>(truth.size()) != series.size())
        throw DomainError("truth path must match the series length");

    std::optional<FitResult> best;
    int best_j = 0;
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<std::pair<int, double>> trace;
    for (const int J : js) {
        FitResult fit = fit_wavelet(series, basis, J, make_search(J));
        double score;
        if (mode == SelectionMode::VsTruth) {
            double acc = 0.0;
            for (int t = 0; t < series.size(); ++t) {
                const double d = fit.threshold_path[t] - truth[t];
                acc += d * d;
            }
            score = std::sqrt(acc / series.size());
        } else {
            score = std::sqrt(fit.ssr / (series.size() - 1));
        }
        trace.emplace_back(J, score);
        if (score < best_score) {
            best_score = score;
            best_j = J;
            best = std::move(fit);
        }
    }
    best->selection_trace = std::move(trace);
    return {best_j, *std::move(best)};
}

}  // namespace wtar
