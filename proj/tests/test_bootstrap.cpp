#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "wtar/bootstrap.hpp"
#include "wtar/studies.hpp"

using namespace wtar;

namespace {

constexpr RegimeCoefficients kChaotic{1.8, -1.5, 0.2, 0.5};

std::shared_ptr<const wavelets::WaveletBasis> haar_basis() {
    return std::make_shared<const wavelets::WaveletBasis>(
        wavelets::build_filter_bank(wavelets::Family::Haar, 1));
}

// noiseless fit with an exactly separable threshold (see test_estimation)
FitResult noiseless_fit(int T = 64) {
    std::vector<double> gamma(T);
    for (int t = 0; t < T; ++t) gamma[t] = (t < T / 2) ? 1.0 : 0.8;
    const std::vector<double> zero(T - 1, 0.0);
    TimeSeries y;
    y.values = recurse_setar(kChaotic, gamma, zero, 0.3);
    return fit_wavelet(y, haar_basis(), 1, SearchSpace::for_series(y, 2, 17));
}

std::pair<TimeSeries, FitResult> noisy_fit(int T = 128, std::uint64_t seed = 2) {
    SetarModel model;
    model.coeffs = kChaotic;
    model.sigma2 = 0.0025;
    model.threshold = ConstantThreshold{0.9};
    std::vector<double> gamma(T, 0.9);
    TimeSeries y = simulate(model, T, 0.3, seed);
    FitResult fit = fit_wavelet(y, haar_basis(), 1, SearchSpace::for_series(y, 2, seed));
    return {std::move(y), std::move(fit)};
}

}  // namespace

TEST_CASE("residual centering") {
    const std::vector<double> in{1.0, 2.0, 3.0};
    const std::vector<double> out = center_residuals(in);
    CHECK(out == std::vector<double>{-1.0, 0.0, 1.0});

    const std::vector<double> centered{-0.5, 0.25, 0.25};
    const std::vector<double> same = center_residuals(centered);
    for (std::size_t i = 0; i < 3; ++i) CHECK(same[i] == Catch::Approx(centered[i]).margin(1e-15));

    std::mt19937_64 engine(4);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> r(50);
        for (double& v : r) v = unif(engine);
        const std::vector<double> c = center_residuals(r);
        const double mean = std::accumulate(c.begin(), c.end(), 0.0);
        CHECK(std::fabs(mean) < 1e-12 * 50);
    }
    CHECK_THROWS_AS(center_residuals(std::vector<double>{1.0}), DomainError);
}

TEST_CASE("percentile interval follows the stated quantile convention") {
    std::vector<double> draws(100);
    std::iota(draws.begin(), draws.end(), 1.0);
    const auto [lo, hi] = percentile_interval(draws, 0.90);
    CHECK(lo == 5.0);
    CHECK(hi == 95.0);

    const std::vector<double> flat(25, 3.25);
    const auto [flo, fhi] = percentile_interval(flat, 0.5);
    CHECK(flo == 3.25);
    CHECK(fhi == 3.25);

    const auto [xlo, xhi] = percentile_interval(draws, 0.9999);
    CHECK(xlo == 1.0);
    CHECK(xhi == 100.0);

    CHECK_THROWS_AS(percentile_interval(std::vector<double>(5, 1.0), 0.9), DomainError);
    CHECK_THROWS_AS(percentile_interval(draws, 0.0), DomainError);
    CHECK_THROWS_AS(percentile_interval(draws, 1.0), DomainError);
}

TEST_CASE("percentile interval widens monotonically in alpha") {
    std::mt19937_64 engine(9);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> draws(200);
    for (double& v : draws) v = normal(engine);
    double prev_lo = 0.0, prev_hi = 0.0;
    bool first = true;
    for (double alpha : {0.5, 0.8, 0.9, 0.95, 0.99}) {
        const auto [lo, hi] = percentile_interval(draws, alpha);
        if (!first) {
            CHECK(lo <= prev_lo);
            CHECK(hi >= prev_hi);
        }
        prev_lo = lo;
        prev_hi = hi;
        first = false;
    }
}

TEST_CASE("sup-t band hand computation at B = 3") {
    const int T = 5;
    const std::vector<double> gamma_hat(T, 0.5);
    std::vector<std::vector<double>> paths{std::vector<double>(T, 0.0), std::vector<double>(T, 1.0),
                                           std::vector<double>(T, 2.0)};
    const SupTBand band = sup_t_band(paths, gamma_hat, 0.95);
    CHECK(band.c_crit == 1.0);  // M = {1, 0, 1}; third order statistic
    for (int t = 0; t < T; ++t) {
        CHECK(band.pointwise_sd[t] == Catch::Approx(1.0).margin(1e-14));
        CHECK(band.lower[t] == Catch::Approx(-0.5).margin(1e-14));
        CHECK(band.upper[t] == Catch::Approx(1.5).margin(1e-14));
    }
    CHECK(band.floored_points == 0);
}

TEST_CASE("a degenerate spread collapses onto the floored band") {
    const int T = 4;
    const std::vector<double> gamma_hat{1.0, 2.0, -3.0, 0.0};
    std::vector<std::vector<double>> paths(10, std::vector<double>(gamma_hat.begin(), gamma_hat.end()));
    const SupTBand band = sup_t_band(paths, gamma_hat, 0.95);
    CHECK(band.floored_points == T);
    for (int t = 0; t < T; ++t) {
        const double floor = 1e-10 * (1.0 + std::fabs(gamma_hat[t]));
        CHECK(band.pointwise_sd[t] == floor);
        CHECK(band.upper[t] - gamma_hat[t] == Catch::Approx(band.c_crit * floor).margin(1e-20));
    }
}

TEST_CASE("dropping the largest sup statistic never raises the critical value") {
    std::mt19937_64 engine(31);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> stats(25 + engine() % 50);
        for (double& v : stats) v = std::fabs(normal(engine));
        std::sort(stats.begin(), stats.end());
        std::vector<double> trimmed(stats.begin(), stats.end() - 1);
        CHECK(empirical_quantile(trimmed, 0.95) <= empirical_quantile(stats, 0.95));
    }
}

TEST_CASE("resampling a zero-residual fit returns the fitted skeleton") {
    const FitResult fit = noiseless_fit();
    const TimeSeries skeleton_series = resample_path(fit, 1234);
    const std::vector<double> zero(fit.threshold_path.size() - 1, 0.0);
    const std::vector<double> skeleton =
        recurse_setar(fit.model.coeffs, fit.threshold_path, zero, fit.y0);
    REQUIRE(skeleton_series.values.size() == skeleton.size());
    for (std::size_t t = 0; t < skeleton.size(); ++t)
        CHECK(skeleton_series.values[t] == Catch::Approx(skeleton[t]).margin(1e-12));

    const TimeSeries again = resample_path(fit, 1234);
    for (std::size_t t = 0; t < skeleton.size(); ++t)
        CHECK(again.values[t] == skeleton_series.values[t]);
}

TEST_CASE("the first bootstrap step draws from the recentred residual set") {
    auto [y, fit] = noisy_fit();
    const std::vector<double> centered = center_residuals(fit.residuals);

    // theoretical atom set for y_b(1): fitted prediction at y(0) plus any residual
    const double gamma1 = fit.threshold_path[1];
    const bool low = fit.y0 <= gamma1;
    const double base = (low ? fit.model.coeffs.phi0_low + fit.model.coeffs.phi1_low * fit.y0
                             : fit.model.coeffs.phi0_high + fit.model.coeffs.phi1_high * fit.y0);
    std::vector<double> atoms(centered.size());
    for (std::size_t i = 0; i < centered.size(); ++i) atoms[i] = base + centered[i];
    std::sort(atoms.begin(), atoms.end());

    const int n_draws = 10000;
    std::vector<double> draws(n_draws);
    for (int i = 0; i < n_draws; ++i) draws[i] = resample_path(fit, 5000 + i).values[1];
    std::sort(draws.begin(), draws.end());

    // two-sided Kolmogorov-Smirnov distance between the empirical draw CDF
    // and the discrete atom CDF
    double ks = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double cdf_atoms = static_cast<double>(i + 1) / atoms.size();
        const auto it = std::upper_bound(draws.begin(), draws.end(), atoms[i]);
        const double cdf_draws = static_cast<double>(it - draws.begin()) / n_draws;
        ks = std::max(ks, std::fabs(cdf_atoms - cdf_draws));
    }
    CHECK(ks < 0.05);
}

TEST_CASE("bootstrap of a noiseless fit is degenerate at the point estimates") {
    const FitResult fit = noiseless_fit();
    std::vector<double> gamma(64);
    for (int t = 0; t < 64; ++t) gamma[t] = (t < 32) ? 1.0 : 0.8;
    const std::vector<double> zero(63, 0.0);
    TimeSeries y;
    y.values = recurse_setar(kChaotic, gamma, zero, 0.3);

    const BootstrapResult boot = bootstrap_model(y, fit, 60, 0.95, 7);
    CHECK(boot.dropped == 0);
    const std::array<double, 5> original{fit.model.coeffs.phi0_low, fit.model.coeffs.phi1_low,
                                         fit.model.coeffs.phi0_high, fit.model.coeffs.phi1_high,
                                         fit.sigma2_hat};
    for (const auto& row : boot.estimates)
        for (int p = 0; p < 5; ++p) CHECK(row[p] == Catch::Approx(original[p]).margin(1e-8));
    for (int p = 0; p < 5; ++p)
        CHECK(boot.intervals[p].second - boot.intervals[p].first < 1e-8);
}

TEST_CASE("bootstrap is seed-deterministic") {
    auto [y, fit] = noisy_fit();
    const BootstrapResult a = bootstrap_model(y, fit, 50, 0.9, 99);
    const BootstrapResult b = bootstrap_model(y, fit, 50, 0.9, 99);
    REQUIRE(a.estimates.size() == b.estimates.size());
    for (std::size_t i = 0; i < a.estimates.size(); ++i)
        for (int p = 0; p < 5; ++p) CHECK(a.estimates[i][p] == b.estimates[i][p]);
    CHECK(a.band.c_crit == b.band.c_crit);
    for (int p = 0; p < 5; ++p) {
        CHECK(a.intervals[p].first == b.intervals[p].first);
        CHECK(a.intervals[p].second == b.intervals[p].second);
    }
}

TEST_CASE("bootstrap preconditions") {
    auto [y, fit] = noisy_fit();
    CHECK_THROWS_AS(bootstrap_model(y, fit, 20, 0.95, 1), DomainError);
    CHECK_THROWS_AS(bootstrap_model(y, fit, 100, 1.5, 1), DomainError);
    const FitResult constant = fit_constant(y);
    CHECK_THROWS_AS(bootstrap_model(y, constant, 100, 0.95, 1), DomainError);
}

TEST_CASE("band width never shrinks when alpha grows") {
    auto [y, fit] = noisy_fit();
    const BootstrapResult narrow = bootstrap_model(y, fit, 60, 0.5, 3);
    const BootstrapResult wide = bootstrap_model(y, fit, 60, 0.99, 3);
    CHECK(wide.band.c_crit >= narrow.band.c_crit);
    for (int p = 0; p < 5; ++p) {
        CHECK(wide.intervals[p].first <= narrow.intervals[p].first);
        CHECK(wide.intervals[p].second >= narrow.intervals[p].second);
    }
}

TEST_CASE("single-replication coverage is zero or one") {
    SetarModel model;
    model.coeffs = kChaotic;
    model.sigma2 = 0.0025;
    auto haar = haar_basis();
    wavelets::WaveletCoefficients c = wavelets::WaveletCoefficients::zeros(1);
    c.c00 = 0.9;
    model.threshold = WaveletThreshold{haar, c};

    const TimeSeries probe = simulate(model, 64, 0.3, 1);
    SearchSpace search = SearchSpace::for_series(probe, 2, 1);
    const CoverageReport report = coverage_experiment(model, 64, 1, 50, 0.95, 11, search, 1);
    CHECK(report.monte_carlo_reps == 1);
    for (double cov : report.parameter_coverage) CHECK((cov == 0.0 || cov == 1.0));
    CHECK((report.band_coverage == 0.0 || report.band_coverage == 1.0));
}
