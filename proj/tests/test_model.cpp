#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include "wtar/model.hpp"
#include "wtar/studies.hpp"

using namespace wtar;

namespace {

SetarModel constant_model(double gamma, RegimeCoefficients coeffs, double sigma2) {
    SetarModel m;
    m.coeffs = coeffs;
    m.threshold = ConstantThreshold{gamma};
    m.sigma2 = sigma2;
    return m;
}

}  // namespace

TEST_CASE("Fourier threshold arithmetic") {
    const ThresholdSpec spec = FourierThreshold{5.1946, -0.0314, -3.9465, 3};
    CHECK(eval_threshold(spec, 0, 2048) == Catch::Approx(1.2481).margin(1e-12));

    const ThresholdSpec constant = ConstantThreshold{2.0623};
    for (int t : {0, 17, 2047}) CHECK(eval_threshold(constant, t, 2048) == 2.0623);

    const ThresholdSpec flat = FourierThreshold{4.2, 0.0, 0.0, 5};
    for (int t : {0, 100, 999}) CHECK(eval_threshold(flat, t, 1000) == Catch::Approx(4.2).margin(1e-14));
}

TEST_CASE("Fourier threshold is periodic with frequency k") {
    const ThresholdSpec spec = FourierThreshold{1.0, 0.7, -0.4, 4};
    const int T = 1024;
    for (int t = 0; t + T / 4 < T; t += 37)
        CHECK(eval_threshold(spec, t, T) == Catch::Approx(eval_threshold(spec, t + T / 4, T)).margin(1e-12));
}

TEST_CASE("threshold clock range is enforced") {
    const ThresholdSpec spec = ConstantThreshold{0.0};
    CHECK_THROWS_AS(eval_threshold(spec, -1, 100), DomainError);
    CHECK_THROWS_AS(eval_threshold(spec, 100, 100), DomainError);
}

TEST_CASE("noise-free recursion stays in one regime") {
    const SetarModel m = constant_model(10.0, {0.5, 0.0, -99.0, 0.0}, 0.0);
    const TimeSeries y = simulate(m, 32, 0.0, 1);
    CHECK(y[0] == 0.0);
    for (int t = 1; t < 32; ++t) CHECK(y[t] == 0.5);
}

TEST_CASE("boundary ties go to the low regime") {
    // hand recursion: y alternates because y = -1 <= 0 hits low (-> 1) and
    // y = 1 > 0 hits high (-> -1)
    const SetarModel m = constant_model(0.0, {1.0, 0.0, -1.0, 0.0}, 0.0);
    const TimeSeries y = simulate(m, 8, -1.0, 99);
    for (int t = 1; t < 8; ++t) CHECK(y[t] == (t % 2 == 1 ? 1.0 : -1.0));

    // exact tie: y(0) == gamma must land in the low regime
    const SetarModel tie = constant_model(0.0, {7.0, 0.0, -7.0, 0.0}, 0.0);
    const TimeSeries z = simulate(tie, 4, 0.0, 5);
    CHECK(z[1] == 7.0);
}

TEST_CASE("simulation is seed-deterministic") {
    const SetarModel m = studies::study1_model();
    const TimeSeries a = simulate(m, 512, 0.0, 42);
    const TimeSeries b = simulate(m, 512, 0.0, 42);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    const TimeSeries c = simulate(m, 512, 0.0, 43);
    bool any_different = false;
    for (std::size_t i = 0; i < a.values.size(); ++i) any_different |= (a.values[i] != c.values[i]);
    CHECK(any_different);
}

TEST_CASE("regime path reconstructs the drawn innovations") {
    const SetarModel m = studies::study1_model();
    const int T = 256;
    const std::uint64_t seed = 7;
    const TimeSeries y = simulate(m, T, 0.0, seed);
    const std::vector<Regime> regimes = regime_path(m, y);

    // the same sampler state reproduces the innovations the recursion drew
    GaussianSampler normal(seed);
    const double sd = std::sqrt(m.sigma2);
    for (int t = 1; t < T; ++t) {
        const bool low = regimes[t - 1] == Regime::Low;
        const double phi0 = low ? m.coeffs.phi0_low : m.coeffs.phi0_high;
        const double phi1 = low ? m.coeffs.phi1_low : m.coeffs.phi1_high;
        const double reconstructed = y[t] - phi0 - phi1 * y[t - 1];
        CHECK(reconstructed == Catch::Approx(sd * normal()).margin(1e-12));
    }
}

TEST_CASE("regime path extremes") {
    const SetarModel m = studies::study1_model();
    TimeSeries series;
    series.values.assign(64, 0.0);
    for (int i = 0; i < 64; ++i) series.values[i] = std::sin(0.3 * i);

    SetarModel above = m;
    above.threshold = ConstantThreshold{2.0};
    for (Regime r : regime_path(above, series)) CHECK(r == Regime::Low);

    SetarModel below = m;
    below.threshold = ConstantThreshold{-2.0};
    for (Regime r : regime_path(below, series)) CHECK(r == Regime::High);
}

TEST_CASE("regime path against the step threshold") {
    const SetarModel m = studies::study1_model();  // step: 1 / 1.5 / 1 on quarters
    const int T = 40;
    TimeSeries series;
    series.values.assign(T, 1.2);
    const std::vector<Regime> regimes = regime_path(m, series);
    for (int t = 1; t < T; ++t) {
        const double u = static_cast<double>(t) / T;
        const bool mid = (u >= 0.25 && u < 0.75);
        CHECK(regimes[t - 1] == (mid ? Regime::Low : Regime::High));
    }
}

TEST_CASE("simulation rejects bad inputs") {
    SetarModel m = constant_model(0.0, {0.0, -2.0, 0.0, -0.6}, 1.0);  // product 1.2 > 1
    CHECK_THROWS_AS(simulate(m, 64, 0.0, 1), NonergodicModel);

    m.coeffs = {0.0, 1.0, 0.0, 0.2};  // slope not strictly below 1
    CHECK_THROWS_AS(simulate(m, 64, 0.0, 1), NonergodicModel);

    m.coeffs = {0.0, 0.2, 0.0, 0.2};
    m.sigma2 = -0.5;
    CHECK_THROWS_AS(simulate(m, 64, 0.0, 1), InvalidVariance);

    m.sigma2 = 1.0;
    CHECK_THROWS_AS(simulate(m, 1, 0.0, 1), DomainError);
}

TEST_CASE("a Haar series with only c00 equals the constant threshold") {
    auto haar = std::make_shared<const wavelets::WaveletBasis>(
        wavelets::build_filter_bank(wavelets::Family::Haar, 1));
    wavelets::WaveletCoefficients c = wavelets::WaveletCoefficients::zeros(2);
    c.c00 = 0.8;

    SetarModel wave = constant_model(0.8, {0.4, -0.2, 1.1, 0.25}, 1.5);
    wave.threshold = WaveletThreshold{haar, c};
    const SetarModel constant = constant_model(0.8, {0.4, -0.2, 1.1, 0.25}, 1.5);

    const TimeSeries a = simulate(wave, 300, 0.1, 2024);
    const TimeSeries b = simulate(constant, 300, 0.1, 2024);
    for (int t = 0; t < 300; ++t) CHECK(a[t] == b[t]);
}

TEST_CASE("study-1 sample mean sits near the long-run mean") {
    const SetarModel m = studies::study1_model();
    // long-run oracle: one brute-force million-step pass
    const TimeSeries long_run = simulate(m, 1'000'000, 0.0, 12345);
    double long_mean = 0.0;
    for (double v : long_run.values) long_mean += v;
    long_mean /= long_run.size();

    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const TimeSeries y = simulate(m, 2048, 0.0, seed);
        double mean = 0.0;
        for (double v : y.values) mean += v;
        mean /= y.size();
        CHECK(std::fabs(mean - long_mean) < 0.3);
    }
}

TEST_CASE("burn-in discards leading steps but keeps determinism") {
    const SetarModel m = studies::study1_model();
    const TimeSeries a = simulate(m, 128, 0.0, 9, 200);
    const TimeSeries b = simulate(m, 128, 0.0, 9, 200);
    for (int t = 0; t < 128; ++t) CHECK(a[t] == b[t]);
    const TimeSeries no_burn = simulate(m, 128, 0.0, 9, 0);
    CHECK(no_burn[0] == 0.0);
    CHECK(a[0] != 0.0);  // burn-in moved the starting point
}
