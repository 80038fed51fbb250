#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <utility>
#include <vector>

#include "wtar/wavelets/filter_bank.hpp"

using wtar::wavelets::build_filter_bank;
using wtar::wavelets::Family;
using wtar::wavelets::FilterBank;

namespace {

std::vector<std::pair<Family, int>> shipped_banks() {
    std::vector<std::pair<Family, int>> banks{{Family::Haar, 1}};
    for (int n = 1; n <= 10; ++n) banks.emplace_back(Family::DaubechiesExtremalPhase, n);
    for (int n = 4; n <= 10; ++n) banks.emplace_back(Family::DaubechiesLeastAsymmetric, n);
    return banks;
}

}  // namespace

TEST_CASE("every shipped filter bank satisfies the filter identities") {
    for (const auto& [family, n] : shipped_banks()) {
        INFO(wtar::wavelets::family_name(family) << "(" << n << ")");
        const FilterBank bank = build_filter_bank(family, n);
        REQUIRE(bank.length() == 2 * n);
        REQUIRE(bank.high_pass.size() == bank.low_pass.size());

        double sum_low = 0.0, sum_high = 0.0, energy = 0.0;
        for (int k = 0; k < bank.length(); ++k) {
            sum_low += bank.low_pass[k];
            sum_high += bank.high_pass[k];
            energy += bank.low_pass[k] * bank.low_pass[k];
        }
        CHECK(std::fabs(sum_low - M_SQRT2) < 1e-12);
        CHECK(std::fabs(sum_high) < 1e-12);
        CHECK(std::fabs(energy - 1.0) < 1e-12);

        // quadrature mirror rule holds exactly as constructed
        for (int k = 0; k < bank.length(); ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            CHECK(bank.high_pass[k] == sign * bank.low_pass[bank.length() - 1 - k]);
        }

        // even-shift orthogonality of the low-pass with itself
        for (int m = 1; m < n; ++m) {
            double dot = 0.0;
            for (int k = 0; k + 2 * m < bank.length(); ++k)
                dot += bank.low_pass[k] * bank.low_pass[k + 2 * m];
            CHECK(std::fabs(dot) < 1e-12);
        }
    }
}

TEST_CASE("Haar taps are the exact closed form") {
    const FilterBank haar = build_filter_bank(Family::Haar, 1);
    CHECK(haar.low_pass[0] == Catch::Approx(1.0 / M_SQRT2).epsilon(1e-15));
    CHECK(haar.low_pass[1] == Catch::Approx(1.0 / M_SQRT2).epsilon(1e-15));
    CHECK(haar.high_pass[0] == Catch::Approx(1.0 / M_SQRT2).epsilon(1e-15));
    CHECK(haar.high_pass[1] == Catch::Approx(-1.0 / M_SQRT2).epsilon(1e-15));
}

TEST_CASE("D(2) taps match the closed form in sqrt(3)") {
    const FilterBank d2 = build_filter_bank(Family::DaubechiesExtremalPhase, 2);
    const double s3 = std::sqrt(3.0);
    const double denom = 4.0 * M_SQRT2;
    CHECK(d2.low_pass[0] == Catch::Approx((1.0 + s3) / denom).margin(1e-14));
    CHECK(d2.low_pass[1] == Catch::Approx((3.0 + s3) / denom).margin(1e-14));
    CHECK(d2.low_pass[2] == Catch::Approx((3.0 - s3) / denom).margin(1e-14));
    CHECK(d2.low_pass[3] == Catch::Approx((1.0 - s3) / denom).margin(1e-14));

    // mirror rule spelled out at L = 4
    CHECK(d2.high_pass[0] == d2.low_pass[3]);
    CHECK(d2.high_pass[1] == -d2.low_pass[2]);
    CHECK(d2.high_pass[2] == d2.low_pass[1]);
    CHECK(d2.high_pass[3] == -d2.low_pass[0]);
}

TEST_CASE("unsupported family/order pairs are rejected") {
    CHECK_THROWS_AS(build_filter_bank(Family::Haar, 2), wtar::UnsupportedWavelet);
    CHECK_THROWS_AS(build_filter_bank(Family::DaubechiesExtremalPhase, 0), wtar::UnsupportedWavelet);
    CHECK_THROWS_AS(build_filter_bank(Family::DaubechiesExtremalPhase, 11), wtar::UnsupportedWavelet);
    CHECK_THROWS_AS(build_filter_bank(Family::DaubechiesLeastAsymmetric, 3), wtar::UnsupportedWavelet);
    CHECK_THROWS_AS(build_filter_bank(Family::DaubechiesLeastAsymmetric, 11), wtar::UnsupportedWavelet);
}
