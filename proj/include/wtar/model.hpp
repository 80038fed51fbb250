#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wtar/errors.hpp"
#include "wtar/rng.hpp"
#include "wtar/wavelets/series.hpp"

namespace wtar {

/// Ordered observations y(0..T-1), with optional pass-through labels
/// (dates etc.). The model clock is always the row index.
struct TimeSeries {
    std::vector<double> values;
    std::vector<std::string> timestamps;  // empty or same length as values

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int t) const { return values[t]; }
};

inline void validate_for_fitting(const TimeSeries& series, int min_length) {
    if (series.size() < min_length)
        throw DomainError("series too short: need at least " + std::to_string(min_length) +
                          " observations, got " + std::to_string(series.size()));
    for (double v : series.values)
        if (!std::isfinite(v)) throw DomainError("series contains a non-finite value");
}

/// Per-regime AR(1) intercepts and slopes.
struct RegimeCoefficients {
    double phi0_low = 0.0;
    double phi1_low = 0.0;
    double phi0_high = 0.0;
    double phi1_high = 0.0;
};

inline bool is_ergodic(const RegimeCoefficients& c) {
    return c.phi1_low < 1.0 && c.phi1_high < 1.0 && c.phi1_low * c.phi1_high < 1.0;
}

struct ConstantThreshold {
    double gamma = 0.0;
};

/// gamma0 + gamma1 sin(2 pi k u) + gamma2 cos(2 pi k u).
struct FourierThreshold {
    double gamma0 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    int k = 1;
};

struct WaveletThreshold {
    std::shared_ptr<const wavelets::WaveletBasis> basis;
    wavelets::WaveletCoefficients coeffs;
};

using ThresholdSpec = std::variant<ConstantThreshold, FourierThreshold, WaveletThreshold>;

/// Threshold value at rescaled time u in [0,1).
inline double eval_threshold_at(const ThresholdSpec& spec, double u) {
    if (!(u >= 0.0 && u < 1.0)) throw DomainError("rescaled time must lie in [0,1)");
    if (const auto* c = std::get_if<ConstantThreshold>(&spec)) return c->gamma;
    if (const auto* f = std::get_if<FourierThreshold>(&spec)) {
        const double w = 2.0 * M_PI * f->k * u;
        return f->gamma0 + f->gamma1 * std::sin(w) + f->gamma2 * std::cos(w);
    }
    const auto& w = std::get<WaveletThreshold>(spec);
    return wavelets::eval_threshold_series(*w.basis, w.coeffs, u);
}

/// Threshold at integer clock t of a length-T sample (u = t/T).
inline double eval_threshold(const ThresholdSpec& spec, int t, int T) {
    if (t < 0 || t >= T) throw DomainError("clock index out of range");
    return eval_threshold_at(spec, static_cast<double>(t) / T);
}

inline std::vector<double> threshold_path(const ThresholdSpec& spec, int T) {
    std::vector<double> path(T);
    for (int t = 0; t < T; ++t) path[t] = eval_threshold(spec, t, T);
    return path;
}

/// Two-regime SETAR(1) with a (possibly time-varying) threshold.
struct SetarModel {
    RegimeCoefficients coeffs;
    ThresholdSpec threshold = ConstantThreshold{};
    double sigma2 = 1.0;
};

enum class Regime : std::uint8_t { Low, High };

/// Deterministic recursion against an explicit threshold path.
/// path has length T; innovations has length T-1 (entry t-1 feeds step t).
inline std::vector<double> recurse_setar(const RegimeCoefficients& coeffs,
                                         std::span<const double> path,
                                         std::span<const double> innovations, double y0) {
    const int T = static_cast<int>(path.size());
    std::vector<double> y(T);
    y[0] = y0;
    for (int t = 1; t < T; ++t) {
        const bool low = y[t - 1] <= path[t];
        const double phi0 = low ? coeffs.phi0_low : coeffs.phi0_high;
        const double phi1 = low ? coeffs.phi1_low : coeffs.phi1_high;
        y[t] = phi0 + phi1 * y[t - 1] + innovations[t - 1];
    }
    return y;
}

/// Simulation against an explicit threshold path (length T) with Gaussian
/// innovations; used by simulate() and by study tooling whose true threshold
/// is not one of the ThresholdSpec shapes.
inline TimeSeries simulate_on_path(const RegimeCoefficients& coeffs, std::span<const double> path,
                                   double sigma2, double y0, std::uint64_t seed, int burn_in = 0) {
    if (path.size() < 2) throw DomainError("simulation needs T >= 2");
    if (sigma2 < 0.0) throw InvalidVariance("innovation variance must be non-negative");
    if (!is_ergodic(coeffs))
        throw NonergodicModel("regime slopes violate phi1_low < 1, phi1_high < 1, product < 1");

    const double sd = std::sqrt(sigma2);
    GaussianSampler normal(seed);

    double y_prev = y0;
    for (int s = 0; s < burn_in; ++s) {
        const bool low = y_prev <= path[0];
        const double phi0 = low ? coeffs.phi0_low : coeffs.phi0_high;
        const double phi1 = low ? coeffs.phi1_low : coeffs.phi1_high;
        y_prev = phi0 + phi1 * y_prev + sd * normal();
    }

    std::vector<double> innovations(path.size() - 1);
    for (double& e : innovations) e = sd * normal();
    TimeSeries out;
    out.values = recurse_setar(coeffs, path, innovations, y_prev);
    return out;
}

/// Simulates T observations with Gaussian innovations.
///
/// y(0) is the supplied initial datum; the recursion runs t = 1..T-1 with the
/// boundary tie y(t-1) == gamma(t/T) assigned to the low regime. An optional
/// burn-in discards leading steps generated with the threshold held at its
/// u = 0 value.
inline TimeSeries simulate(const SetarModel& model, int T, double y0, std::uint64_t seed,
                           int burn_in = 0) {
    if (T < 2) throw DomainError("simulation needs T >= 2");
    return simulate_on_path(model.coeffs, threshold_path(model.threshold, T), model.sigma2, y0,
                            seed, burn_in);
}

/// Regime indicator for t = 1..T-1 (entry t-1 of the result).
inline std::vector<Regime> regime_path(const SetarModel& model, const TimeSeries& series) {
    const int T = series.size();
    if (T < 2) throw DomainError("regime path needs at least 2 observations");
    std::vector<Regime> regimes(T - 1);
    for (int t = 1; t < T; ++t) {
        const double gamma = eval_threshold(model.threshold, t, T);
        regimes[t - 1] = series[t - 1] <= gamma ? Regime::Low : Regime::High;
    }
    return regimes;
}

}  // namespace wtar
