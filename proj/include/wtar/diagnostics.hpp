#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "wtar/model.hpp"

namespace wtar {

namespace detail {

/// Regularized upper incomplete gamma Q(s, x), relative error ~1e-14.
/// Series expansion below the crossover, Lentz continued fraction above.
inline double gamma_q(double s, double x) {
    if (x < 0.0 || s <= 0.0) throw DomainError("gamma_q needs s > 0, x >= 0");
    if (x == 0.0) return 1.0;
    const double log_prefactor = s * std::log(x) - x - std::lgamma(s);
    if (x < s + 1.0) {
        // P(s,x) by series, Q = 1 - P
        double term = 1.0 / s;
        double sum = term;
        double a = s;
        for (int n = 0; n < 500; ++n) {
            a += 1.0;
            term *= x / a;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(log_prefactor);
    }
    // modified Lentz on the standard continued fraction for Q
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return f * std::exp(log_prefactor);
}

/// Upper-tail probability of a chi-square with df degrees of freedom.
inline double chi_square_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

}  // namespace detail

/// order-fold first difference; output length T - order.
inline TimeSeries difference(const TimeSeries& series, int order = 1) {
    if (order < 0) throw DomainError("difference order must be non-negative");
    if (order >= series.size()) throw DomainError("difference order must be below the series length");
    TimeSeries out = series;
    for (int pass = 0; pass < order; ++pass) {
        for (std::size_t t = out.values.size() - 1; t >= 1; --t)
            out.values[t] -= out.values[t - 1];
        out.values.erase(out.values.begin());
        if (!out.timestamps.empty()) out.timestamps.erase(out.timestamps.begin());
    }
    return out;
}

struct AcfResult {
    std::vector<double> rho;  // rho_1..rho_h
    int sample_size = 0;
    double confidence_limit = 0.0;  // 1.96 / sqrt(T)
};

/// Sample autocorrelations rho_k = sum (y_t - m)(y_{t-k} - m) / sum (y_t - m)^2.
inline AcfResult acf(const TimeSeries& series, int max_lag) {
    const int T = series.size();
    if (max_lag < 1 || max_lag >= (T + 1) / 2) throw DomainError("max_lag must satisfy 1 <= h < T/2");
    double mean = 0.0;
    for (double v : series.values) mean += v;
    mean /= T;
    double denom = 0.0;
    for (double v : series.values) denom += (v - mean) * (v - mean);
    if (!(denom > 0.0)) throw ConstantSeries("zero-variance series has no autocorrelation");

    AcfResult out;
    out.sample_size = T;
    out.confidence_limit = 1.96 / std::sqrt(static_cast<double>(T));
    out.rho.resize(max_lag);
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (int t = k; t < T; ++t) num += (series[t] - mean) * (series[t - k] - mean);
        out.rho[k - 1] = num / denom;
    }
    return out;
}

struct LjungBoxResult {
    int lag = 0;
    double statistic = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
};

/// Portmanteau statistic Q = T(T+2) sum_{k<=h} rho_k^2 / (T-k) against a
/// chi-square with h - fitted_params degrees of freedom.
inline LjungBoxResult ljung_box(const TimeSeries& series, int h, int fitted_params = 0) {
    if (fitted_params < 0 || fitted_params >= h)
        throw DomainError("fitted_params must lie in [0, h)");
    const AcfResult rho = acf(series, h);
    const double T = series.size();
    double q = 0.0;
    for (int k = 1; k <= h; ++k) q += rho.rho[k - 1] * rho.rho[k - 1] / (T - k);
    q *= T * (T + 2.0);

    LjungBoxResult out;
    out.lag = h;
    out.statistic = q;
    out.degrees_of_freedom = h - fitted_params;
    out.p_value = detail::chi_square_sf(q, out.degrees_of_freedom);
    return out;
}

/// (root-mean-square error, mean absolute error) between two equal-length paths.
inline std::pair<double, double> error_metrics(std::span<const double> truth,
                                               std::span<const double> estimate) {
    if (truth.size() != estimate.size() || truth.empty())
        throw DomainError("error metrics need equal-length non-empty paths");
    double sq = 0.0, ab = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = estimate[i] - truth[i];
        sq += d * d;
        ab += std::fabs(d);
    }
    const double n = static_cast<double>(truth.size());
    return {std::sqrt(sq / n), ab / n};
}

}  // namespace wtar
