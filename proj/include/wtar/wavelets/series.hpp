#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "wtar/wavelets/basis.hpp"

namespace wtar::wavelets {

/// Coefficients of a truncated wavelet series on [0,1):
/// c00 plus details d_{j,k} for j = 0..J-1, k = 0..2^j-1 (2^J values total).
struct WaveletCoefficients {
    int J = 1;
    double c00 = 0.0;
    std::vector<double> d;  // j-major: offset(j) = 2^j - 1, then k

    static WaveletCoefficients zeros(int J) {
        WaveletCoefficients c;
        c.J = J;
        c.d.assign((std::size_t{1} << J) - 1, 0.0);
        return c;
    }

    int dim() const { return 1 << J; }

    double detail(int j, int k) const { return d[(std::size_t{1} << j) - 1 + k]; }
    double& detail(int j, int k) { return d[(std::size_t{1} << j) - 1 + k]; }

    /// Flat view (c00 first, then details in j-major order).
    std::vector<double> flatten() const {
        std::vector<double> out;
        out.reserve(d.size() + 1);
        out.push_back(c00);
        out.insert(out.end(), d.begin(), d.end());
        return out;
    }

    static WaveletCoefficients from_flat(int J, std::span<const double> flat) {
        if (flat.size() != (std::size_t{1} << J))
            throw DomainError("coefficient vector must have 2^J entries");
        WaveletCoefficients c = zeros(J);
        c.c00 = flat[0];
        for (std::size_t i = 1; i < flat.size(); ++i) c.d[i - 1] = flat[i];
        return c;
    }
};

/// Basis function value at u in [0,1) with unit-interval boundary handling.
///
/// The non-Haar families leak mass outside [0,1); each function is wrapped
/// onto the interval by summing over its integer translates (period-1
/// periodization). One periodized father plus the k = 0..2^j-1 periodized
/// mothers per level form a complete orthonormal system on [0,1) with
/// exactly 2^J members, and the periodized father is identically 1. Haar
/// functions already live inside [0,1) and are returned as-is.
inline double eval_on_unit_interval(const WaveletBasis& basis, int j, int k, double u, Kind kind) {
    if (basis.family() == Family::Haar) return basis.eval_scaled(j, k, u, kind);
    const double scale = std::exp2(j);
    const double lo = ((kind == Kind::Father ? basis.father_support_min()
                                             : basis.mother_support_min()) + k) / scale;
    const double hi = ((kind == Kind::Father ? basis.father_support_max()
                                             : basis.mother_support_max()) + k) / scale;
    double acc = 0.0;
    const int m_lo = static_cast<int>(std::ceil(lo - u));
    const int m_hi = static_cast<int>(std::floor(hi - u));
    for (int m = m_lo; m <= m_hi; ++m) acc += basis.eval_scaled(j, k, u + m, kind);
    return acc;
}

/// Truncated series value at u in [0,1): c00*phi00(u) + sum d_jk*psi_jk(u),
/// with periodized basis functions for the non-Haar families.
inline double eval_threshold_series(const WaveletBasis& basis,
                                    const WaveletCoefficients& coeffs, double u) {
    if (!(u >= 0.0 && u < 1.0)) throw DomainError("series argument must lie in [0,1)");
    double acc = coeffs.c00 * eval_on_unit_interval(basis, 0, 0, u, Kind::Father);
    for (int j = 0; j < coeffs.J; ++j) {
        for (int k = 0; k < (1 << j); ++k) {
            const double djk = coeffs.detail(j, k);
            if (djk != 0.0) acc += djk * eval_on_unit_interval(basis, j, k, u, Kind::Mother);
        }
    }
    return acc;
}

/// Dense matrix of unit-interval basis values on a uniform grid u_t = t/n,
/// row t, column index matching the flattened coefficient layout.
///
/// Series evaluation on the grid becomes a matrix-vector product, which is
/// what the profile estimation loop needs; instances are immutable and are
/// shared through the cache below.
class ThresholdBasis {
public:
    ThresholdBasis(const WaveletBasis& basis, int J, int n)
        : J_(J), n_(n), dim_(1 << J), values_(static_cast<std::size_t>(n) * (1 << J)) {
        for (int t = 0; t < n; ++t) {
            const double u = static_cast<double>(t) / n;
            double* row = values_.data() + static_cast<std::size_t>(t) * dim_;
            row[0] = eval_on_unit_interval(basis, 0, 0, u, Kind::Father);
            int col = 1;
            for (int j = 0; j < J; ++j)
                for (int k = 0; k < (1 << j); ++k)
                    row[col++] = eval_on_unit_interval(basis, j, k, u, Kind::Mother);
        }
    }

    int resolution() const { return J_; }
    int grid_size() const { return n_; }
    int dim() const { return dim_; }

    const double* row(int t) const { return values_.data() + static_cast<std::size_t>(t) * dim_; }

    double value_at(int t, std::span<const double> theta) const {
        const double* r = row(t);
        double acc = 0.0;
        for (int c = 0; c < dim_; ++c) acc += r[c] * theta[c];
        return acc;
    }

    void path(std::span<const double> theta, std::vector<double>& out) const {
        out.resize(n_);
        for (int t = 0; t < n_; ++t) out[t] = value_at(t, theta);
    }

private:
    int J_, n_, dim_;
    std::vector<double> values_;
};

/// Process-wide cache of ThresholdBasis instances keyed by
/// (family, N, eval_depth, J, grid size).
inline std::shared_ptr<const ThresholdBasis> cached_threshold_basis(const WaveletBasis& basis,
                                                                    int J, int n) {
    using Key = std::tuple<int, int, int, int, int>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const ThresholdBasis>> cache;
    const Key key{static_cast<int>(basis.family()), basis.vanishing_moments(),
                  basis.eval_depth(), J, n};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto built = std::make_shared<const ThresholdBasis>(basis, J, n);
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(built));
    return it->second;
}

namespace detail {

/// Gaussian elimination with partial pivoting; A is row-major dim x dim.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[static_cast<std::size_t>(r) * n + col]) >
                std::fabs(a[static_cast<std::size_t>(pivot) * n + col]))
                pivot = r;
        if (pivot != col) {
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(col) * n + c],
                          a[static_cast<std::size_t>(pivot) * n + c]);
            std::swap(b[col], b[pivot]);
        }
        const double diag = a[static_cast<std::size_t>(col) * n + col];
        if (diag == 0.0) throw DomainError("singular system in projection");
        for (int r = col + 1; r < n; ++r) {
            const double factor = a[static_cast<std::size_t>(r) * n + col] / diag;
            if (factor == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r) * n + c] -= factor * a[static_cast<std::size_t>(col) * n + c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[static_cast<std::size_t>(r) * n + c] * x[c];
        x[r] = acc / a[static_cast<std::size_t>(r) * n + r];
    }
    return x;
}

}  // namespace detail

/// Projects f, sampled at u_i = i/n, onto the span of the level-J
/// basis (left-endpoint Riemann inner products, Gram-corrected so that
/// functions already in the span reproduce themselves).
///
/// Requires n >= 2^{J+4}.
inline WaveletCoefficients project_function(const WaveletBasis& basis, int J,
                                            std::span<const double> samples) {
    const int n = static_cast<int>(samples.size());
    if (n < (1 << (J + 4)))
        throw InsufficientResolution("projection grid needs at least 2^(J+4) points");
    const ThresholdBasis design(basis, J, n);
    const int dim = design.dim();
    std::vector<double> gram(static_cast<std::size_t>(dim) * dim, 0.0);
    std::vector<double> rhs(dim, 0.0);
    for (int t = 0; t < n; ++t) {
        const double* row = design.row(t);
        for (int a = 0; a < dim; ++a) {
            rhs[a] += row[a] * samples[t];
            for (int b = a; b < dim; ++b) gram[static_cast<std::size_t>(a) * dim + b] += row[a] * row[b];
        }
    }
    for (int a = 0; a < dim; ++a) {
        rhs[a] /= n;
        for (int b = a; b < dim; ++b) {
            gram[static_cast<std::size_t>(a) * dim + b] /= n;
            gram[static_cast<std::size_t>(b) * dim + a] = gram[static_cast<std::size_t>(a) * dim + b];
        }
    }
    const std::vector<double> theta = detail::solve_dense(std::move(gram), std::move(rhs));
    return WaveletCoefficients::from_flat(J, theta);
}

}  // namespace wtar::wavelets
