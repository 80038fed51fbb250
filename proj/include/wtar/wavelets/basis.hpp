#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "wtar/wavelets/filter_bank.hpp"

namespace wtar::wavelets {

enum class Kind { Father, Mother };

/// Evaluation machinery for the scaling function phi and wavelet psi of one
/// filter bank.
///
/// Haar uses the closed forms; every other family is evaluated with the
/// Daubechies-Lagarias scheme, seeded at the integer-point values so that
/// dyadic rationals of depth below `eval_depth` come out exact.
///
/// Supports: phi lives on [0, 2N-1], psi on [-N+1, N].
class WaveletBasis {
public:
    explicit WaveletBasis(FilterBank filter, int eval_depth = 30)
        : filter_(std::move(filter)), eval_depth_(eval_depth) {
        if (eval_depth_ < 1) throw DomainError("eval_depth must be >= 1");
        if (filter_.family != Family::Haar) {
            init_integer_values();
            init_transition_matrices();
        }
    }

    const FilterBank& filter() const { return filter_; }
    Family family() const { return filter_.family; }
    int vanishing_moments() const { return filter_.vanishing_moments; }
    int eval_depth() const { return eval_depth_; }

    double father_support_min() const { return 0.0; }
    double father_support_max() const { return filter_.length() - 1.0; }
    double mother_support_min() const { return 1.0 - filter_.vanishing_moments; }
    double mother_support_max() const { return filter_.vanishing_moments; }

    /// phi(t); zero outside [0, 2N-1].
    double eval_father(double t) const {
        if (filter_.family == Family::Haar) {
            return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
        }
        const int len = filter_.length();
        if (!(t > 0.0) || !(t < len - 1.0)) return 0.0;
        const int whole = static_cast<int>(std::floor(t));
        double frac = t - whole;
        if (frac == 0.0) return integer_values_[whole];

        // dyadic digits of the fractional part; a terminating expansion is
        // handled exactly because the tail vector equals the integer values
        int digits[64];
        int count = 0;
        while (count < eval_depth_ && frac > 0.0) {
            frac *= 2.0;
            if (frac >= 1.0) {
                digits[count++] = 1;
                frac -= 1.0;
            } else {
                digits[count++] = 0;
            }
        }

        const int dim = len - 1;
        std::vector<double> vec = integer_values_;
        std::vector<double> next(dim);
        for (int i = count - 1; i >= 0; --i) {
            const std::vector<double>& mat = digits[i] ? t1_ : t0_;
            for (int r = 0; r < dim; ++r) {
                double acc = 0.0;
                const double* row = mat.data() + static_cast<std::size_t>(r) * dim;
                for (int c = 0; c < dim; ++c) acc += row[c] * vec[c];
                next[r] = acc;
            }
            vec.swap(next);
        }
        return vec[whole];
    }

    /// psi(t); zero outside [-N+1, N]. Built from the father through the
    /// high-pass two-scale sum, index-shifted so the support is centered.
    double eval_mother(double t) const {
        if (filter_.family == Family::Haar) {
            if (t >= 0.0 && t < 0.5) return 1.0;
            if (t >= 0.5 && t < 1.0) return -1.0;
            return 0.0;
        }
        if (!(t > mother_support_min()) || !(t < mother_support_max())) return 0.0;
        const int len = filter_.length();
        const double shift = 2.0 * t + len - 2.0;
        double acc = 0.0;
        for (int k = 0; k < len; ++k) {
            acc += filter_.high_pass[k] * eval_father(shift - k);
        }
        return M_SQRT2 * acc;
    }

    /// 2^{j/2} phi(2^j t - k) or 2^{j/2} psi(2^j t - k).
    double eval_scaled(int j, int k, double t, Kind kind) const {
        const double scale = std::exp2(0.5 * j);
        const double arg = std::exp2(j) * t - k;
        return scale * (kind == Kind::Father ? eval_father(arg) : eval_mother(arg));
    }

    /// phi at the integer support points (index 0..2N-2).
    const std::vector<double>& integer_values() const { return integer_values_; }

private:
    void init_integer_values() {
        // phi(m) is the eigenvector of M(m,m') = sqrt(2) l_{2m-m'} at eigenvalue
        // 1, normalized to sum 1. Columns of M sum to 1, so plain power
        // iteration preserves the normalization and contracts the rest.
        const int len = filter_.length();
        const int dim = len - 1;
        std::vector<double> mat(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int m = 0; m < dim; ++m) {
            for (int mp = 0; mp < dim; ++mp) {
                const int idx = 2 * m - mp;
                if (idx >= 0 && idx < len) {
                    mat[static_cast<std::size_t>(m) * dim + mp] = M_SQRT2 * filter_.low_pass[idx];
                }
            }
        }
        std::vector<double> vec(dim, 1.0 / dim);
        std::vector<double> next(dim);
        for (int iter = 0; iter < 512; ++iter) {
            for (int r = 0; r < dim; ++r) {
                double acc = 0.0;
                for (int c = 0; c < dim; ++c) acc += mat[static_cast<std::size_t>(r) * dim + c] * vec[c];
                next[r] = acc;
            }
            vec.swap(next);
        }
        integer_values_ = vec;
    }

    void init_transition_matrices() {
        const int len = filter_.length();
        const int dim = len - 1;
        t0_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
        t1_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                const int i0 = 2 * i - j;
                const int i1 = 2 * i - j + 1;
                if (i0 >= 0 && i0 < len) t0_[static_cast<std::size_t>(i) * dim + j] = M_SQRT2 * filter_.low_pass[i0];
                if (i1 >= 0 && i1 < len) t1_[static_cast<std::size_t>(i) * dim + j] = M_SQRT2 * filter_.low_pass[i1];
            }
        }
    }

    FilterBank filter_;
    int eval_depth_;
    std::vector<double> integer_values_;  // phi(0..2N-2); empty for Haar
    std::vector<double> t0_, t1_;         // Daubechies-Lagarias transition matrices
};

inline WaveletBasis make_basis(Family family, int vanishing_moments, int eval_depth = 30) {
    return WaveletBasis(build_filter_bank(family, vanishing_moments), eval_depth);
}

}  // namespace wtar::wavelets
