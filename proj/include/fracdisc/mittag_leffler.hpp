#pragma once

#include <cmath>
#include <complex>

#include "fracdisc/errors.hpp"
#include "fracdisc/linalg.hpp"
#include "fracdisc/matrix.hpp"
#include "fracdisc/special.hpp"

namespace fracdisc {

// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta). Validation oracle:
// plain series with a relative tail cutoff, no asymptotic machinery.
inline Complex mittag_leffler(double alpha, double beta, Complex z) {
    if (!(alpha > 0.0)) throw ValidationError("mittag_leffler: alpha must be positive");
    constexpr int term_cap = 10000;
    Complex sum(0.0, 0.0);
    Complex zk(1.0, 0.0);
    for (int k = 0; k < term_cap; ++k) {
        const Complex term = zk * reciprocal_gamma(alpha * k + beta);
        sum += term;
        if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
            throw ConvergenceError("mittag_leffler: series overflow");
        if (std::abs(term) < 1e-16 * std::abs(sum)) return sum;
        zk *= z;
    }
    throw ConvergenceError("mittag_leffler: term cap reached before tail criterion");
}

inline Complex mittag_leffler(double alpha, double beta, double z) {
    return mittag_leffler(alpha, beta, Complex(z, 0.0));
}

// E_alpha(A tau^alpha) through the eigendecomposition.
inline Matrix mittag_leffler_matrix(double alpha, const Matrix& a, double tau) {
    if (tau < 0.0) throw ValidationError("mittag_leffler_matrix: tau must be nonnegative");
    const EigenDecomposition ed = eig_decompose(a);
    const std::size_t n = a.rows();
    const double talpha = std::pow(tau, alpha);
    Matrix scaled(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex value = mittag_leffler(alpha, 1.0, ed.values[j] * talpha);
        for (std::size_t i = 0; i < n; ++i) scaled(i, j) = ed.vectors(i, j) * value;
    }
    return scaled * mat_inverse(ed.vectors);
}

} // namespace fracdisc
