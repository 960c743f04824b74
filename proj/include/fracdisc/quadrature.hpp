#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fracdisc/errors.hpp"
#include "fracdisc/special.hpp"

namespace fracdisc {

struct QuadRule {
    std::vector<double> nodes;     // in (-1, 1), ascending
    std::vector<double> weights;   // for the weight (1-x)^a (1+x)^b
};

namespace detail {

// Implicit QL with shifts on a symmetric tridiagonal matrix. d is the
// diagonal, e the subdiagonal (e[n-1] spare). z starts as e_0 and is rotated
// along, so on return z[i] is the first component of the i-th eigenvector.
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) throw ConvergenceError("gauss_jacobi: QL iteration stalled");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double bb = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * bb;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - bb;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

// Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b, a, b > -1.
// Golub-Welsch: nodes are eigenvalues of the Jacobi recurrence matrix, weights
// come from the first eigenvector components.
inline QuadRule gauss_jacobi(int n, double a, double b = 0.0) {
    if (n < 1 || n > 1024) throw ValidationError("gauss_jacobi: node count out of range");
    if (!(a > -1.0) || !(b > -1.0)) throw ValidationError("gauss_jacobi: exponents must be > -1");

    std::vector<double> d(n), e(n, 0.0), z(n, 0.0);
    z[0] = 1.0;

    const double ab = a + b;
    d[0] = (b - a) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double t = 2.0 * k + ab;
        d[k] = (b * b - a * a) / (t * (t + 2.0));
    }
    // e[k-1] = sqrt(beta_k); beta_1 written with the (1+a+b) factor cancelled
    if (n > 1) {
        e[0] = std::sqrt(4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0)));
        for (int k = 2; k < n; ++k) {
            const double t = 2.0 * k + ab;
            e[k - 1] = std::sqrt(4.0 * k * (k + a) * (k + b) * (k + ab) /
                                 (t * t * (t + 1.0) * (t - 1.0)));
        }
    }

    const double mu0 =
        std::pow(2.0, ab + 1.0) * gamma_fn(a + 1.0) * gamma_fn(b + 1.0) / gamma_fn(ab + 2.0);

    detail::ql_implicit(d, e, z);

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });

    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = d[idx[i]];
        rule.weights[i] = mu0 * z[idx[i]] * z[idx[i]];
    }
    return rule;
}

} // namespace fracdisc
