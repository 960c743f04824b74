#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fracdisc/errors.hpp"
#include "fracdisc/frac_order.hpp"
#include "fracdisc/linalg.hpp"
#include "fracdisc/matrix.hpp"
#include "fracdisc/problem.hpp"
#include "fracdisc/quadrature.hpp"
#include "fracdisc/special.hpp"

namespace fracdisc {

// Truncation and quadrature controls for the exact discretizer.
struct SeriesControl {
    int max_terms = 200;
    double tail_tol = 1e-12;
    int quad_nodes = 64;

    void validate() const {
        if (max_terms < 1 || max_terms > 500)
            throw ValidationError("SeriesControl: max_terms must lie in [1, 500]");
        if (!(tail_tol > 0.0) || tail_tol > 1e-3)
            throw ValidationError("SeriesControl: tail_tol must lie in (0, 1e-3]");
        if (quad_nodes < 4 || quad_nodes > 256)
            throw ValidationError("SeriesControl: quad_nodes must lie in [4, 256]");
    }
};

namespace detail {

// gamma_s = (s - 2q)/(2q+1), the t-exponent of the s-th boundary term.
inline double gamma_exponent(const FracOrder& order, int s) {
    return static_cast<double>(s - 2 * order.q) / order.den();
}

// sigma_s = (s + 1)/(2q+1) = gamma_s + 1.
inline double sigma_exponent(const FracOrder& order, int s) {
    return static_cast<double>(s + 1) / order.den();
}

inline void require_interval(double t_lo, double t_hi) {
    if (!(t_lo > 0.0) || !(t_hi > 0.0))
        throw NonPositiveTime("exact discretizer: node times must be positive");
    if (t_hi < t_lo) throw ValidationError("exact discretizer: t_hi must not precede t_lo");
}

} // namespace detail

// Boundary sum M(t) = sum_{s=0}^{2q} A^{s/(2p+1)} t^{gamma_s} / (gamma_s)!
inline Matrix boundary_sum(const Matrix& a, const FracOrder& order, double t) {
    if (!a.is_square()) throw DimensionMismatch("boundary_sum: A must be square");
    if (!(t > 0.0)) throw NonPositiveTime("boundary_sum: t must be positive");
    Matrix m(a.rows(), a.rows());
    for (int s = 0; s <= 2 * order.q; ++s) {
        const double g = detail::gamma_exponent(order, s);
        const double coef = std::pow(t, g) / gen_factorial(g);
        m += coef * mat_frac_power(a, Rational(s, order.num()));
    }
    return m;
}

// Exact stepwise fundamental matrix, integral form:
//   Phi(t_hi, t_lo) = M(t_lo)^{-1} [ M(t_hi)
//       + sum_s A^{(s+2q+1)/(2p+1)} (1/(gamma_s)!) I_s ],
//   I_s = int_{t_lo}^{t_hi} (t_hi - tau)^{gamma_s} exp(B (tau - t_lo)) dtau,
//   B = A^{(2q+1)/(2p+1)}.
// The integrand has an algebraic endpoint singularity (gamma_s in (-1, 0]), so
// I_s is evaluated by Gauss-Jacobi quadrature in the weight (t_hi - tau)^{gamma_s}.
inline Matrix exact_fundamental_quadrature(const Matrix& a, const FracOrder& order, double t_lo,
                                           double t_hi, const SeriesControl& ctrl = {}) {
    if (!a.is_square()) throw DimensionMismatch("exact_fundamental: A must be square");
    ctrl.validate();
    detail::require_interval(t_lo, t_hi);
    if (t_hi == t_lo) return Matrix::identity(a.rows());

    const double delta = t_hi - t_lo;
    const Matrix b = mat_frac_power(a, Rational(order.den(), order.num()));
    Matrix acc = boundary_sum(a, order, t_hi);
    for (int s = 0; s <= 2 * order.q; ++s) {
        const double g = detail::gamma_exponent(order, s);
        const QuadRule rule = gauss_jacobi(ctrl.quad_nodes, g);
        // tau = t_lo + delta (1 + xi)/2 maps the rule onto the interval and
        // absorbs the weight: I_s = (delta/2)^{g+1} sum_j w_j exp(B delta (1+xi_j)/2)
        Matrix integral(a.rows(), a.rows());
        for (int j = 0; j < ctrl.quad_nodes; ++j) {
            const double u = 0.5 * delta * (1.0 + rule.nodes[j]);
            integral += rule.weights[j] * mat_exp(b * u);
        }
        const double coef = std::pow(0.5 * delta, g + 1.0) / gen_factorial(g);
        acc += coef * (mat_frac_power(a, Rational(s + order.den(), order.num())) * integral);
    }
    return LUDecomposition(boundary_sum(a, order, t_lo)).solve(acc);
}

// Same object with the integral expanded termwise:
//   Phi(t_hi, t_lo) = M(t_lo)^{-1} [ M(t_hi)
//       + sum_s sum_k A^{(s+(k+1)(2q+1))/(2p+1)} delta^{k+sigma_s} / Gamma(k+1+sigma_s) ].
inline Matrix exact_fundamental_series(const Matrix& a, const FracOrder& order, double t_lo,
                                       double t_hi, const SeriesControl& ctrl = {}) {
    if (!a.is_square()) throw DimensionMismatch("exact_fundamental: A must be square");
    ctrl.validate();
    detail::require_interval(t_lo, t_hi);
    if (t_hi == t_lo) return Matrix::identity(a.rows());

    const double delta = t_hi - t_lo;
    const Matrix b = mat_frac_power(a, Rational(order.den(), order.num()));
    Matrix acc = boundary_sum(a, order, t_hi);
    for (int s = 0; s <= 2 * order.q; ++s) {
        const double sigma = detail::sigma_exponent(order, s);
        const Matrix cs = mat_frac_power(a, Rational(s + order.den(), order.num()));
        Matrix bk = Matrix::identity(a.rows());
        int small_run = 0;
        bool converged = false;
        for (int k = 0; k < ctrl.max_terms; ++k) {
            const Matrix term =
                (std::pow(delta, k + sigma) * reciprocal_gamma(k + 1.0 + sigma)) * (cs * bk);
            acc += term;
            if (!acc.is_finite())
                throw ConvergenceError("exact_fundamental_series: series overflow");
            small_run = term.frobenius_norm() < ctrl.tail_tol * acc.frobenius_norm()
                            ? small_run + 1
                            : 0;
            if (small_run >= 2) {
                converged = true;
                break;
            }
            bk = bk * b;
        }
        if (!converged)
            throw ConvergenceError(
                "exact_fundamental_series: max_terms reached before tail criterion");
    }
    return LUDecomposition(boundary_sum(a, order, t_lo)).solve(acc);
}

// Forced increment g for a forcing value f held constant on [t_lo, t_hi):
//   g = M(t_lo)^{-1} sum_s A^{s/(2p+1)} [ D_s + E (t_hi^{sigma_s} - t_lo^{sigma_s})/(sigma_s)! ] f,
//   D_s = sum_k (-1)^k A^{(s+(k+1)(2q+1))/(2p+1)} / ((gamma_s)! k! (k+sigma_s))
//         sum_l A^{l(2q+1)/(2p+1)}/l! * delta^{l+k+1+sigma_s}/(l+k+1+sigma_s).
// Linear in f by construction.
inline CVector forced_increment(const Matrix& a, const FracOrder& order, double t_lo, double t_hi,
                                const std::vector<double>& f, const SeriesControl& ctrl = {}) {
    if (!a.is_square()) throw DimensionMismatch("forced_increment: A must be square");
    if (f.size() != a.rows()) throw DimensionMismatch("forced_increment: f size mismatch");
    ctrl.validate();
    detail::require_interval(t_lo, t_hi);
    if (t_hi == t_lo) return CVector(f.size(), Complex(0.0, 0.0));

    const double delta = t_hi - t_lo;
    const std::size_t n = a.rows();
    const Matrix b = mat_frac_power(a, Rational(order.den(), order.num()));
    Matrix total(n, n);
    for (int s = 0; s <= 2 * order.q; ++s) {
        const double g = detail::gamma_exponent(order, s);
        const double sigma = detail::sigma_exponent(order, s);
        const Matrix cs = mat_frac_power(a, Rational(s + order.den(), order.num()));
        const double inv_gfac = 1.0 / gen_factorial(g);

        Matrix ds(n, n);
        Matrix bk = Matrix::identity(n);
        double kfac = 1.0;
        bool outer_done = false;
        for (int k = 0; k < ctrl.max_terms; ++k) {
            // inner series over l at fixed k
            Matrix inner(n, n);
            Matrix bl = Matrix::identity(n);
            double lfac = 1.0;
            bool inner_done = false;
            for (int l = 0; l < ctrl.max_terms; ++l) {
                const double coef =
                    std::pow(delta, l + k + 1 + sigma) / (lfac * (l + k + 1 + sigma));
                const Matrix term = coef * bl;
                inner += term;
                if (term.frobenius_norm() < ctrl.tail_tol * (1.0 + inner.frobenius_norm())) {
                    inner_done = true;
                    break;
                }
                bl = bl * b;
                lfac *= static_cast<double>(l + 1);
            }
            if (!inner_done)
                throw ConvergenceError("forced_increment: inner series did not converge");

            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            const Matrix term = (sign * inv_gfac / (kfac * (k + sigma))) * (cs * bk * inner);
            ds += term;
            if (!ds.is_finite()) throw ConvergenceError("forced_increment: series overflow");
            if (term.frobenius_norm() < ctrl.tail_tol * (1.0 + ds.frobenius_norm())) {
                outer_done = true;
                break;
            }
            bk = bk * b;
            kfac *= static_cast<double>(k + 1);
        }
        if (!outer_done)
            throw ConvergenceError("forced_increment: outer series did not converge");

        const double boundary =
            (std::pow(t_hi, sigma) - std::pow(t_lo, sigma)) / gen_factorial(sigma);
        total += mat_frac_power(a, Rational(s, order.num())) *
                 (ds + boundary * Matrix::identity(n));
    }
    const Matrix gmat = LUDecomposition(boundary_sum(a, order, t_lo)).solve(total);
    return gmat * to_complex_state(f);
}

enum class ExactMethod { quadrature, series };

inline Matrix exact_fundamental(const Matrix& a, const FracOrder& order, double t_lo, double t_hi,
                                const SeriesControl& ctrl, ExactMethod method) {
    return method == ExactMethod::quadrature
               ? exact_fundamental_quadrature(a, order, t_lo, t_hi, ctrl)
               : exact_fundamental_series(a, order, t_lo, t_hi, ctrl);
}

// Stepwise propagation result. The fundamental matrix of a fractional system
// carries memory, so the product of the per-interval transitions need not
// reproduce the one-shot transition over [t0, T]; the discrepancy is reported,
// not asserted away.
struct PropagationResult {
    Trajectory trajectory;
    std::vector<Matrix> transitions;   // Phi(t_{i+1}, t_i) per interval
    std::vector<CVector> increments;   // g(t_i) per interval when forced
    Matrix step_product;
    Matrix one_shot;
    double product_discrepancy_frobenius = 0.0;
};

inline PropagationResult propagate(const ProblemSpec& problem, ExactMethod method,
                                   const SeriesControl& ctrl = {}) {
    problem.validate();
    ctrl.validate();
    const std::size_t n = problem.dimension();

    PropagationResult result;
    result.trajectory.times = problem.grid;
    result.trajectory.states.push_back(problem.x0);
    result.step_product = Matrix::identity(n);

    CVector state = to_complex_state(problem.x0);
    for (std::size_t i = 0; i < problem.intervals(); ++i) {
        const double t_lo = problem.grid[i];
        const double t_hi = problem.grid[i + 1];
        Matrix phi = exact_fundamental(problem.A, problem.order, t_lo, t_hi, ctrl, method);
        state = phi * state;
        if (problem.forcing) {
            const CVector g = forced_increment(problem.A, problem.order, t_lo, t_hi,
                                               problem.forcing->values[i], ctrl);
            state = state + g;
            result.increments.push_back(g);
        }
        result.step_product = phi * result.step_product;
        result.transitions.push_back(std::move(phi));
        result.trajectory.states.push_back(to_real_state(state));
    }

    result.one_shot = problem.intervals() == 0
                          ? Matrix::identity(n)
                          : exact_fundamental(problem.A, problem.order, problem.grid.front(),
                                              problem.grid.back(), ctrl, method);
    result.product_discrepancy_frobenius =
        (result.one_shot - result.step_product).frobenius_norm();
    return result;
}

} // namespace fracdisc
