#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fracdisc/errors.hpp"
#include "fracdisc/linalg.hpp"
#include "fracdisc/matrix.hpp"
#include "fracdisc/problem.hpp"
#include "fracdisc/special.hpp"

namespace fracdisc {

// Grunwald-Letnikov weights c_i = (-1)^i C(alpha, i), computed once per
// (alpha, kmax) and kept in the value.
struct GLCoefficients {
    double alpha = 0.0;
    std::vector<double> values;   // c_0 .. c_kmax
};

inline GLCoefficients gl_coefficients(double alpha, std::size_t kmax) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw ValidationError("gl_coefficients: alpha must lie in (0, 1]");
    GLCoefficients c;
    c.alpha = alpha;
    c.values.resize(kmax + 1);
    c.values[0] = 1.0;
    // stable ratio recursion c_i = c_{i-1} (1 - (alpha+1)/i)
    for (std::size_t i = 1; i <= kmax; ++i)
        c.values[i] = c.values[i - 1] * (1.0 - (alpha + 1.0) / static_cast<double>(i));
    return c;
}

// Uniform-step transition matrices Phi(0..kmax) with Phi(0) = E and
//   Phi(k+1) = (A d^alpha + alpha E) Phi(k) - sum_{i=2}^{k+1} c_i Phi(k+1-i).
struct TransitionSequence {
    double alpha = 0.0;
    double delta = 0.0;
    std::vector<Matrix> phi;
};

namespace detail {

inline Matrix gl_step_matrix(const Matrix& a, double alpha, double delta) {
    return a * std::pow(delta, alpha) + alpha * Matrix::identity(a.rows());
}

} // namespace detail

// One explicit step of the state recursion; history holds x(0..k), the return
// value is x(k+1). For k = 0 the history sum is empty and the step reduces to
// x(1) = (A d^alpha + alpha E) x(0).
inline CVector gl_state_step(const Matrix& a, double alpha, double delta,
                             const std::vector<CVector>& history) {
    if (!a.is_square()) throw DimensionMismatch("gl_state_step: A must be square");
    if (history.empty()) throw ValidationError("gl_state_step: history must be nonempty");
    if (!(delta > 0.0)) throw ValidationError("gl_state_step: delta must be positive");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw ValidationError("gl_state_step: alpha must lie in (0, 1]");
    for (const auto& x : history)
        if (x.size() != a.rows()) throw DimensionMismatch("gl_state_step: state size mismatch");

    const std::size_t k = history.size() - 1;
    const GLCoefficients c = gl_coefficients(alpha, k + 1);
    CVector next = detail::gl_step_matrix(a, alpha, delta) * history[k];
    for (std::size_t i = 2; i <= k + 1; ++i) {
        const Complex ci(c.values[i], 0.0);
        const CVector& past = history[k + 1 - i];
        for (std::size_t j = 0; j < next.size(); ++j) next[j] -= ci * past[j];
    }
    return next;
}

inline TransitionSequence gl_transition_sequence(const Matrix& a, double alpha, double delta,
                                                 std::size_t kmax) {
    if (!a.is_square()) throw DimensionMismatch("gl_transition_sequence: A must be square");
    if (!(delta > 0.0)) throw ValidationError("gl_transition_sequence: delta must be positive");
    const GLCoefficients c = gl_coefficients(alpha, kmax);
    TransitionSequence seq;
    seq.alpha = alpha;
    seq.delta = delta;
    seq.phi.reserve(kmax + 1);
    seq.phi.push_back(Matrix::identity(a.rows()));
    const Matrix step = detail::gl_step_matrix(a, alpha, delta);
    for (std::size_t k = 0; k < kmax; ++k) {
        Matrix next = step * seq.phi[k];
        for (std::size_t i = 2; i <= k + 1; ++i)
            next -= Complex(c.values[i], 0.0) * seq.phi[k + 1 - i];
        seq.phi.push_back(std::move(next));
    }
    return seq;
}

// Phi(k, m) = Phi(k) Phi(m)^{-1}; the pairwise transition x(k) = Phi(k,m) x(m).
inline Matrix gl_pair_transition(const TransitionSequence& seq, std::size_t k, std::size_t m) {
    if (k >= seq.phi.size() || m >= seq.phi.size())
        throw ValidationError("gl_pair_transition: index outside the sequence");
    if (k == m) return Matrix::identity(seq.phi[k].rows());
    return right_divide(seq.phi[k], seq.phi[m]);
}

// Trajectory of the state recursion over a uniform grid; forcing is out of
// scope for the GL path.
inline Trajectory gl_trajectory(const ProblemSpec& problem) {
    problem.validate();
    if (problem.forcing)
        throw ValidationError("gl_trajectory: forcing is not supported by the GL recursion");
    const double alpha = problem.order.alpha();
    if (!(alpha > 0.0) || alpha > 1.0)
        throw ValidationError("gl_trajectory: alpha must lie in (0, 1]");

    Trajectory traj;
    traj.times = problem.grid;
    traj.states.push_back(problem.x0);
    if (problem.intervals() == 0) return traj;

    const double delta = problem.uniform_step();
    std::vector<CVector> history{to_complex_state(problem.x0)};
    const GLCoefficients c = gl_coefficients(alpha, problem.intervals());
    const Matrix step = detail::gl_step_matrix(problem.A, alpha, delta);
    for (std::size_t k = 0; k < problem.intervals(); ++k) {
        CVector next = step * history[k];
        for (std::size_t i = 2; i <= k + 1; ++i) {
            const Complex ci(c.values[i], 0.0);
            const CVector& past = history[k + 1 - i];
            for (std::size_t j = 0; j < next.size(); ++j) next[j] -= ci * past[j];
        }
        history.push_back(next);
        traj.states.push_back(to_real_state(next));
    }
    return traj;
}

} // namespace fracdisc
