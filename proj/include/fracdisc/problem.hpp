#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fracdisc/errors.hpp"
#include "fracdisc/frac_order.hpp"
#include "fracdisc/matrix.hpp"

namespace fracdisc {

// One constant forcing vector per grid subinterval [t_i, t_{i+1}).
struct PiecewiseConstantSignal {
    std::vector<std::vector<double>> values;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
};

struct ProblemSpec {
    Matrix A;
    std::vector<double> x0;
    FracOrder order;
    double t0 = 0.0;
    double T = 0.0;
    std::vector<double> grid;   // t0 = grid.front() < ... < grid.back() = T
    std::optional<PiecewiseConstantSignal> forcing;

    std::size_t dimension() const { return x0.size(); }
    std::size_t intervals() const { return grid.empty() ? 0 : grid.size() - 1; }

    static std::vector<double> uniform_grid(double t0, double T, std::size_t steps) {
        std::vector<double> g(steps + 1);
        const double d = steps ? (T - t0) / static_cast<double>(steps) : 0.0;
        for (std::size_t i = 0; i <= steps; ++i) g[i] = t0 + d * static_cast<double>(i);
        g.back() = T;
        return g;
    }

    // Constant step of a uniform grid; NonUniformGrid if the spacing varies.
    double uniform_step() const {
        if (grid.size() < 2) return 0.0;
        const double d = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i)
            if (std::abs(grid[i + 1] - grid[i] - d) > 1e-9 * std::max(1.0, std::abs(d)))
                throw NonUniformGrid("grid spacing is not constant");
        return d;
    }

    void validate() const {
        if (!A.is_square() || A.rows() == 0)
            throw ValidationError("problem: A must be square and nonempty");
        if (!A.is_finite()) throw ValidationError("problem: A has non-finite entries");
        if (x0.size() != A.rows())
            throw ValidationError("problem: x0 length must match the dimension of A");
        for (double v : x0)
            if (!std::isfinite(v)) throw ValidationError("problem: x0 has non-finite entries");
        if (!(t0 > 0.0)) throw ValidationError("problem: t0 must be positive (t0 > 0)");
        if (T < t0) throw ValidationError("problem: T must not precede t0");
        if (grid.empty()) throw ValidationError("problem: empty grid");
        if (std::abs(grid.front() - t0) > 1e-12 * std::max(1.0, std::abs(t0)))
            throw ValidationError("problem: grid must start at t0");
        if (std::abs(grid.back() - T) > 1e-12 * std::max(1.0, std::abs(T)))
            throw ValidationError("problem: grid must end at T");
        for (std::size_t i = 0; i + 1 < grid.size(); ++i)
            if (!(grid[i + 1] > grid[i]))
                throw ValidationError("problem: grid nodes must be strictly increasing");
        if (forcing) {
            if (forcing->values.size() != intervals())
                throw ValidationError("problem: forcing needs one value per grid subinterval");
            for (const auto& f : forcing->values) {
                if (f.size() != x0.size())
                    throw ValidationError("problem: forcing vector length must match x0");
                for (double v : f)
                    if (!std::isfinite(v))
                        throw ValidationError("problem: forcing has non-finite entries");
            }
        }
    }
};

// Real state vector from a complex one; the imaginary residue of a real-valued
// problem must stay below the effectively-real threshold.
inline std::vector<double> to_real_state(const CVector& v) {
    double re = 0.0, im = 0.0;
    for (const auto& x : v) {
        re = std::max(re, std::abs(x.real()));
        im = std::max(im, std::abs(x.imag()));
    }
    if (im > 1e-9 * (1.0 + re))
        throw ValidationError("state vector has a non-negligible imaginary part");
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].real();
    return r;
}

inline CVector to_complex_state(const std::vector<double>& v) {
    CVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Complex(v[i], 0.0);
    return r;
}

} // namespace fracdisc
