#pragma once

#include "fracdisc/errors.hpp"
#include "fracdisc/rational.hpp"

namespace fracdisc {

// Odd-rational differentiation order alpha = (2p+1)/(2q+1).
struct FracOrder {
    int p = 0;
    int q = 0;

    FracOrder() = default;
    FracOrder(int p_, int q_) : p(p_), q(q_) {
        if (p < 0 || q < 0 || p > 4 || q > 4)
            throw ValidationError("FracOrder: p and q must lie in [0, 4]");
    }

    int num() const { return 2 * p + 1; }
    int den() const { return 2 * q + 1; }
    double alpha() const { return static_cast<double>(num()) / den(); }
    Rational alpha_rational() const { return Rational(num(), den()); }
};

} // namespace fracdisc
