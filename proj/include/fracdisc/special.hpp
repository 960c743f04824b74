#pragma once

#include <cmath>
#include <limits>

#include "fracdisc/errors.hpp"

namespace fracdisc {

// sin(pi*x) with range reduction carried out on x itself, so the argument of
// the final sin is at most pi/2 in magnitude.
inline double sin_pi(double x) {
    const double n = std::nearbyint(x);
    const double r = x - n;
    const double s = std::sin(M_PI * r);
    return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

inline bool near_nonpositive_integer(double x, double tol = 1e-12) {
    const double n = std::nearbyint(x);
    return n <= 0.0 && std::abs(x - n) <= tol;
}

namespace detail {

// ln Gamma(x) for x > 0, rational (Lanczos-type) approximation, g = 671/128.
inline double log_gamma_positive(double x) {
    static const double cof[14] = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   0.339946499848118887e-4, 0.465236289270485756e-4,
        -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
        0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
        -0.261908384015814087e-4, 0.368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (int j = 0; j < 14; ++j) ser += cof[j] / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

} // namespace detail

// Gamma function on the real line; poles at nonpositive integers are rejected.
inline double gamma_fn(double x) {
    if (!std::isfinite(x)) throw ValidationError("gamma_fn: non-finite argument");
    if (near_nonpositive_integer(x))
        throw PoleError("gamma_fn: argument within 1e-12 of a nonpositive integer");
    if (x >= 0.5) return std::exp(detail::log_gamma_positive(x));
    // reflection: Gamma(x) = pi / (sin(pi x) * Gamma(1 - x))
    return M_PI / (sin_pi(x) * std::exp(detail::log_gamma_positive(1.0 - x)));
}

// 1/Gamma(x), extended by zero at the poles (entire function).
inline double reciprocal_gamma(double x) {
    if (near_nonpositive_integer(x)) return 0.0;
    return 1.0 / gamma_fn(x);
}

// Generalized factorial x! = Gamma(x + 1).
inline double gen_factorial(double x) { return gamma_fn(x + 1.0); }

// Binomial coefficient C(alpha, i) = alpha (alpha-1) ... (alpha-i+1) / i!
inline double frac_binomial(double alpha, unsigned i) {
    double p = 1.0;
    for (unsigned j = 1; j <= i; ++j) p *= (alpha - static_cast<double>(j) + 1.0) / j;
    return p;
}

} // namespace fracdisc
