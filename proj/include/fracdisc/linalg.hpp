#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "fracdisc/errors.hpp"
#include "fracdisc/matrix.hpp"
#include "fracdisc/rational.hpp"

namespace fracdisc {

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

class LUDecomposition {
public:
    explicit LUDecomposition(const Matrix& a) : lu_(a), perm_(a.rows()) {
        if (!a.is_square()) throw DimensionMismatch("lu: matrix must be square");
        const std::size_t n = a.rows();
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        const double guard = 1e-13 * a.frobenius_norm();
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
            if (std::abs(lu_(p, k)) <= guard)
                throw SingularMatrix("lu: pivot below singularity guard");
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(perm_[k], perm_[p]);
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                lu_(i, k) /= lu_(k, k);
                const Complex f = lu_(i, k);
                for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
            }
        }
    }

    CVector solve(const CVector& b) const {
        const std::size_t n = lu_.rows();
        if (b.size() != n) throw DimensionMismatch("lu solve: size mismatch");
        CVector y(n);
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
            y[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            Complex s = y[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * y[j];
            y[i] = s / lu_(i, i);
        }
        return y;
    }

    Matrix solve(const Matrix& b) const {
        const std::size_t n = lu_.rows();
        if (b.rows() != n) throw DimensionMismatch("lu solve: row mismatch");
        Matrix x(n, b.cols());
        CVector col(n);
        for (std::size_t j = 0; j < b.cols(); ++j) {
            for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
            CVector sol = solve(col);
            for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
        }
        return x;
    }

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

inline Matrix mat_inverse(const Matrix& a) {
    return LUDecomposition(a).solve(Matrix::identity(a.rows()));
}

// X = B * A^{-1}
inline Matrix right_divide(const Matrix& b, const Matrix& a) {
    return b * mat_inverse(a);
}

// ---------------------------------------------------------------------------
// Matrix exponential: Pade(13) with scaling and squaring
// ---------------------------------------------------------------------------

inline Matrix mat_exp(const Matrix& a) {
    if (!a.is_square()) throw DimensionMismatch("mat_exp: matrix must be square");
    static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;
    const std::size_t n = a.rows();
    const Matrix e = Matrix::identity(n);

    int s = 0;
    const double nrm = a.one_norm();
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    Matrix as = a * std::ldexp(1.0, -s);

    const Matrix a2 = as * as;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;
    const Matrix u =
        as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
              b[1] * e);
    const Matrix v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * e;

    Matrix f = LUDecomposition(v - u).solve(v + u);
    for (int i = 0; i < s; ++i) f = f * f;
    return f;
}

// ---------------------------------------------------------------------------
// Eigendecomposition (complex QR iteration, desk scale n <= 8)
// ---------------------------------------------------------------------------

struct EigenDecomposition {
    std::vector<Complex> values;
    Matrix vectors;
    double vectors_condition = 0.0;
};

namespace detail {

struct Givens {
    double c = 1.0;   // real cosine
    Complex s{0.0, 0.0};
};

// G * [a; b] = [r; 0] with G = [[c, s], [-conj(s), c]].
inline Givens make_givens(Complex a, Complex b) {
    Givens g;
    const double ab = std::abs(a), bb = std::abs(b);
    if (bb == 0.0) return g;
    if (ab == 0.0) {
        g.c = 0.0;
        g.s = std::conj(b) / bb;
        return g;
    }
    const double d = std::hypot(ab, bb);
    g.c = ab / d;
    g.s = (a / ab) * std::conj(b) / d;
    return g;
}

inline void rotate_rows(Matrix& m, std::size_t i, std::size_t j, const Givens& g) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
        const Complex vi = m(i, k), vj = m(j, k);
        m(i, k) = g.c * vi + g.s * vj;
        m(j, k) = -std::conj(g.s) * vi + g.c * vj;
    }
}

// Post-multiplication by G^H on columns i, j.
inline void rotate_cols(Matrix& m, std::size_t i, std::size_t j, const Givens& g) {
    for (std::size_t k = 0; k < m.rows(); ++k) {
        const Complex vi = m(k, i), vj = m(k, j);
        m(k, i) = g.c * vi + std::conj(g.s) * vj;
        m(k, j) = -g.s * vi + g.c * vj;
    }
}

// Similarity reduction to upper Hessenberg form; A = Q H Q^H on return.
inline void hessenberg_reduce(Matrix& h, Matrix& q) {
    const std::size_t n = h.rows();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        for (std::size_t i = k + 2; i < n; ++i) {
            if (h(i, k) == Complex(0.0, 0.0)) continue;
            const Givens g = make_givens(h(k + 1, k), h(i, k));
            rotate_rows(h, k + 1, i, g);
            rotate_cols(h, k + 1, i, g);
            rotate_cols(q, k + 1, i, g);
        }
    }
}

// Shifted QR on a Hessenberg matrix; on return h is upper triangular (Schur
// form) and q accumulates the similarity, A = Q T Q^H.
inline void schur_triangularize(Matrix& h, Matrix& q) {
    const std::size_t n = h.rows();
    if (n < 2) return;
    const double eps = std::numeric_limits<double>::epsilon();
    std::size_t hi = n - 1;
    int since_deflation = 0;
    int total = 0;
    const int total_cap = 200 * static_cast<int>(n);
    while (true) {
        // deflate converged trailing eigenvalues
        while (hi > 0) {
            const double scale = std::abs(h(hi - 1, hi - 1)) + std::abs(h(hi, hi));
            if (std::abs(h(hi, hi - 1)) <= eps * (scale > 0.0 ? scale : 1.0)) {
                h(hi, hi - 1) = 0.0;
                --hi;
                since_deflation = 0;
            } else {
                break;
            }
        }
        if (hi == 0) break;
        if (++total > total_cap)
            throw NotDiagonalizable("eig: QR iteration failed to converge");

        // active block [lo..hi]
        std::size_t lo = hi;
        while (lo > 0) {
            const double scale = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (std::abs(h(lo, lo - 1)) <= eps * (scale > 0.0 ? scale : 1.0)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }

        // Wilkinson shift from the trailing 2x2
        Complex mu;
        if (++since_deflation % 16 == 0) {
            mu = h(hi, hi) + std::abs(h(hi, hi - 1));   // exceptional shift
        } else {
            const Complex ta = h(hi - 1, hi - 1), tb = h(hi - 1, hi);
            const Complex tc = h(hi, hi - 1), td = h(hi, hi);
            const Complex tr = ta + td;
            const Complex disc = std::sqrt(tr * tr - 4.0 * (ta * td - tb * tc));
            const Complex m1 = 0.5 * (tr + disc), m2 = 0.5 * (tr - disc);
            mu = (std::abs(m1 - td) < std::abs(m2 - td)) ? m1 : m2;
        }

        for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= mu;
        std::vector<Givens> rots;
        rots.reserve(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) {
            const Givens g = make_givens(h(i, i), h(i + 1, i));
            rotate_rows(h, i, i + 1, g);
            rots.push_back(g);
        }
        for (std::size_t i = lo; i < hi; ++i) {
            rotate_cols(h, i, i + 1, rots[i - lo]);
            rotate_cols(q, i, i + 1, rots[i - lo]);
        }
        for (std::size_t i = lo; i <= hi; ++i) h(i, i) += mu;
    }
}

// Eigenvectors of an upper triangular matrix by back-substitution.
inline Matrix triangular_eigenvectors(const Matrix& t) {
    const std::size_t n = t.rows();
    Matrix y(n, n);
    const double tiny = std::numeric_limits<double>::epsilon() * (1.0 + t.frobenius_norm());
    for (std::size_t j = 0; j < n; ++j) {
        const Complex lambda = t(j, j);
        y(j, j) = 1.0;
        for (std::size_t ii = j; ii-- > 0;) {
            Complex s(0.0, 0.0);
            for (std::size_t k = ii + 1; k <= j; ++k) s += t(ii, k) * y(k, j);
            Complex div = lambda - t(ii, ii);
            if (std::abs(div) < tiny) div = Complex(tiny, 0.0);
            y(ii, j) = s / div;
        }
    }
    return y;
}

inline void normalize_columns(Matrix& v) {
    const std::size_t n = v.rows();
    for (std::size_t j = 0; j < v.cols(); ++j) {
        double nrm = 0.0;
        std::size_t imax = 0;
        double amax = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::abs(v(i, j));
            nrm += a * a;
            if (a > amax) {
                amax = a;
                imax = i;
            }
        }
        nrm = std::sqrt(nrm);
        if (nrm == 0.0 || amax == 0.0) continue;
        // unit length, largest component real positive
        const Complex phase = std::conj(v(imax, j)) / std::abs(v(imax, j));
        const Complex f = phase / nrm;
        for (std::size_t i = 0; i < n; ++i) v(i, j) *= f;
    }
}

inline EigenDecomposition eig_2x2(const Matrix& a) {
    EigenDecomposition ed;
    const Complex ta = a(0, 0), tb = a(0, 1), tc = a(1, 0), td = a(1, 1);
    const Complex tr = ta + td;
    const Complex disc = std::sqrt(tr * tr - 4.0 * (ta * td - tb * tc));
    ed.values = {0.5 * (tr + disc), 0.5 * (tr - disc)};
    ed.vectors = Matrix(2, 2);
    for (std::size_t j = 0; j < 2; ++j) {
        const Complex lambda = ed.values[j];
        // candidate null vectors of (A - lambda I) from either row
        const Complex r1x = tb, r1y = lambda - ta;
        const Complex r2x = lambda - td, r2y = tc;
        const double n1 = std::abs(r1x) + std::abs(r1y);
        const double n2 = std::abs(r2x) + std::abs(r2y);
        if (n1 == 0.0 && n2 == 0.0) {
            ed.vectors(j, j) = 1.0;   // A is lambda*I on this subspace
        } else if (n1 >= n2) {
            ed.vectors(0, j) = r1x;
            ed.vectors(1, j) = r1y;
        } else {
            ed.vectors(0, j) = r2x;
            ed.vectors(1, j) = r2y;
        }
    }
    return ed;
}

} // namespace detail

// Eigenvalues sorted by descending real part, then descending imaginary part;
// eigenvector columns follow the same order.
inline EigenDecomposition eig_decompose(const Matrix& a) {
    if (!a.is_square()) throw DimensionMismatch("eig: matrix must be square");
    const std::size_t n = a.rows();
    if (n == 0 || n > 8) throw DimensionMismatch("eig: supported sizes are 1..8");
    if (!a.is_finite()) throw ValidationError("eig: non-finite entries");

    EigenDecomposition ed;
    if (n == 1) {
        ed.values = {a(0, 0)};
        ed.vectors = Matrix::identity(1);
    } else if (n == 2) {
        ed = detail::eig_2x2(a);
    } else {
        Matrix h = a;
        Matrix q = Matrix::identity(n);
        detail::hessenberg_reduce(h, q);
        detail::schur_triangularize(h, q);
        ed.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) ed.values[i] = h(i, i);
        ed.vectors = q * detail::triangular_eigenvectors(h);
    }

    // deterministic ordering
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        if (ed.values[i].real() != ed.values[j].real())
            return ed.values[i].real() > ed.values[j].real();
        return ed.values[i].imag() > ed.values[j].imag();
    });
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = ed.values[idx[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = ed.vectors(i, idx[j]);
    }
    detail::normalize_columns(out.vectors);

    Matrix vinv;
    try {
        vinv = mat_inverse(out.vectors);
    } catch (const SingularMatrix&) {
        throw NotDiagonalizable("eig: eigenvector matrix is singular");
    }
    out.vectors_condition = out.vectors.frobenius_norm() * vinv.frobenius_norm();

    Matrix recon(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) recon(i, j) = out.vectors(i, j) * out.values[j];
    recon = recon * vinv;
    const double resid = (recon - a).frobenius_norm();
    if (resid > 1e-9 * (1.0 + a.frobenius_norm()))
        throw NotDiagonalizable("eig: reconstruction residual above tolerance");
    return out;
}

// ---------------------------------------------------------------------------
// Principal fractional matrix power
// ---------------------------------------------------------------------------

namespace detail {

inline Matrix integer_power(const Matrix& a, std::int64_t k) {
    const std::size_t n = a.rows();
    if (k == 0) return Matrix::identity(n);
    Matrix base = k < 0 ? mat_inverse(a) : a;
    std::uint64_t e = static_cast<std::uint64_t>(k < 0 ? -k : k);
    Matrix result = Matrix::identity(n);
    while (e > 0) {
        if (e & 1u) result = result * base;
        base = base * base;
        e >>= 1u;
    }
    return result;
}

} // namespace detail

// A^r. Integer exponents use repeated multiplication (A^0 = E even for
// singular A); fractional exponents use the principal branch through the
// eigendecomposition. A zero eigenvalue is admissible for r > 0 (0^r = 0 by
// continuity); otherwise eigenvalues within 1e-12 of the closed negative real
// axis are rejected.
inline Matrix mat_frac_power(const Matrix& a, const Rational& r) {
    if (!a.is_square()) throw DimensionMismatch("mat_frac_power: matrix must be square");
    if (r.is_integer()) return detail::integer_power(a, r.num());

    const EigenDecomposition ed = eig_decompose(a);
    const std::size_t n = a.rows();
    const double rv = r.value();
    double lmax = 0.0;
    for (const auto& lambda : ed.values) lmax = std::max(lmax, std::abs(lambda));
    const double ztol = 1e-12 * (1.0 + lmax);

    std::vector<Complex> powered(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex lambda = ed.values[j];
        if (std::abs(lambda) <= ztol) {
            if (rv > 0.0) {
                powered[j] = 0.0;
                continue;
            }
            throw BranchCutError("mat_frac_power: nonpositive power of a zero eigenvalue");
        }
        if (lambda.real() < 0.0 && std::abs(lambda.imag()) <= 1e-12 * (1.0 + std::abs(lambda)))
            throw BranchCutError(
                "mat_frac_power: eigenvalue on the negative real axis, principal branch undefined");
        powered[j] = std::pow(lambda, Complex(rv, 0.0));
    }

    Matrix scaled(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scaled(i, j) = ed.vectors(i, j) * powered[j];
    return scaled * mat_inverse(ed.vectors);
}

} // namespace fracdisc
