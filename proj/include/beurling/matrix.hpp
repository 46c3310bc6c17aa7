#pragma once

// Dense complex linear algebra used as the concrete carrier for operators on
// l2(G) and its tensor powers.  Everything here is self-contained: cyclic
// Jacobi for Hermitian spectra, one-sided (Hestenes) Jacobi for singular
// values, partial-pivot LU for square solves.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "beurling/error.hpp"

namespace beurling {

using cplx = std::complex<double>;

/// Numerical tolerance policy shared by every module.
///
/// Comparisons against zero are scale aware: a quantity `x` measured against
/// an operand of norm `n` counts as zero when `|x| <= abs_eps * max(1, n)`.
struct Tolerance {
    double abs_eps = 1e-10;
    double rel_eps = 1e-9;

    void validate() const {
        if (!std::isfinite(abs_eps) || !std::isfinite(rel_eps) || abs_eps < 0.0 || rel_eps < 0.0)
            throw InvalidArgument("tolerance must be finite and nonnegative");
    }

    double zero_threshold(double operand_norm) const {
        return abs_eps * std::max(1.0, operand_norm);
    }
};

class CMatrix {
public:
    CMatrix() = default;

    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw InvalidArgument("CMatrix: entry count does not match shape");
    }

    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw InvalidArgument("CMatrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMatrix diagonal(const std::vector<cplx>& d) {
        CMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static CMatrix diagonal(const std::vector<double>& d) {
        CMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const noexcept { return data_; }

    CMatrix adjoint() const {
        CMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    CMatrix transpose() const {
        CMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    /// Induced infinity norm (max absolute row sum); bounds the operator norm
    /// of a Hermitian matrix from above.
    double row_sum_norm() const {
        double best = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(),
                           [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
    }

    CMatrix& operator+=(const CMatrix& o) {
        require_same_shape(o, "+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    CMatrix& operator-=(const CMatrix& o) {
        require_same_shape(o, "-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    CMatrix& operator*=(cplx s) {
        for (auto& z : data_) z *= s;
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
    friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        if (a.cols_ != b.rows_) throw InvalidArgument("CMatrix: inner dimensions differ");
        CMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            cplx* out = &r.data_[i * b.cols_];
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0)) continue;
                const cplx* brow = &b.data_[k * b.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j) out[j] += aik * brow[j];
            }
        }
        return r;
    }

    std::vector<cplx> apply(const std::vector<cplx>& x) const {
        if (x.size() != cols_) throw InvalidArgument("CMatrix: vector length differs");
        std::vector<cplx> y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

private:
    void require_same_shape(const CMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw InvalidArgument(std::string("CMatrix: shape mismatch in ") + op);
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

inline double distance(const CMatrix& a, const CMatrix& b) { return (a - b).frobenius_norm(); }

/// Kronecker product with ((i,k),(j,l)) -> A[i][j] * B[k][l]; the first
/// factor is the outer (slow) index.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

/// Partial trace style slice of a two-leg operator against the vector state
/// <. xi, eta> on the first leg: returns the block sum_{r,r'} conj(eta_r) xi_r' X[(r,.),(r',.)].
inline CMatrix slice_first_leg(const CMatrix& x, std::size_t first_dim, const std::vector<cplx>& xi,
                               const std::vector<cplx>& eta) {
    if (!x.square() || x.rows() % first_dim != 0 || xi.size() != first_dim || eta.size() != first_dim)
        throw InvalidArgument("slice_first_leg: shape mismatch");
    const std::size_t second = x.rows() / first_dim;
    CMatrix r(second, second);
    for (std::size_t a = 0; a < first_dim; ++a) {
        if (eta[a] == cplx(0.0)) continue;
        for (std::size_t b = 0; b < first_dim; ++b) {
            const cplx w = std::conj(eta[a]) * xi[b];
            if (w == cplx(0.0)) continue;
            for (std::size_t t = 0; t < second; ++t)
                for (std::size_t u = 0; u < second; ++u) r(t, u) += w * x(a * second + t, b * second + u);
        }
    }
    return r;
}

/// Swap the two tensor legs of an operator on C^n (x) C^n.
inline CMatrix flip_legs(const CMatrix& x, std::size_t n) {
    if (!x.square() || x.rows() != n * n) throw InvalidArgument("flip_legs: not an operator on C^n (x) C^n");
    CMatrix r(x.rows(), x.cols());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d) r(b * n + a, d * n + c) = x(a * n + b, c * n + d);
    return r;
}

struct EigenSystem {
    std::vector<double> values;  ///< descending
    CMatrix vectors;             ///< columns are orthonormal eigenvectors
};

namespace detail {

inline void require_hermitian(const CMatrix& m, const Tolerance& tol, const char* who) {
    if (!m.square()) throw InvalidArgument(std::string(who) + ": matrix is not square");
    const double asym = distance(m, m.adjoint());
    if (asym > tol.rel_eps * std::max(1.0, m.frobenius_norm())) {
        std::ostringstream os;
        os << who << ": Hermiticity violated, ||M - M*|| = " << asym;
        throw VerificationError(os.str(), asym);
    }
}

}  // namespace detail

/// Eigendecomposition by cyclic Jacobi rotations.  Slower than hermitian_eig
/// but independent of it; kept as a cross-check.
inline EigenSystem hermitian_eig_jacobi(const CMatrix& m, const Tolerance& tol = {}) {
    detail::require_hermitian(m, tol, "hermitian_eig_jacobi");
    const std::size_t n = m.rows();
    CMatrix a = (m + m.adjoint()) * cplx(0.5);
    CMatrix v = CMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

    const double scale = std::max(a.frobenius_norm(), std::numeric_limits<double>::min());
    const double eps = std::numeric_limits<double>::epsilon();

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(2.0 * off) <= eps * scale) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double g = std::abs(apq);
                if (g <= 0.25 * eps * scale / static_cast<double>(n)) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const cplx phase = apq / g;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * g);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx sp = s * std::conj(phase);  // s e^{-i phi}
                const cplx spc = s * phase;            // s e^{+i phi}

                // A <- A V (columns p, q)
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp - sp * akq;
                    a(k, q) = s * akp + c * std::conj(phase) * akq;
                }
                // A <- V* A (rows p, q)
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk - spc * aqk;
                    a(q, k) = s * apk + c * phase * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp - sp * vkq;
                    v(k, q) = s * vkp + c * std::conj(phase) * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
    EigenSystem out{std::vector<double>(n), CMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

namespace detail {

/// Implicit QL on a real symmetric tridiagonal matrix (diagonal d,
/// off-diagonal e with e[i] coupling i and i+1).  Rotations are applied to
/// the columns of the row-major n x n matrix z.  Couplings below eps times
/// the matrix norm deflate, so clusters of eigenvalues near zero converge.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    double anorm = 0.0;
    for (int i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * std::max(dd, anorm)) break;
            }
            if (m == l) break;
            if (++iter > 60) throw VerificationError("hermitian_eig: QL iteration did not converge", std::abs(e[l]));
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            int i = m - 1;
            for (; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
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
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for (int k = 0; k < n; ++k) {
                    double* row = &z[static_cast<std::size_t>(k) * n];
                    f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if (r == 0.0 && i >= l) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix: Householder reduction to
/// tridiagonal form, a diagonal phase making the off-diagonal real, then
/// implicit QL.  The input is symmetrized first; eigenvalues are descending.
inline EigenSystem hermitian_eig(const CMatrix& m, const Tolerance& tol = {}) {
    detail::require_hermitian(m, tol, "hermitian_eig");
    const std::size_t n = m.rows();
    CMatrix a = (m + m.adjoint()) * cplx(0.5);
    CMatrix q = CMatrix::identity(n);
    std::vector<cplx> v(n), p(n), w(n);

    // A <- P A P with P = I - beta v v*, v supported on k+1..n-1.  The
    // column is scaled by its largest entry so that beta cannot overflow;
    // columns below eps^2 ||A|| are treated as already reduced.
    const double negligible = std::numeric_limits<double>::epsilon() * std::numeric_limits<double>::epsilon() *
                              a.frobenius_norm();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double colmax = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) colmax = std::max(colmax, std::abs(a(i, k)));
        if (colmax <= negligible) {
            for (std::size_t i = k + 1; i < n; ++i) a(i, k) = a(k, i) = 0.0;
            continue;
        }
        double alpha = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) alpha += std::norm(a(i, k) / colmax);
        alpha = std::sqrt(alpha);
        const cplx x0 = a(k + 1, k) / colmax;
        const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
        double vv = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = a(i, k) / colmax;
            if (i == k + 1) v[i] += phase * alpha;
            vv += std::norm(v[i]);
        }
        alpha *= colmax;
        const double beta = 2.0 / vv;
        // p = beta B v on the trailing block, then w = p - (beta/2)(v* p) v.
        cplx vp = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            cplx acc = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) acc += a(i, j) * v[j];
            p[i] = beta * acc;
            vp += std::conj(v[i]) * p[i];
        }
        const cplx kk = 0.5 * beta * vp;
        for (std::size_t i = k + 1; i < n; ++i) w[i] = p[i] - kk * v[i];
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
        a(k + 1, k) = -phase * alpha;
        a(k, k + 1) = std::conj(a(k + 1, k));
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = a(k, i) = 0.0;
        // Q <- Q P.
        for (std::size_t r = 0; r < n; ++r) {
            cplx acc = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) acc += q(r, j) * v[j];
            acc *= beta;
            for (std::size_t j = k + 1; j < n; ++j) q(r, j) -= acc * std::conj(v[j]);
        }
    }

    // T = D T_real D* with D = diag(delta), delta_{i+1} = delta_i e_i / |e_i|.
    std::vector<double> d(n), e(n, 0.0);
    std::vector<cplx> delta(n, cplx(1.0));
    for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const cplx ei = a(i + 1, i);
        e[i] = std::abs(ei);
        delta[i + 1] = e[i] > 0.0 ? delta[i] * ei / e[i] : delta[i];
    }
    std::vector<double> z(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
    detail::tridiagonal_ql(d, e, z);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] > d[j]; });
    EigenSystem out{std::vector<double>(n), CMatrix(n, n)};
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t src = order[c];
        out.values[c] = d[src];
        for (std::size_t r = 0; r < n; ++r) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += q(r, j) * delta[j] * z[j * n + src];
            out.vectors(r, c) = acc;
        }
    }
    return out;
}

/// Apply a real function to a Hermitian matrix through its spectrum.
inline CMatrix hermitian_function(const CMatrix& m, const std::function<double(double)>& f,
                                  const Tolerance& tol = {}) {
    const auto eig = hermitian_eig(m, tol);
    const std::size_t n = m.rows();
    CMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double fk = f(eig.values[k]);
        if (fk == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = eig.vectors(i, k) * fk;
            for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * std::conj(eig.vectors(j, k));
        }
    }
    return r;
}

struct Svd {
    CMatrix u;              ///< rows x k, orthonormal columns (completed where singular values vanish)
    std::vector<double> s;  ///< descending, length k = min(rows, cols)
    CMatrix v;              ///< cols x k, orthonormal columns
};

/// Thin singular value decomposition M = U diag(s) V* by one-sided Jacobi.
inline Svd svd(const CMatrix& m) {
    if (m.rows() < m.cols()) {
        Svd t = svd(m.adjoint());
        return Svd{t.v, t.s, t.u};
    }
    const std::size_t rows = m.rows();
    const std::size_t n = m.cols();
    // Column-major working copies.
    std::vector<std::vector<cplx>> a(n, std::vector<cplx>(rows));
    std::vector<std::vector<cplx>> v(n, std::vector<cplx>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < rows; ++i) a[j][i] = m(i, j);
        v[j][j] = 1.0;
    }
    const double eps = std::numeric_limits<double>::epsilon();

    for (int sweep = 0; sweep < 80; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0;
                cplx gamma = 0.0;
                for (std::size_t i = 0; i < rows; ++i) {
                    alpha += std::norm(a[p][i]);
                    beta += std::norm(a[q][i]);
                    gamma += std::conj(a[p][i]) * a[q][i];
                }
                const double g = std::abs(gamma);
                if (alpha == 0.0 || beta == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const cplx phase_c = std::conj(gamma / g);
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < rows; ++i) {
                    const cplx ap = a[p][i];
                    const cplx aq = a[q][i] * phase_c;
                    a[p][i] = c * ap - s * aq;
                    a[q][i] = s * ap + c * aq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vp = v[p][i];
                    const cplx vq = v[q][i] * phase_c;
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (const auto& z : a[j]) s += std::norm(z);
        sv[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sv[i] > sv[j]; });
    const double smax = n ? sv[order[0]] : 0.0;

    Svd out{CMatrix(rows, n), std::vector<double>(n), CMatrix(n, n)};
    std::vector<std::vector<cplx>> ucols;
    ucols.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        out.s[k] = sv[j];
        for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v[j][i];
        std::vector<cplx> col(rows, 0.0);
        if (sv[j] > 64.0 * eps * smax && sv[j] > 0.0)
            for (std::size_t i = 0; i < rows; ++i) col[i] = a[j][i] / sv[j];
        ucols.push_back(std::move(col));
    }
    // Complete U across numerically vanishing singular values (Gram-Schmidt
    // against the canonical basis, run twice for stability).
    std::size_t next_basis = 0;
    for (std::size_t k = 0; k < n; ++k) {
        bool filled = false;
        for (const auto& z : ucols[k])
            if (z != cplx(0.0)) { filled = true; break; }
        while (!filled && next_basis < rows) {
            std::vector<cplx> cand(rows, 0.0);
            cand[next_basis++] = 1.0;
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t l = 0; l < n; ++l) {
                    if (l == k) continue;
                    cplx d = 0.0;
                    for (std::size_t i = 0; i < rows; ++i) d += std::conj(ucols[l][i]) * cand[i];
                    for (std::size_t i = 0; i < rows; ++i) cand[i] -= d * ucols[l][i];
                }
            double nn = 0.0;
            for (const auto& z : cand) nn += std::norm(z);
            nn = std::sqrt(nn);
            if (nn > 1e-6) {
                for (auto& z : cand) z /= nn;
                ucols[k] = std::move(cand);
                filled = true;
            }
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < rows; ++i) out.u(i, k) = ucols[k][i];
    return out;
}

/// Largest singular value, as sqrt of the top eigenvalue of M* M.
inline double op_norm(const CMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    return std::sqrt(std::max(hermitian_eig(m.adjoint() * m).values.front(), 0.0));
}

inline double trace_norm(const CMatrix& m) {
    const auto d = svd(m);
    return std::accumulate(d.s.begin(), d.s.end(), 0.0);
}

inline double smallest_singular_value(const CMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    return svd(m).s.back();
}

struct PsdComparison {
    bool holds = false;
    double margin = 0.0;               ///< smallest eigenvalue of B - A
    std::vector<double> eigenvalues;   ///< full spectrum of B - A, descending
};

/// Loewner order A <= B: holds iff min eig(B - A) >= -abs_eps * max(1, ||B||).
inline PsdComparison psd_leq(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {}) {
    if (!a.square() || !b.square() || a.rows() != b.rows()) throw InvalidArgument("psd_leq: size mismatch");
    const auto eig = hermitian_eig(b - a, tol);
    PsdComparison r;
    r.eigenvalues = eig.values;
    r.margin = eig.values.empty() ? 0.0 : eig.values.back();
    r.holds = r.margin >= -tol.zero_threshold(b.row_sum_norm());
    return r;
}

/// Moore-Penrose pseudoinverse; singular values below rel_eps * s_max count as zero.
inline CMatrix pinv(const CMatrix& m, const Tolerance& tol = {}) {
    const auto d = svd(m);
    CMatrix r(m.cols(), m.rows());
    if (d.s.empty()) return r;
    const double cut = tol.rel_eps * d.s.front();
    for (std::size_t k = 0; k < d.s.size(); ++k) {
        if (d.s[k] <= cut || d.s[k] == 0.0) continue;
        const double inv = 1.0 / d.s[k];
        for (std::size_t i = 0; i < m.cols(); ++i) {
            const cplx vik = d.v(i, k) * inv;
            for (std::size_t j = 0; j < m.rows(); ++j) r(i, j) += vik * std::conj(d.u(j, k));
        }
    }
    return r;
}

struct PolarDecomposition {
    CMatrix unitary;           ///< U, unitary with U * range(P) = V
    CMatrix positive;          ///< P = (M* M)^{1/2}
    CMatrix partial_isometry;  ///< V with M = V P and V*V = range projection of P
};

/// Polar decomposition M = V P with a unitary completion U of V.  The
/// completion pairs the right singular vectors spanning ker(M) with the left
/// singular vectors spanning ran(M)^perp, in index order.
inline PolarDecomposition polar_complete(const CMatrix& m, const Tolerance& tol = {}) {
    if (!m.square()) throw InvalidArgument("polar_complete: matrix is not square");
    const std::size_t n = m.rows();
    const auto d = svd(m);
    const double cut = d.s.empty() ? 0.0 : tol.zero_threshold(d.s.front()) ;
    PolarDecomposition r{CMatrix(n, n), CMatrix(n, n), CMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        const bool in_range = d.s[k] > cut;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const cplx uv = d.u(i, k) * std::conj(d.v(j, k));
                r.unitary(i, j) += uv;
                if (in_range) {
                    r.partial_isometry(i, j) += uv;
                    r.positive(i, j) += d.v(i, k) * d.s[k] * std::conj(d.v(j, k));
                }
            }
    }
    return r;
}

/// Orthogonal projection onto the span of eigenvectors of a PSD matrix whose
/// eigenvalues exceed abs_eps * lambda_max.
inline CMatrix range_projection(const CMatrix& psd, const Tolerance& tol = {}) {
    const auto eig = hermitian_eig(psd, tol);
    const std::size_t n = psd.rows();
    CMatrix p(n, n);
    if (n == 0) return p;
    const double cut = tol.abs_eps * std::max(eig.values.front(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (eig.values[k] <= cut) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p(i, j) += eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return p;
}

/// Solve A X = B by LU with partial pivoting.  Throws on (numerical) singularity.
inline CMatrix solve(const CMatrix& a, const CMatrix& b) {
    if (!a.square() || a.rows() != b.rows()) throw InvalidArgument("solve: shape mismatch");
    const std::size_t n = a.rows();
    CMatrix lu = a;
    CMatrix x = b;
    const double scale = std::max(lu.row_sum_norm(), std::numeric_limits<double>::min());
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(lu(i, col)) > std::abs(lu(piv, col))) piv = i;
        if (std::abs(lu(piv, col)) <= 1e-14 * scale) throw InvalidArgument("solve: matrix is singular");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(piv, j), lu(col, j));
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(piv, j), x(col, j));
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            const cplx f = lu(i, col) / lu(col, col);
            if (f == cplx(0.0)) continue;
            for (std::size_t j = col; j < n; ++j) lu(i, j) -= f * lu(col, j);
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(col, j);
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            cplx s = x(ii, j);
            for (std::size_t k = ii + 1; k < n; ++k) s -= lu(ii, k) * x(k, j);
            x(ii, j) = s / lu(ii, ii);
        }
    }
    return x;
}

inline CMatrix inverse(const CMatrix& a) { return solve(a, CMatrix::identity(a.rows())); }

}  // namespace beurling
