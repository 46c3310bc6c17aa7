#pragma once

// The group von Neumann algebra VN(G) of a finite group and its tensor powers,
// stored on the Fourier side: x = sum_g c_g lambda(g).  An element with k legs
// lives in VN(G^k) = VN(G)^{(x) k}; its coefficient index is mixed radix over
// the legs with leg 0 slowest, which matches kron(A, B) on the matrix side.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "beurling/error.hpp"
#include "beurling/group.hpp"
#include "beurling/matrix.hpp"
#include "beurling/random.hpp"

namespace beurling {

namespace detail {

inline std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

/// Index arithmetic on G^k.
class LegIndexer {
public:
    LegIndexer(const FiniteGroup& g, std::size_t legs) : g_(&g), n_(g.order()), legs_(legs), dim_(ipow(n_, legs)) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t legs() const noexcept { return legs_; }

    std::size_t digit(std::size_t idx, std::size_t leg) const { return idx / ipow(n_, legs_ - 1 - leg) % n_; }

    std::size_t mul(std::size_t a, std::size_t b) const {
        std::size_t r = 0, stride = 1;
        for (std::size_t l = 0; l < legs_; ++l, stride *= n_) {
            r += g_->mul(a % n_, b % n_) * stride;
            a /= n_;
            b /= n_;
        }
        return r;
    }

    std::size_t inv(std::size_t a) const {
        std::size_t r = 0, stride = 1;
        for (std::size_t l = 0; l < legs_; ++l, stride *= n_) {
            r += g_->inv(a % n_) * stride;
            a /= n_;
        }
        return r;
    }

private:
    const FiniteGroup* g_;
    std::size_t n_;
    std::size_t legs_;
    std::size_t dim_;
};

inline void require_same_group(const GroupPtr& a, const GroupPtr& b, const char* who) {
    if (a == b) return;
    if (!a || !b || !a->same_as(*b)) throw InvalidArgument(std::string(who) + ": group mismatch");
}

}  // namespace detail

/// Element of VN(G^k), k = legs(), as coefficients over G^k.
class AlgElement {
public:
    AlgElement() = default;

    AlgElement(GroupPtr g, std::vector<cplx> coeffs, std::size_t legs = 1)
        : group_(std::move(g)), legs_(legs), coeffs_(std::move(coeffs)) {
        if (!group_) throw InvalidArgument("AlgElement: null group");
        if (legs_ == 0) throw InvalidArgument("AlgElement: at least one leg required");
        if (coeffs_.size() != detail::ipow(group_->order(), legs_))
            throw InvalidArgument("AlgElement: coefficient length does not match |G|^legs");
    }

    static AlgElement zero(const GroupPtr& g, std::size_t legs = 1) {
        return AlgElement(g, std::vector<cplx>(detail::ipow(g->order(), legs)), legs);
    }

    static AlgElement identity(const GroupPtr& g, std::size_t legs = 1) {
        auto x = zero(g, legs);
        x.coeffs_[0] = 1.0;
        return x;
    }

    /// lambda(s).
    static AlgElement lambda(const GroupPtr& g, std::size_t s) {
        if (s >= g->order()) throw InvalidArgument("AlgElement::lambda: element out of range");
        auto x = zero(g, 1);
        x.coeffs_[s] = 1.0;
        return x;
    }

    /// P_H = (1/|H|) sum_{h in H} lambda(h).
    static AlgElement subgroup_projection(const Subgroup& h) {
        auto x = zero(h.parent(), 1);
        for (auto e : h.elements()) x.coeffs_[e] = 1.0 / static_cast<double>(h.size());
        return x;
    }

    const GroupPtr& group() const noexcept { return group_; }
    std::size_t legs() const noexcept { return legs_; }
    std::size_t dim() const noexcept { return coeffs_.size(); }
    const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    std::vector<cplx>& coeffs() noexcept { return coeffs_; }
    const cplx& operator[](std::size_t i) const { return coeffs_[i]; }
    cplx& operator[](std::size_t i) { return coeffs_[i]; }

    detail::LegIndexer indexer() const { return detail::LegIndexer(*group_, legs_); }

    /// Coefficient l2 norm, equal to h(x* x)^{1/2}.
    double norm() const {
        double s = 0.0;
        for (const auto& z : coeffs_) s += std::norm(z);
        return std::sqrt(s);
    }

    AlgElement adjoint() const {
        const auto ix = indexer();
        AlgElement r = zero(group_, legs_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[ix.inv(i)] = std::conj(coeffs_[i]);
        return r;
    }

    AlgElement& operator+=(const AlgElement& o) {
        require_compatible(o, "+");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    AlgElement& operator-=(const AlgElement& o) {
        require_compatible(o, "-");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    AlgElement& operator*=(cplx s) {
        for (auto& z : coeffs_) z *= s;
        return *this;
    }

    friend AlgElement operator+(AlgElement a, const AlgElement& b) { return a += b; }
    friend AlgElement operator-(AlgElement a, const AlgElement& b) { return a -= b; }
    friend AlgElement operator*(AlgElement a, cplx s) { return a *= s; }
    friend AlgElement operator*(cplx s, AlgElement a) { return a *= s; }

    /// Operator product: legwise convolution of coefficients.
    friend AlgElement operator*(const AlgElement& a, const AlgElement& b) {
        a.require_compatible(b, "*");
        const auto ix = a.indexer();
        AlgElement r = zero(a.group_, a.legs_);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            const cplx ai = a.coeffs_[i];
            if (ai == cplx(0.0)) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                const cplx bj = b.coeffs_[j];
                if (bj == cplx(0.0)) continue;
                r.coeffs_[ix.mul(i, j)] += ai * bj;
            }
        }
        return r;
    }

    void require_compatible(const AlgElement& o, const char* who) const {
        detail::require_same_group(group_, o.group_, who);
        if (legs_ != o.legs_) throw InvalidArgument(std::string(who) + ": leg count mismatch");
    }

private:
    GroupPtr group_;
    std::size_t legs_ = 1;
    std::vector<cplx> coeffs_;
};

inline double distance(const AlgElement& a, const AlgElement& b) { return (a - b).norm(); }

/// Element of A(G): a function on G.
class AFunction {
public:
    AFunction() = default;
    AFunction(GroupPtr g, std::vector<cplx> values) : group_(std::move(g)), values_(std::move(values)) {
        if (!group_) throw InvalidArgument("AFunction: null group");
        if (values_.size() != group_->order()) throw InvalidArgument("AFunction: length does not match |G|");
    }

    static AFunction zero(const GroupPtr& g) { return AFunction(g, std::vector<cplx>(g->order())); }
    static AFunction constant(const GroupPtr& g, cplx c) { return AFunction(g, std::vector<cplx>(g->order(), c)); }
    static AFunction indicator(const GroupPtr& g, std::size_t s) {
        auto f = zero(g);
        f.values_.at(s) = 1.0;
        return f;
    }

    const GroupPtr& group() const noexcept { return group_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<cplx>& values() const noexcept { return values_; }
    std::vector<cplx>& values() noexcept { return values_; }
    const cplx& operator()(std::size_t s) const { return values_[s]; }
    cplx& operator()(std::size_t s) { return values_[s]; }

    double sup_distance(const AFunction& o) const {
        detail::require_same_group(group_, o.group_, "AFunction");
        double d = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) d = std::max(d, std::abs(values_[i] - o.values_[i]));
        return d;
    }

    AFunction& operator+=(const AFunction& o) {
        detail::require_same_group(group_, o.group_, "AFunction +");
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    AFunction& operator-=(const AFunction& o) {
        detail::require_same_group(group_, o.group_, "AFunction -");
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    friend AFunction operator+(AFunction a, const AFunction& b) { return a += b; }
    friend AFunction operator-(AFunction a, const AFunction& b) { return a -= b; }

    /// Pointwise product.
    friend AFunction operator*(const AFunction& a, const AFunction& b) {
        detail::require_same_group(a.group_, b.group_, "AFunction *");
        AFunction r = a;
        for (std::size_t i = 0; i < r.values_.size(); ++i) r.values_[i] *= b.values_[i];
        return r;
    }

private:
    GroupPtr group_;
    std::vector<cplx> values_;
};

/// sum_g c_g L_g on l2(G^k), with L_g[t][t'] = 1 iff t = g t'.
inline CMatrix embed(const AlgElement& x) {
    const auto ix = x.indexer();
    const std::size_t d = ix.dim();
    CMatrix m(d, d);
    for (std::size_t tp = 0; tp < d; ++tp) {
        const std::size_t tinv = ix.inv(tp);
        for (std::size_t t = 0; t < d; ++t) m(t, tp) = x[ix.mul(t, tinv)];
    }
    return m;
}

struct Projection {
    AlgElement element;
    double residual = 0.0;  ///< ||M - embed(element)||_F
};

/// Best VN(G^k) approximation a_g = h(M lambda(g)^*), with its residual.
inline Projection project_with_residual(const CMatrix& m, const GroupPtr& g, std::size_t legs = 1) {
    const detail::LegIndexer ix(*g, legs);
    const std::size_t d = ix.dim();
    if (m.rows() != d || m.cols() != d) throw InvalidArgument("project: matrix size does not match |G|^legs");
    AlgElement x = AlgElement::zero(g, legs);
    for (std::size_t s = 0; s < d; ++s) {
        cplx acc = 0.0;
        for (std::size_t tp = 0; tp < d; ++tp) acc += m(ix.mul(s, tp), tp);
        x[s] = acc / static_cast<double>(d);
    }
    return {x, distance(m, embed(x))};
}

/// Coefficients of a matrix in VN(G^k); throws if the residual exceeds rel_eps * max(1, ||M||).
inline AlgElement project(const CMatrix& m, const GroupPtr& g, const Tolerance& tol = {}, std::size_t legs = 1) {
    auto p = project_with_residual(m, g, legs);
    if (p.residual > tol.rel_eps * std::max(1.0, m.frobenius_norm()))
        throw VerificationError("project: matrix is not in VN(G), residual " + std::to_string(p.residual), p.residual);
    return std::move(p.element);
}

/// Comultiplication applied to leg `leg`: lambda(g) |-> lambda(g) (x) lambda(g) there.
inline AlgElement coproduct(const AlgElement& x, std::size_t leg = 0) {
    if (leg >= x.legs()) throw InvalidArgument("coproduct: leg out of range");
    const std::size_t n = x.group()->order();
    const std::size_t low = detail::ipow(n, x.legs() - 1 - leg);
    AlgElement r = AlgElement::zero(x.group(), x.legs() + 1);
    for (std::size_t i = 0; i < x.dim(); ++i) {
        if (x[i] == cplx(0.0)) continue;
        const std::size_t hi = i / low / n, g = i / low % n, lo = i % low;
        r[((hi * n + g) * n + g) * low + lo] = x[i];
    }
    return r;
}

inline CMatrix coproduct_matrix(const AlgElement& x) { return embed(coproduct(x)); }

/// S applied on every leg: lambda(g) |-> lambda(g^{-1}).
inline AlgElement antipode(const AlgElement& x) {
    const auto ix = x.indexer();
    AlgElement r = AlgElement::zero(x.group(), x.legs());
    for (std::size_t i = 0; i < x.dim(); ++i) r[ix.inv(i)] = x[i];
    return r;
}

/// h(x) = <x delta_e, delta_e>, the identity coefficient (on every leg).
inline cplx haar_trace(const AlgElement& x) { return x[0]; }

inline AlgElement tensor(const AlgElement& a, const AlgElement& b) {
    detail::require_same_group(a.group(), b.group(), "tensor");
    AlgElement r = AlgElement::zero(a.group(), a.legs() + b.legs());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a[i] == cplx(0.0)) continue;
        for (std::size_t j = 0; j < b.dim(); ++j) r[i * b.dim() + j] = a[i] * b[j];
    }
    return r;
}

/// Exchange the legs of a two-leg element.
inline AlgElement flip(const AlgElement& x) {
    if (x.legs() != 2) throw InvalidArgument("flip: two legs required");
    const std::size_t n = x.group()->order();
    AlgElement r = AlgElement::zero(x.group(), 2);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) r[b * n + a] = x[a * n + b];
    return r;
}

/// (h (x) iota)(X): drop the first leg against the trace.
inline AlgElement slice_trace_first(const AlgElement& x) {
    if (x.legs() < 2) throw InvalidArgument("slice_trace_first: two or more legs required");
    const std::size_t rest = x.dim() / x.group()->order();
    return AlgElement(x.group(), std::vector<cplx>(x.coeffs().begin(), x.coeffs().begin() + static_cast<std::ptrdiff_t>(rest)),
                      x.legs() - 1);
}

/// (f (x) iota)(X) = sum c_{g,rest} f(g) lambda(rest).
inline AlgElement slice_function_first(const AlgElement& x, const AFunction& f) {
    if (x.legs() < 2) throw InvalidArgument("slice_function_first: two or more legs required");
    detail::require_same_group(x.group(), f.group(), "slice_function_first");
    const std::size_t n = x.group()->order();
    const std::size_t rest = x.dim() / n;
    AlgElement r = AlgElement::zero(x.group(), x.legs() - 1);
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t k = 0; k < rest; ++k) r[k] += x[g * rest + k] * f(g);
    return r;
}

/// W delta_(a,b) = delta_(b^{-1} a, b); dense permutation matrix on l2(G x G).
inline CMatrix fundamental_w(const FiniteGroup& g) {
    const std::size_t n = g.order();
    CMatrix w(n * n, n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) w(g.mul(g.inv(b), a) * n + b, a * n + b) = 1.0;
    return w;
}

/// Pentagon relation W23 W12 = W12 W13 W23 on l2(G^3), evaluated in
/// permutation form; returns the Frobenius norm of the difference (exact).
inline double pentagon_residual(const FiniteGroup& g) {
    const std::size_t n = g.order();
    using T3 = std::array<std::size_t, 3>;
    auto w = [&](T3 v, std::size_t i, std::size_t j) {
        v[i] = g.mul(g.inv(v[j]), v[i]);
        return v;
    };
    std::size_t mismatches = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                const T3 v{a, b, c};
                const T3 lhs = w(w(v, 0, 1), 1, 2);
                const T3 rhs = w(w(w(v, 1, 2), 0, 2), 0, 1);
                if (lhs != rhs) ++mismatches;
            }
    return std::sqrt(2.0 * static_cast<double>(mismatches));
}

/// Coefficientwise (Hadamard) product.
inline AlgElement hadamard(const AlgElement& v, const AlgElement& u) {
    v.require_compatible(u, "hadamard");
    AlgElement r = v;
    for (std::size_t i = 0; i < r.dim(); ++i) r[i] *= u[i];
    return r;
}

/// (T f)(s) = sum_g a_g f(s g); dual to right multiplication, (R, T f) = (R T, f).
inline AFunction module_action(const AlgElement& t, const AFunction& f) {
    detail::require_same_group(t.group(), f.group(), "module_action");
    if (t.legs() != 1) throw InvalidArgument("module_action: single-leg element required");
    const auto& g = *t.group();
    AFunction r = AFunction::zero(t.group());
    for (std::size_t s = 0; s < g.order(); ++s) {
        cplx acc = 0.0;
        for (std::size_t h = 0; h < g.order(); ++h) acc += t[h] * f(g.mul(s, h));
        r(s) = acc;
    }
    return r;
}

/// Matrix of f |-> T f on C^G: M[s][t] = a_{s^{-1} t}.
inline CMatrix module_action_matrix(const AlgElement& t) {
    const auto& g = *t.group();
    CMatrix m(g.order(), g.order());
    for (std::size_t s = 0; s < g.order(); ++s)
        for (std::size_t u = 0; u < g.order(); ++u) m(s, u) = t[g.mul(g.inv(s), u)];
    return m;
}

/// f . T = sum_g f(g) a_g lambda(g), the predual action on VN(G).
inline AlgElement slice_action(const AFunction& f, const AlgElement& t) {
    detail::require_same_group(t.group(), f.group(), "slice_action");
    AlgElement r = t;
    for (std::size_t g = 0; g < r.dim(); ++g) r[g] *= f(g);
    return r;
}

/// Lambda(u) = sum_g u(g) lambda(g).
inline AlgElement fourier_symbol(const AFunction& u) { return AlgElement(u.group(), u.values()); }

inline AFunction as_function(const AlgElement& x) {
    if (x.legs() != 1) throw InvalidArgument("as_function: single-leg element required");
    return AFunction(x.group(), x.coeffs());
}

/// (T, u) = sum_g a_g u(g).
inline cplx duality_pair(const AlgElement& t, const AFunction& u) {
    detail::require_same_group(t.group(), u.group(), "duality_pair");
    cplx s = 0.0;
    for (std::size_t g = 0; g < u.size(); ++g) s += t[g] * u(g);
    return s;
}

/// ||u||_{A(G)} = (1/|G|) ||embed(Lambda(u))||_1 (trace norm).
inline double ag_norm(const AFunction& u) {
    return trace_norm(embed(fourier_symbol(u))) / static_cast<double>(u.size());
}

/// u is positive definite iff the matrix [u(t t'^{-1})] = embed(Lambda(u)) is PSD.
inline PsdComparison positive_definite(const AFunction& u, const Tolerance& tol = {}) {
    const CMatrix m = embed(fourier_symbol(u));
    return psd_leq(CMatrix(m.rows(), m.cols()), m, tol);
}

inline AlgElement random_element(const GroupPtr& g, Rng& rng, std::size_t legs = 1) {
    AlgElement x = AlgElement::zero(g, legs);
    for (auto& z : x.coeffs()) z = rng.complex_normal();
    return x;
}

inline AFunction random_function(const GroupPtr& g, Rng& rng) {
    AFunction f = AFunction::zero(g);
    for (auto& z : f.values()) z = rng.complex_normal();
    return f;
}

/// Operator norm of an element, computed on the regular representation.
inline double op_norm(const AlgElement& x) { return op_norm(embed(x)); }

inline nlohmann::json coefficients_json(const std::vector<cplx>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& z : v) arr.push_back({z.real(), z.imag()});
    return arr;
}

inline nlohmann::json to_json(const AlgElement& x) {
    return {{"group", x.group()->name()}, {"legs", x.legs()}, {"coeffs", coefficients_json(x.coeffs())}};
}

inline nlohmann::json to_json(const AFunction& f) {
    return {{"group", f.group()->name()}, {"values", coefficients_json(f.values())}};
}

}  // namespace beurling
