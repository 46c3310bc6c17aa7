#pragma once

// The Beurling-Fourier algebra A(G, omega) = omega A(G), realized on A(G)
// with the twisted product u ._Omega v = Gamma_*(Omega (u (x) v)).

#include <cstddef>
#include <vector>

#include "beurling/algebra.hpp"
#include "beurling/error.hpp"
#include "beurling/matrix.hpp"
#include "beurling/weights.hpp"

namespace beurling {

/// Coefficients c_{g,h} of an operator on l2(G x G) lying in VN(G x G).
inline AlgElement cocycle_coefficients(const CMatrix& omega_matrix, const GroupPtr& g, const Tolerance& tol = {}) {
    return project(omega_matrix, g, tol, 2);
}

/// (u ._Omega v)(s) = sum_{g,h} c_{g,h} u(s g) v(s h).
inline AFunction omega_product(const AFunction& u, const AFunction& v, const AlgElement& cocycle) {
    detail::require_same_group(u.group(), v.group(), "omega_product");
    detail::require_same_group(u.group(), cocycle.group(), "omega_product");
    if (cocycle.legs() != 2) throw InvalidArgument("omega_product: two-leg cocycle required");
    const auto& g = *u.group();
    const std::size_t n = g.order();
    AFunction r = AFunction::zero(u.group());
    for (std::size_t s = 0; s < n; ++s) {
        cplx acc = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            const cplx ua = u(g.mul(s, a));
            if (ua == cplx(0.0)) continue;
            for (std::size_t b = 0; b < n; ++b) acc += cocycle[a * n + b] * ua * v(g.mul(s, b));
        }
        r(s) = acc;
    }
    return r;
}

inline AFunction omega_product(const AFunction& u, const AFunction& v, const CMatrix& omega_matrix,
                               const Tolerance& tol = {}) {
    return omega_product(u, v, cocycle_coefficients(omega_matrix, u.group(), tol));
}

/// Same product computed through the matrix of the A(G x G) module action of
/// Omega followed by restriction to the diagonal (the predual of Gamma).
inline AFunction omega_product_via_module(const AFunction& u, const AFunction& v, const AlgElement& cocycle) {
    const auto& g = u.group();
    const std::size_t n = g->order();
    const GroupPtr gg = share(make_product(*g, *g));
    const CMatrix act = module_action_matrix(AlgElement(gg, cocycle.coeffs()));
    std::vector<cplx> uv(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) uv[a * n + b] = u(a) * v(b);
    const auto twisted = act.apply(uv);
    AFunction r = AFunction::zero(g);
    for (std::size_t s = 0; s < n; ++s) r(s) = twisted[s * n + s];
    return r;
}

/// ||omega f||_omega = ||f||_{A(G)}, recovering f from omega f by solving the module action.
inline double weighted_norm(const AFunction& wu, const AlgElement& omega, const Tolerance& tol = {}) {
    detail::require_same_group(wu.group(), omega.group(), "weighted_norm");
    const CMatrix act = module_action_matrix(omega);
    CMatrix rhs(wu.size(), 1, wu.values());
    const CMatrix f = solve(act, rhs);
    const double res = distance(act * f, rhs);
    if (res > tol.zero_threshold(rhs.frobenius_norm()))
        throw VerificationError("weighted_norm: input is not in the range of the module action", res);
    return ag_norm(AFunction(wu.group(), f.data()));
}

/// lambda_Omega(f) = (f (x) iota)(W Omega) with f realized as the vector
/// functional <. delta_e, conj(f)>; entry (t, t') = sum_r f(r) c_{(t r, t t'^{-1})}.
inline CMatrix lambda_omega(const AFunction& f, const AlgElement& cocycle) {
    detail::require_same_group(f.group(), cocycle.group(), "lambda_omega");
    if (cocycle.legs() != 2) throw InvalidArgument("lambda_omega: two-leg cocycle required");
    const auto& g = *f.group();
    const std::size_t n = g.order();
    CMatrix m(n, n);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t tp = 0; tp < n; ++tp) {
            const std::size_t second = g.mul(t, g.inv(tp));
            cplx acc = 0.0;
            for (std::size_t r = 0; r < n; ++r) acc += f(r) * cocycle[g.mul(t, r) * n + second];
            m(t, tp) = acc;
        }
    return m;
}

/// lambda_Omega(f) from the dense operator W Omega and a first-leg slice.
inline CMatrix lambda_omega_dense(const AFunction& f, const AlgElement& cocycle) {
    const std::size_t n = f.size();
    std::vector<cplx> xi(n, 0.0), eta(n);
    xi[0] = 1.0;
    for (std::size_t r = 0; r < n; ++r) eta[r] = std::conj(f(r));
    return slice_first_leg(fundamental_w(*f.group()) * embed(cocycle), n, xi, eta);
}

/// Diagonal multiplication by s |-> f(s^{-1}).
inline CMatrix check_multiplier(const AFunction& f) {
    const auto& g = *f.group();
    CMatrix m(g.order(), g.order());
    for (std::size_t s = 0; s < g.order(); ++s) m(s, s) = f(g.inv(s));
    return m;
}

struct SymmetryReport {
    double residual = 0.0;  ///< ||flip(Omega) - Omega||
    bool symmetric = false;
};

/// flip(Omega) = Sigma Omega Sigma with Sigma the tensor swap.
inline SymmetryReport cocycle_symmetry_check(const AlgElement& cocycle, const Tolerance& tol = {}) {
    SymmetryReport r;
    r.residual = cocycle_symmetry_residual(cocycle);
    r.symmetric = r.residual <= tol.zero_threshold(cocycle.norm());
    return r;
}

/// A(G, omega) realized as (A(G), ._Omega).
class TwistedAlgebra {
public:
    explicit TwistedAlgebra(WeightInverse w) : weight_(std::move(w)) {}

    const WeightInverse& weight() const noexcept { return weight_; }
    const GroupPtr& group() const noexcept { return weight_.group(); }

    AFunction product(const AFunction& u, const AFunction& v) const { return omega_product(u, v, weight_.cocycle()); }

    /// f |-> omega f, the isometry onto omega A(G).
    AFunction to_weighted(const AFunction& f) const { return module_action(weight_.omega(), f); }

    double norm(const AFunction& f) const { return ag_norm(f); }

    CMatrix represent(const AFunction& f) const { return lambda_omega(f, weight_.cocycle()); }

private:
    WeightInverse weight_;
};

}  // namespace beurling
