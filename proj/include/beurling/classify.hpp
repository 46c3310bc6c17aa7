#pragma once

// Partial weight inverses and their normal form
//
//     omega = P_H T P_H U,
//
// with P_H the averaging projection of a subgroup H, T positive invertible
// and U unitary in VN(G).  Also the Hadamard calculus and pre-dual weights.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "beurling/algebra.hpp"
#include "beurling/error.hpp"
#include "beurling/group.hpp"
#include "beurling/matrix.hpp"
#include "beurling/random.hpp"
#include "beurling/weights.hpp"

namespace beurling {

struct PartialReport {
    bool is_partial = false;
    double margin = 0.0;           ///< min eigenvalue of Gamma(xx*) - xx* (x) xx*
    double cocycle_op_norm = 0.0;  ///< ||Omega|| for the synthesized partial cocycle
    double weight_equation = 0.0;  ///< ||Gamma(x) Omega - x (x) x||
};

inline PartialReport verify_partial(const AlgElement& x, const Tolerance& tol = {}) {
    PartialReport r;
    const auto rep = verify_weight_inverse(x, tol);
    r.margin = rep.margin;
    r.is_partial = rep.is_partial;
    if (r.is_partial) {
        const AlgElement cocycle = build_cocycle(x, tol);
        r.cocycle_op_norm = op_norm(cocycle);
        r.weight_equation = weight_equation_residual(x, cocycle);
        r.is_partial = r.cocycle_op_norm <= 1.0 + tol.abs_eps && r.weight_equation <= tol.rel_eps;
    }
    return r;
}

/// H = {g : |c_g - c_e| <= abs_eps}; the coefficients must be 1/|H| on H and
/// 0 elsewhere, and H must be closed.  Anything else is a hard failure.
inline Subgroup subgroup_from_projection(const AlgElement& p, const Tolerance& tol = {}) {
    const double ce = p[0].real();
    if (std::abs(p[0].imag()) > tol.abs_eps || ce <= tol.abs_eps)
        throw VerificationError("subgroup_from_projection: identity coefficient is not positive", std::abs(p[0]));
    std::vector<std::size_t> h;
    double worst = 0.0;
    for (std::size_t g = 0; g < p.dim(); ++g) {
        if (std::abs(p[g] - p[0]) <= tol.abs_eps)
            h.push_back(g);
        else
            worst = std::max(worst, std::abs(p[g]));
    }
    worst = std::max(worst, std::abs(ce - 1.0 / static_cast<double>(h.size())));
    if (worst > tol.abs_eps) {
        std::ostringstream os;
        os << "subgroup_from_projection: coefficients are not of the form (1/|H|) 1_H, deviation " << worst;
        throw VerificationError(os.str(), worst);
    }
    try {
        return Subgroup(p.group(), std::move(h));
    } catch (const InvalidArgument& e) {
        throw VerificationError(std::string("subgroup_from_projection: detected set is not a subgroup: ") + e.what(), 1.0);
    }
}

struct GroupLikeProjection {
    AlgElement p;
    Subgroup h;
};

struct GroupLikeCheck {
    std::optional<GroupLikeProjection> result;
    std::string failure;                  ///< empty on success
    double projection_residual = 0.0;     ///< max(||P^2 - P||, ||P* - P||)
    double inequality_margin = 0.0;       ///< min eigenvalue of Gamma(P) - P (x) P
    std::vector<cplx> witness;            ///< eigenvector for that margin when it fails
    double antipode_residual = 0.0;       ///< ||S(P) - P||
    double grouplike_residual = 0.0;      ///< ||(P (x) I) Gamma(P) - P (x) P||
    bool ok() const noexcept { return result.has_value(); }
};

inline GroupLikeCheck grouplike_projection_check(const AlgElement& p, const Tolerance& tol = {}) {
    GroupLikeCheck r;
    r.projection_residual = std::max(distance(p * p, p), distance(p.adjoint(), p));
    if (r.projection_residual > tol.zero_threshold(p.norm())) {
        r.failure = "not a projection";
        return r;
    }
    const auto eig = hermitian_eig(embed(coproduct(p)) - embed(tensor(p, p)), tol);
    r.inequality_margin = eig.values.back();
    if (r.inequality_margin < -tol.abs_eps) {
        r.failure = "P (x) P <= Gamma(P) fails";
        const std::size_t last = eig.values.size() - 1;
        for (std::size_t i = 0; i < eig.vectors.rows(); ++i) r.witness.push_back(eig.vectors(i, last));
        return r;
    }
    r.antipode_residual = distance(antipode(p), p);
    const AlgElement one = AlgElement::identity(p.group());
    r.grouplike_residual = distance(tensor(p, one) * coproduct(p), tensor(p, p));
    if (r.antipode_residual > tol.zero_threshold(p.norm()) || r.grouplike_residual > tol.zero_threshold(p.norm())) {
        r.failure = "S(P) = P or (P (x) I) Gamma(P) = P (x) P fails";
        return r;
    }
    try {
        r.result = GroupLikeProjection{p, subgroup_from_projection(p, tol)};
    } catch (const VerificationError& e) {
        r.failure = e.what();
    }
    return r;
}

/// Matrix input: rejected when it is not in VN(G).
inline GroupLikeCheck grouplike_projection_check(const CMatrix& m, const GroupPtr& g, const Tolerance& tol = {}) {
    const auto proj = project_with_residual(m, g);
    if (proj.residual > tol.rel_eps * std::max(1.0, m.frobenius_norm())) {
        GroupLikeCheck r;
        r.failure = "not in VN(G), residual " + std::to_string(proj.residual);
        return r;
    }
    return grouplike_projection_check(proj.element, tol);
}

struct PartialWeightDecomposition {
    Subgroup h;
    AlgElement p;  ///< P_H
    AlgElement t;  ///< positive invertible
    AlgElement u;  ///< unitary
    double alpha = 0.0;  ///< set by synthesize only
    double reconstruction_residual = 0.0;  ///< ||omega - P T P U||
    bool invertible = false;  ///< omega itself is invertible (H = {e})
};

/// Partial isometry in VN(G) with initial projection `from` and final
/// projection `to`, where both are equivalent projections of VN(G).  The
/// polar part of to X from is such a map for generic X in VN(G).
inline AlgElement connect_projections(const AlgElement& from, const AlgElement& to, const Tolerance& tol = {},
                                      std::uint64_t seed = 0x756e6974ULL) {
    const auto& g = from.group();
    const CMatrix q1 = embed(from), q2 = embed(to);
    if (q1.trace().real() < 0.5 && q2.trace().real() < 0.5) return AlgElement::zero(g);
    if (distance(from, to) <= tol.zero_threshold(1.0)) return from;
    Rng rng(seed);
    for (int attempt = 0; attempt < 16; ++attempt) {
        const AlgElement x = random_element(g, rng);
        const CMatrix y = q2 * embed(x) * q1;
        const auto pol = polar_complete(y, tol);
        const CMatrix& v = pol.partial_isometry;
        if (distance(v.adjoint() * v, q1) <= 1e-9 && distance(v * v.adjoint(), q2) <= 1e-9)
            return project(v, g, tol);
    }
    throw VerificationError("connect_projections: projections are not equivalent in VN(G)", 1.0);
}

/// Unitary U in VN(G) with U * (V* V) = V for a partial isometry V in VN(G).
inline AlgElement complete_in_vn(const AlgElement& v, const Tolerance& tol = {}) {
    const AlgElement one = AlgElement::identity(v.group());
    const AlgElement initial = v.adjoint() * v;
    const AlgElement final_ = v * v.adjoint();
    return v + connect_projections(one - initial, one - final_, tol);
}

/// omega = P_H T P_H U for a partial weight inverse omega.
inline PartialWeightDecomposition decompose(const AlgElement& omega, const Tolerance& tol = {}) {
    const auto rep = verify_weight_inverse(omega, tol);
    if (!rep.is_partial) {
        std::ostringstream os;
        os << "decompose: not a partial weight inverse, (iw) margin " << rep.margin;
        throw VerificationError(os.str(), rep.margin);
    }
    const auto& g = omega.group();
    const CMatrix sq = embed(omega * omega.adjoint());
    const AlgElement p = project(range_projection(sq, tol), g, tol);
    const auto check = grouplike_projection_check(p, tol);
    if (!check.ok()) throw VerificationError("decompose: range projection is not group-like: " + check.failure, check.inequality_margin);

    const AlgElement modulus = project(hermitian_function(sq, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }, tol), g, tol);
    const AlgElement one = AlgElement::identity(g);

    // omega* = V |omega*| with initial projection P; complete V to U' in VN(G); U = U'*.
    const auto pol = polar_complete(embed(omega.adjoint()), tol);
    const AlgElement v = project(pol.partial_isometry, g, tol);
    const AlgElement u = complete_in_vn(v, tol).adjoint();

    PartialWeightDecomposition d{check.result->h, p, modulus + one - p, u, 0.0, 0.0, false};
    d.reconstruction_residual = distance(omega, d.p * d.t * d.p * d.u);
    d.invertible = d.h.size() == 1 && rep.kernel.trivial;
    return d;
}

/// omega = alpha P_H T P_H U with alpha = c^2 / d^4, c = min spec T, d = max spec T.
inline std::pair<double, AlgElement> synthesize(const Subgroup& h, const AlgElement& t, const AlgElement& u,
                                                const Tolerance& tol = {}) {
    const auto eig = hermitian_eig(embed(t), tol);
    const double c = eig.values.back(), d = eig.values.front();
    if (c <= tol.zero_threshold(d)) throw InvalidArgument("synthesize: T is not positive invertible");
    const AlgElement one = AlgElement::identity(u.group());
    const double unitarity = std::max(distance(u.adjoint() * u, one), distance(u * u.adjoint(), one));
    if (unitarity > tol.zero_threshold(1.0) * 10.0) throw InvalidArgument("synthesize: U is not unitary");
    const double alpha = c * c / (d * d * d * d);
    const AlgElement p = AlgElement::subgroup_projection(h);
    return {alpha, p * t * p * u * cplx(alpha)};
}

/// Random positive invertible element with spectrum inside [lo, hi].
inline AlgElement random_positive_invertible(const GroupPtr& g, Rng& rng, double lo = 0.5, double hi = 2.0,
                                             const Tolerance& tol = {}) {
    const AlgElement a = random_element(g, rng);
    const AlgElement herm = (a + a.adjoint()) * cplx(0.5);
    const auto eig = hermitian_eig(embed(herm), tol);
    const double mn = eig.values.back(), mx = eig.values.front();
    const double span = std::max(mx - mn, 1e-12);
    // Affine rescaling of the spectrum into [lo, hi].
    return (herm - AlgElement::identity(g) * cplx(mn)) * cplx((hi - lo) / span) + AlgElement::identity(g) * cplx(lo);
}

/// Random unitary element: the polar part of a random (invertible) element.
inline AlgElement random_unitary(const GroupPtr& g, Rng& rng, const Tolerance& tol = {}) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        const auto pol = polar_complete(embed(random_element(g, rng)), tol);
        if (pol.positive.all_finite()) return project(pol.unitary, g, tol);
    }
    throw VerificationError("random_unitary: failed", 1.0);
}

/// Random partial weight inverse alpha P_H T P_H U over a uniformly chosen subgroup H.
inline AlgElement random_partial_weight_inverse(const GroupPtr& g, Rng& rng, const Tolerance& tol = {}) {
    const auto subs = enumerate_subgroups(g);
    const Subgroup& h = subs[rng.index(subs.size())];
    const AlgElement t = random_positive_invertible(g, rng, 0.5, 2.0, tol);
    return synthesize(h, t, random_unitary(g, rng, tol), tol).second;
}

// ---------------------------------------------------------------------------
// Hadamard calculus and pre-dual weights.

struct SpwiReport {
    double positivity_margin = 0.0;  ///< min eigenvalue of w
    double inequality_margin = 0.0;  ///< min eigenvalue of Gamma(w) - w (x) w
    bool holds = false;
};

/// Squared partial weight inverse: w >= 0 and w (x) w <= Gamma(w).
inline SpwiReport spwi_check(const AlgElement& w, const Tolerance& tol = {}) {
    SpwiReport r;
    r.positivity_margin = hermitian_eig(embed(w), tol).values.back();
    r.inequality_margin = psd_leq(embed(tensor(w, w)), embed(coproduct(w)), tol).margin;
    r.holds = r.positivity_margin >= -tol.abs_eps && r.inequality_margin >= -tol.abs_eps;
    return r;
}

/// (h (x) iota)((S(v) (x) I) Gamma(u)).
inline AlgElement hadamard_via_slice(const AlgElement& v, const AlgElement& u) {
    return slice_trace_first(tensor(antipode(v), AlgElement::identity(v.group())) * coproduct(u));
}

/// (h (x) iota)(W (v (x) u) W*), computed densely: the trace slice of a
/// two-leg operator X is the block X[(e, .), (e, .)].
inline AlgElement hadamard_via_fundamental_unitary(const AlgElement& v, const AlgElement& u, const Tolerance& tol = {}) {
    const std::size_t n = v.group()->order();
    const CMatrix w = fundamental_w(*v.group());
    const CMatrix x = w * embed(tensor(v, u)) * w.adjoint();
    std::vector<cplx> delta_e(n, 0.0);
    delta_e[0] = 1.0;
    return project(slice_first_leg(x, n, delta_e, delta_e), v.group(), tol);
}

struct HadamardReport {
    double alpha = 0.0;                     ///< h(S(w) w)
    double lower_margin = 0.0;              ///< min eigenvalue of w*w - alpha w
    double upper_margin = 0.0;              ///< min eigenvalue of w - w*w
    std::vector<double> lower_eigenvalues;  ///< spectrum of w*w - alpha w, descending
    std::vector<double> upper_eigenvalues;  ///< spectrum of w - w*w, descending
    bool holds = false;
};

/// alpha w <= w * w <= w for a squared partial weight inverse w.
inline HadamardReport hadamard_inequalities(const AlgElement& w, const Tolerance& tol = {}) {
    const auto pre = spwi_check(w, tol);
    if (!pre.holds) throw VerificationError("hadamard_inequalities: w is not a squared partial weight inverse",
                                            std::min(pre.positivity_margin, pre.inequality_margin));
    HadamardReport r;
    r.alpha = haar_trace(antipode(w) * w).real();
    const AlgElement ww = hadamard(w, w);
    const auto lower = psd_leq(embed(w * cplx(r.alpha)), embed(ww), tol);
    const auto upper = psd_leq(embed(ww), embed(w), tol);
    r.lower_margin = lower.margin;
    r.upper_margin = upper.margin;
    r.lower_eigenvalues = lower.eigenvalues;
    r.upper_eigenvalues = upper.eigenvalues;
    r.holds = r.alpha > 0.0 && lower.holds && upper.holds;
    return r;
}

struct ClosureReport {
    SpwiReport product;         ///< w1 * w2 is again s.p.w.i.
    double alpha = 0.0;         ///< h(S(w1) w2)
    double margin_first = 0.0;  ///< min eigenvalue of w1*w2 - alpha w1
    double margin_second = 0.0; ///< min eigenvalue of w1*w2 - alpha w2
    bool holds = false;
};

/// Closure of s.p.w.i.'s under the Hadamard product, with alpha w_i <= w1 * w2.
inline ClosureReport hadamard_closure(const AlgElement& w1, const AlgElement& w2, const Tolerance& tol = {}) {
    ClosureReport r;
    const AlgElement prod = hadamard(w1, w2);
    r.product = spwi_check(prod, tol);
    r.alpha = haar_trace(antipode(w1) * w2).real();
    const auto a = psd_leq(embed(w1 * cplx(r.alpha)), embed(prod), tol);
    const auto b = psd_leq(embed(w2 * cplx(r.alpha)), embed(prod), tol);
    r.margin_first = a.margin;
    r.margin_second = b.margin;
    r.holds = r.product.holds && a.holds && b.holds;
    return r;
}

/// ||S(S(v) * v) - S(v) * v||.
inline double hadamard_antipode_residual(const AlgElement& v) {
    const AlgElement c = hadamard(antipode(v), v);
    return distance(antipode(c), c);
}

struct PredualReport {
    AFunction f;                        ///< f(g) = h(w lambda(g))
    double f_margin = 0.0;              ///< min eigenvalue of Lambda(f)
    double f_minus_square_margin = 0.0; ///< min eigenvalue of Lambda(f - f^2)
    SpwiReport action;                  ///< f . w is s.p.w.i.
    bool holds = false;
};

/// f = w^ is a pre-dual weight and f . w is again a squared partial weight inverse.
inline PredualReport predual_weight_check(const AlgElement& w, const Tolerance& tol = {}) {
    PredualReport r;
    const auto& g = *w.group();
    r.f = AFunction::zero(w.group());
    for (std::size_t s = 0; s < g.order(); ++s) r.f(s) = w[g.inv(s)];
    r.f_margin = positive_definite(r.f, tol).margin;
    r.f_minus_square_margin = positive_definite(r.f - r.f * r.f, tol).margin;
    r.action = spwi_check(slice_action(r.f, w), tol);
    r.holds = r.f_margin >= -tol.abs_eps && r.f_minus_square_margin >= -tol.abs_eps && r.action.holds;
    return r;
}

}  // namespace beurling
