#pragma once

// Weight inverses on the dual of a finite group, their 2-cocycles, and the
// standard ways of producing them.
//
// A weight inverse is omega in VN(G) with trivial kernel and cokernel and
//
//     omega omega* (x) omega omega*  <=  Gamma(omega omega*).            (iw)
//
// Its cocycle is the contraction Omega with Gamma(omega) Omega = omega (x) omega.
// Residuals of identities in VN(G^k) are measured in the coefficient l2 norm
// h(x* x)^{1/2}; operator norms are used only for the contraction bounds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "beurling/algebra.hpp"
#include "beurling/characters.hpp"
#include "beurling/error.hpp"
#include "beurling/group.hpp"
#include "beurling/matrix.hpp"

namespace beurling {

struct KernelCertificates {
    double omega = 0.0;          ///< smallest singular value of omega
    double omega_adjoint = 0.0;  ///< smallest singular value of omega*
    bool trivial = false;        ///< both exceed abs_eps * max(1, ||omega||)
};

struct WeightReport {
    bool is_partial = false;
    bool is_weight_inverse = false;
    double margin = 0.0;              ///< min eigenvalue of Gamma(xx*) - xx* (x) xx*
    std::vector<double> eigenvalues;  ///< full spectrum of that difference, descending
    KernelCertificates kernel;
};

inline KernelCertificates kernel_certificates(const AlgElement& x, const Tolerance& tol = {}) {
    const auto d = svd(embed(x));
    const auto da = svd(embed(x.adjoint()));
    KernelCertificates k;
    k.omega = d.s.back();
    k.omega_adjoint = da.s.back();
    const double cut = tol.zero_threshold(d.s.front());
    k.trivial = k.omega > cut && k.omega_adjoint > cut;
    return k;
}

/// Inequality (iw) for x, plus the kernel certificates.
inline WeightReport verify_weight_inverse(const AlgElement& x, const Tolerance& tol = {}) {
    if (x.legs() != 1) throw InvalidArgument("verify_weight_inverse: single-leg element required");
    const AlgElement sq = x * x.adjoint();
    const auto cmp = psd_leq(embed(tensor(sq, sq)), embed(coproduct(sq)), tol);
    WeightReport r;
    r.margin = cmp.margin;
    r.eigenvalues = cmp.eigenvalues;
    r.is_partial = cmp.margin >= -tol.abs_eps;
    r.kernel = kernel_certificates(x, tol);
    r.is_weight_inverse = r.is_partial && r.kernel.trivial;
    return r;
}

/// Omega = pinv(Gamma(omega)) (omega (x) omega), as a two-leg element.
///
/// The pseudoinverse already maps into the range of Gamma(omega)*, so the
/// result satisfies Gamma(range projection of Gamma(omega*)) Omega = Omega;
/// projecting back onto VN(G x G) removes round-off outside the algebra.
inline AlgElement build_cocycle(const AlgElement& omega, const Tolerance& tol = {}) {
    const auto rep = verify_weight_inverse(omega, tol);
    if (!rep.is_partial) {
        std::ostringstream os;
        os << "build_cocycle: not a partial weight inverse, (iw) margin " << rep.margin;
        throw VerificationError(os.str(), rep.margin);
    }
    const CMatrix m = pinv(coproduct_matrix(omega), tol) * embed(tensor(omega, omega));
    auto p = project_with_residual(m, omega.group(), 2);
    if (p.residual > tol.rel_eps * std::max(1.0, m.frobenius_norm()))
        throw VerificationError("build_cocycle: cocycle left VN(G x G)", p.residual);
    return std::move(p.element);
}

/// ||Gamma(omega) Omega - omega (x) omega||.
inline double weight_equation_residual(const AlgElement& omega, const AlgElement& cocycle) {
    return distance(coproduct(omega) * cocycle, tensor(omega, omega));
}

/// ||(iota (x) Gamma)(Omega)(I (x) Omega) - (Gamma (x) iota)(Omega)(Omega (x) I)||, evaluated in VN(G^3).
inline double two_cocycle_residual(const AlgElement& cocycle) {
    if (cocycle.legs() != 2) throw InvalidArgument("two_cocycle_residual: two-leg element required");
    const auto& g = cocycle.group();
    const AlgElement one = AlgElement::identity(g);
    const AlgElement lhs = coproduct(cocycle, 1) * tensor(one, cocycle);
    const AlgElement rhs = coproduct(cocycle, 0) * tensor(cocycle, one);
    return distance(lhs, rhs);
}

/// ||flip(Omega) - Omega||.
inline double cocycle_symmetry_residual(const AlgElement& cocycle) { return distance(flip(cocycle), cocycle); }

/// ||Omega Omega* - Omega* Omega||.
inline double cocycle_normality_residual(const AlgElement& cocycle) {
    const AlgElement adj = cocycle.adjoint();
    return distance(cocycle * adj, adj * cocycle);
}

/// max_g ||lambda(g) x - x lambda(g)||.
inline double centrality_residual(const AlgElement& x) {
    double worst = 0.0;
    for (std::size_t g = 0; g < x.group()->order(); ++g) {
        const AlgElement l = AlgElement::lambda(x.group(), g);
        worst = std::max(worst, distance(l * x, x * l));
    }
    return worst;
}

/// A verified weight inverse together with its cocycle.
class WeightInverse {
public:
    /// Verify (iw) and the kernel conditions, then synthesize the cocycle.
    static WeightInverse create(AlgElement omega, const Tolerance& tol = {}) {
        const auto rep = verify_weight_inverse(omega, tol);
        if (!rep.is_weight_inverse) {
            std::ostringstream os;
            os << "not a weight inverse: (iw) margin " << rep.margin << ", smallest singular values "
               << rep.kernel.omega << " / " << rep.kernel.omega_adjoint;
            throw VerificationError(os.str(), rep.margin);
        }
        WeightInverse w;
        w.cocycle_ = build_cocycle(omega, tol);
        w.omega_ = std::move(omega);
        w.margin_iw_ = rep.margin;
        w.kernel_ = rep.kernel;
        return w;
    }

    const AlgElement& omega() const noexcept { return omega_; }
    const AlgElement& cocycle() const noexcept { return cocycle_; }
    CMatrix cocycle_matrix() const { return embed(cocycle_); }
    double margin_iw() const noexcept { return margin_iw_; }
    const KernelCertificates& kernel_certificates() const noexcept { return kernel_; }
    const GroupPtr& group() const noexcept { return omega_.group(); }

private:
    AlgElement omega_;
    AlgElement cocycle_;
    double margin_iw_ = 0.0;
    KernelCertificates kernel_;
};

/// The five defining properties of a weight inverse, each with its residual.
struct WeightInvariants {
    double iw_margin = 0.0;
    KernelCertificates kernel;
    double weight_equation = 0.0;
    double cocycle_op_norm = 0.0;
    double omega_op_norm = 0.0;
    double two_cocycle = 0.0;
    double symmetry = 0.0;

    bool iw_holds(const Tolerance& tol) const { return iw_margin >= -tol.abs_eps; }
    bool weight_equation_holds(const Tolerance& tol) const { return weight_equation <= tol.rel_eps; }
    bool contractions_hold(const Tolerance& tol) const {
        return cocycle_op_norm <= 1.0 + tol.abs_eps && omega_op_norm <= 1.0 + tol.abs_eps;
    }
    bool two_cocycle_holds(const Tolerance& tol) const { return two_cocycle <= tol.rel_eps; }

    bool all_hold(const Tolerance& tol) const {
        return iw_holds(tol) && kernel.trivial && weight_equation_holds(tol) && contractions_hold(tol) &&
               two_cocycle_holds(tol);
    }
};

inline WeightInvariants check_invariants(const WeightInverse& w, const Tolerance& tol = {}) {
    WeightInvariants r;
    const auto rep = verify_weight_inverse(w.omega(), tol);
    r.iw_margin = rep.margin;
    r.kernel = rep.kernel;
    r.weight_equation = weight_equation_residual(w.omega(), w.cocycle());
    r.cocycle_op_norm = op_norm(w.cocycle());
    r.omega_op_norm = op_norm(w.omega());
    r.two_cocycle = two_cocycle_residual(w.cocycle());
    r.symmetry = cocycle_symmetry_residual(w.cocycle());
    return r;
}

// ---------------------------------------------------------------------------
// Dual-function weights on Z_{n1} x ... x Z_{nk}.

/// A weight w >= 1 on the dual group, sub-multiplicative.  The dual of
/// Z_{n1} x ... x Z_{nk} is identified with the group itself through its
/// characters, so values are indexed by group elements.
struct DualWeightFunction {
    GroupPtr group;
    std::vector<double> values;
    std::vector<std::string> warnings;

    /// Rescale so that min w >= 1, then validate sub-multiplicativity.
    static DualWeightFunction create(GroupPtr g, std::vector<double> values) {
        if (!g || g->cyclic_factors().empty())
            throw InvalidArgument("DualWeightFunction: group must be a product of cyclic groups");
        if (values.size() != g->order()) throw InvalidArgument("DualWeightFunction: length does not match |G|");
        for (double v : values)
            if (!std::isfinite(v) || v <= 0.0) throw InvalidArgument("DualWeightFunction: values must be positive");
        DualWeightFunction w{std::move(g), std::move(values), {}};
        const double lo = *std::min_element(w.values.begin(), w.values.end());
        if (lo < 1.0) {
            for (auto& v : w.values) v /= lo;
            std::ostringstream os;
            os << "weight rescaled by " << 1.0 / lo << " so that min w = 1";
            w.warnings.push_back(os.str());
        }
        for (std::size_t s = 0; s < w.values.size(); ++s)
            for (std::size_t t = 0; t < w.values.size(); ++t)
                if (w.values[w.group->mul(s, t)] > w.values[s] * w.values[t] * (1.0 + 1e-12)) {
                    std::ostringstream os;
                    const std::size_t st = w.group->mul(s, t);
                    os << "DualWeightFunction: sub-multiplicativity fails at (" << s << "," << t << "): w(" << st
                       << ") = " << w.values[st] << " > " << w.values[s] * w.values[t];
                    throw InvalidArgument(os.str());
                }
        return w;
    }
};

/// Cyclic distance to the identity, summed over the cyclic factors.
inline std::size_t cyclic_distance(const FiniteGroup& g, std::size_t k) {
    const auto& f = g.cyclic_factors();
    if (f.empty()) throw InvalidArgument("cyclic_distance: " + g.name() + " has no cyclic factorization");
    std::size_t d = 0;
    for (std::size_t j = f.size(); j-- > 0;) {
        const std::size_t x = k % f[j];
        k /= f[j];
        d += std::min(x, f[j] - x);
    }
    return d;
}

/// w(k) = 2^{beta d(k)}.
inline DualWeightFunction cyclic_exponential_weight(const GroupPtr& g, double beta) {
    std::vector<double> v(g->order());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::exp2(beta * static_cast<double>(cyclic_distance(*g, k)));
    return DualWeightFunction::create(g, std::move(v));
}

/// w(k) = (1 + d(k))^alpha.
inline DualWeightFunction cyclic_polynomial_weight(const GroupPtr& g, double alpha) {
    std::vector<double> v(g->order());
    for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = std::pow(1.0 + static_cast<double>(cyclic_distance(*g, k)), alpha);
    return DualWeightFunction::create(g, std::move(v));
}

/// omega = sum_chi (1/w(chi)) e_chi, i.e. F^{-1} diag(1/w) F.
inline AlgElement dual_function_element(const DualWeightFunction& w) {
    std::vector<cplx> m(w.values.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = 1.0 / w.values[k];
    return from_abelian_multipliers(w.group, m);
}

inline WeightInverse weight_from_dual_function(const DualWeightFunction& w, const Tolerance& tol = {}) {
    return WeightInverse::create(dual_function_element(w), tol);
}

// ---------------------------------------------------------------------------
// Central weights.

/// omega = sum_pi values[pi] z_pi, irreducibles ordered as in irreducible_characters.
inline AlgElement central_element(const GroupPtr& g, const std::vector<double>& values, const Tolerance& tol = {}) {
    const auto irreps = irreducible_characters(g, tol);
    if (values.size() != irreps.size())
        throw InvalidArgument("central_weight: expected " + std::to_string(irreps.size()) + " values, got " +
                              std::to_string(values.size()));
    AlgElement w = AlgElement::zero(g);
    for (std::size_t i = 0; i < irreps.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] <= 0.0) throw InvalidArgument("central_weight: values must be positive");
        w += irreps[i].central_projection * cplx(values[i]);
    }
    return w;
}

/// Central element checked against (iw); throws with the margin when it fails.
inline AlgElement central_weight(const GroupPtr& g, const std::vector<double>& values, const Tolerance& tol = {}) {
    AlgElement w = central_element(g, values, tol);
    const auto rep = verify_weight_inverse(w, tol);
    if (!rep.is_partial) {
        std::ostringstream os;
        os << "central_weight: (iw) fails with margin " << rep.margin;
        throw VerificationError(os.str(), rep.margin);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Subgroup extension, polar form, powers, equivalence.

/// iota_H: lambda_H(s) |-> lambda_G(map(s)).
inline AlgElement transplant(const GroupEmbedding& e, const AlgElement& x) {
    detail::require_same_group(e.source, x.group(), "transplant");
    if (x.legs() != 1) throw InvalidArgument("transplant: single-leg element required");
    AlgElement r = AlgElement::zero(e.target);
    for (std::size_t s = 0; s < x.dim(); ++s) r[e.map[s]] = x[s];
    return r;
}

inline AlgElement extend_from_subgroup(const GroupEmbedding& e, const AlgElement& omega_h, const Tolerance& tol = {}) {
    e.validate();
    const auto rep = verify_weight_inverse(omega_h, tol);
    if (!rep.is_weight_inverse) {
        std::ostringstream os;
        os << "extend_from_subgroup: not a weight inverse on the subgroup, (iw) margin " << rep.margin;
        throw VerificationError(os.str(), rep.margin);
    }
    return transplant(e, omega_h);
}

/// Extension from H, with omega_h indexed as on H.as_group().
inline AlgElement extend_from_subgroup(const Subgroup& h, const AlgElement& omega_h, const Tolerance& tol = {}) {
    auto e = GroupEmbedding::of_subgroup(h);
    if (!omega_h.group()->same_as(*e.source)) throw InvalidArgument("extend_from_subgroup: element is not over H");
    e.source = omega_h.group();
    return extend_from_subgroup(e, omega_h, tol);
}

struct PolarWeight {
    AlgElement modulus;  ///< |omega*| = (omega omega*)^{1/2}
    AlgElement unitary;  ///< omega* = unitary * modulus
};

inline PolarWeight polar_weight(const AlgElement& omega, const Tolerance& tol = {}) {
    const auto rep = verify_weight_inverse(omega, tol);
    if (!rep.is_weight_inverse) throw VerificationError("polar_weight: not a weight inverse", rep.margin);
    const auto p = polar_complete(embed(omega.adjoint()), tol);
    return {project(p.positive, omega.group(), tol), project(p.unitary, omega.group(), tol)};
}

/// Smallest eigenvalue of a Hermitian element, or throws if it is not Hermitian.
inline double min_eigenvalue(const AlgElement& x, const Tolerance& tol = {}) {
    return hermitian_eig(embed(x), tol).values.back();
}

/// omega^s by functional calculus, for positive omega and 0 < s <= 1.
inline AlgElement positive_power(const AlgElement& omega, double s, const Tolerance& tol = {}) {
    if (!(s > 0.0 && s <= 1.0)) throw InvalidArgument("loewner_power: exponent must lie in (0, 1]");
    const CMatrix m = embed(omega);
    if (distance(m, m.adjoint()) > tol.zero_threshold(m.frobenius_norm()))
        throw InvalidArgument("loewner_power: omega is not self-adjoint");
    const auto eig = hermitian_eig(m, tol);
    if (eig.values.back() < -tol.zero_threshold(eig.values.front()))
        throw InvalidArgument("loewner_power: omega is not positive");
    const CMatrix p = hermitian_function(m, [s](double x) { return x > 0.0 ? std::pow(x, s) : 0.0; }, tol);
    return project(p, omega.group(), tol);
}

inline WeightInverse loewner_power(const AlgElement& omega, double s, const Tolerance& tol = {}) {
    return WeightInverse::create(positive_power(omega, s, tol), tol);
}

/// ||Gamma(omega^s) Omega_t - Omega_{t-s} (omega^s (x) omega^s)|| for 0 < s <= t <= 1,
/// where Omega_r is the cocycle of omega^r and Omega_0 = I.
inline double intertwine_residual(const AlgElement& omega, double s, double t, const Tolerance& tol = {}) {
    if (!(s > 0.0 && s <= t && t <= 1.0)) throw InvalidArgument("intertwine_residual: need 0 < s <= t <= 1");
    const AlgElement ws = positive_power(omega, s, tol);
    const AlgElement cocycle_t = build_cocycle(positive_power(omega, t, tol), tol);
    const AlgElement cocycle_ts = t - s > 0.0 ? build_cocycle(positive_power(omega, t - s, tol), tol)
                                              : AlgElement::identity(omega.group(), 2);
    return distance(coproduct(ws) * cocycle_t, cocycle_ts * tensor(ws, ws));
}

struct WeightEquivalence {
    AlgElement a;  ///< omega1 = omega2 a
    bool invertible = false;
    double smallest_singular_value = 0.0;
    double cocycle_relation_residual = 0.0;  ///< ||Gamma(a) Omega1 - Omega2 (a (x) a)||
};

inline WeightEquivalence weight_equivalence(const WeightInverse& w1, const WeightInverse& w2, const Tolerance& tol = {}) {
    detail::require_same_group(w1.group(), w2.group(), "weight_equivalence");
    WeightEquivalence r;
    r.a = project(solve(embed(w2.omega()), embed(w1.omega())), w1.group(), tol);
    const auto d = svd(embed(r.a));
    r.smallest_singular_value = d.s.back();
    r.invertible = d.s.back() > tol.zero_threshold(d.s.front());
    r.cocycle_relation_residual = distance(coproduct(r.a) * w1.cocycle(), w2.cocycle() * tensor(r.a, r.a));
    return r;
}

/// (S(omega) (x) I) Gamma(omega) <= I (x) omega.  Both sides must be self-adjoint,
/// which holds for omega central in VN(H) for a subgroup H containing its support.
inline PsdComparison swift_inequality(const AlgElement& omega, const Tolerance& tol = {}) {
    const AlgElement one = AlgElement::identity(omega.group());
    const AlgElement lhs = tensor(antipode(omega), one) * coproduct(omega);
    return psd_leq(embed(lhs), embed(tensor(one, omega)), tol);
}

}  // namespace beurling
