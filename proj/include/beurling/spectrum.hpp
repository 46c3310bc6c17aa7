#pragma once

// Gelfand spectrum of A(G, omega): the nonzero sigma in VN(G) with
//
//     Gamma(sigma) Omega = sigma (x) sigma.
//
// For finite G the solutions are exactly lambda(s) omega.  The probe searches
// for solutions numerically and matches them against these candidates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "beurling/algebra.hpp"
#include "beurling/beurling.hpp"
#include "beurling/error.hpp"
#include "beurling/matrix.hpp"
#include "beurling/random.hpp"
#include "beurling/weights.hpp"

namespace beurling {

struct SpectrumPoint {
    AlgElement sigma;
    std::optional<std::size_t> group_element;  ///< s with sigma = lambda(s) omega, when matched
    AlgElement t;                              ///< T = sigma omega^{-1}
    double residual = 0.0;                     ///< ||Gamma(sigma) Omega - sigma (x) sigma||
};

struct ProbeOptions {
    std::size_t n_starts = 200;
    std::uint64_t seed = 42;
    std::size_t max_iterations = 200;
    double damping = 1e-8;
    double step_tolerance = 1e-12;
    double residual_tolerance = 1e-9;  ///< a converged start must also solve the equation
    double zero_radius = 0.01;
    double cluster_radius = 1e-6;
    double match_tolerance = 1e-6;
    bool deflate_zero = true;  ///< solve (1 / ||sigma||^2 + 1) F = 0 so starts are not drawn to sigma = 0
};

struct SpectrumReport {
    std::vector<SpectrumPoint> candidates;
    std::vector<SpectrumPoint> probe_solutions;  ///< one per cluster, sorted canonically
    std::vector<SpectrumPoint> unmatched;
    std::vector<std::size_t> cluster_sizes;
    std::size_t converged_starts = 0;
    std::size_t zero_solutions = 0;
    std::size_t nonconvergent_starts = 0;
    bool complete = false;
};

/// ||Gamma(sigma) Omega - sigma (x) sigma||.
inline double spectrum_residual(const AlgElement& sigma, const AlgElement& cocycle) {
    return distance(coproduct(sigma) * cocycle, tensor(sigma, sigma));
}

namespace detail {

inline AlgElement omega_inverse(const AlgElement& omega, const Tolerance& tol) {
    return project(inverse(embed(omega)), omega.group(), tol);
}

}  // namespace detail

/// The |G| points lambda(s) omega.
inline std::vector<SpectrumPoint> candidates(const WeightInverse& w, const Tolerance& tol = {}) {
    const auto& g = w.group();
    const AlgElement inv = detail::omega_inverse(w.omega(), tol);
    std::vector<SpectrumPoint> out;
    for (std::size_t s = 0; s < g->order(); ++s) {
        SpectrumPoint p;
        p.sigma = AlgElement::lambda(g, s) * w.omega();
        p.group_element = s;
        p.t = p.sigma * inv;
        p.residual = spectrum_residual(p.sigma, w.cocycle());
        out.push_back(std::move(p));
    }
    return out;
}

struct PointVerification {
    double residual = 0.0;          ///< ||Gamma(sigma) Omega - sigma (x) sigma||
    double multiplicativity = 0.0;  ///< max |(sigma, u)(sigma, v) - (sigma, u ._Omega v)| over sampled pairs
};

/// Residual of the spectrum equation and of multiplicativity of the induced
/// functional omega u |-> (sigma, u) on sampled pairs.
inline PointVerification verify_point(const AlgElement& sigma, const AlgElement& cocycle, std::size_t samples = 8,
                                      std::uint64_t seed = 1) {
    PointVerification r;
    r.residual = spectrum_residual(sigma, cocycle);
    Rng rng(seed);
    for (std::size_t k = 0; k < samples; ++k) {
        const AFunction u = random_function(sigma.group(), rng);
        const AFunction v = random_function(sigma.group(), rng);
        const cplx lhs = duality_pair(sigma, u) * duality_pair(sigma, v);
        const cplx rhs = duality_pair(sigma, omega_product(u, v, cocycle));
        r.multiplicativity = std::max(r.multiplicativity, std::abs(lhs - rhs));
    }
    return r;
}

/// ||S(sigma) sigma - S(omega) omega||.
inline double antipode_invariant(const AlgElement& sigma, const AlgElement& omega) {
    return distance(antipode(sigma) * sigma, antipode(omega) * omega);
}

namespace detail {

/// Damped Gauss-Newton on F(sigma) = Gamma(sigma) Omega - sigma (x) sigma.
/// F is holomorphic in sigma, so the complex normal equations coincide with
/// the real-coordinate ones.
class SpectrumSolver {
public:
    SpectrumSolver(const AlgElement& cocycle, const ProbeOptions& opt)
        : g_(*cocycle.group()), n_(g_.order()), c_(cocycle.coeffs()), opt_(opt), left_(n_ * n_) {
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t x = 0; x < n_; ++x) left_[a * n_ + x] = g_.mul(g_.inv(a), x);
    }

    /// Returns the final iterate and whether it converged to a solution.
    /// Gauss-Newton runs in real coordinates (Re sigma, Im sigma) on
    /// M = mu F, mu = 1 / ||sigma||^2 + 1, which removes the root sigma = 0
    /// and keeps every other root of F; convergence is judged on F itself.
    std::pair<std::vector<cplx>, bool> solve(std::vector<cplx> sigma) const {
        const std::size_t n = n_, m = n * n, d = 2 * n;
        std::vector<cplx> f(m), jac(m * n), mj(m * d);
        CMatrix normal(d, d), rhs(d, 1);
        bool small_step = false;
        for (std::size_t it = 0; it < opt_.max_iterations; ++it) {
            evaluate(sigma, f, jac);
            double nn = 0.0;
            for (const auto& z : sigma) nn += std::norm(z);
            if (nn < 1e-300) return {sigma, false};
            const double mu = opt_.deflate_zero ? 1.0 / nn + 1.0 : 1.0;
            const double dmu = opt_.deflate_zero ? -2.0 / (nn * nn) : 0.0;
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t x = 0; x < n; ++x) {
                    mj[k * d + x] = mu * jac[k * n + x] + dmu * sigma[x].real() * f[k];
                    mj[k * d + n + x] = cplx(0.0, 1.0) * mu * jac[k * n + x] + dmu * sigma[x].imag() * f[k];
                }
            for (std::size_t p = 0; p < d; ++p) {
                for (std::size_t q = p; q < d; ++q) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < m; ++k) acc += (std::conj(mj[k * d + p]) * mj[k * d + q]).real();
                    normal(p, q) = acc;
                    normal(q, p) = acc;
                }
                normal(p, p) += opt_.damping;
                double acc = 0.0;
                for (std::size_t k = 0; k < m; ++k) acc += (std::conj(mj[k * d + p]) * (mu * f[k])).real();
                rhs(p, 0) = -acc;
            }
            CMatrix step;
            try {
                step = beurling::solve(normal, rhs);
            } catch (const InvalidArgument&) {
                return {sigma, false};
            }
            double step_norm = 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                const cplx dz(step(p, 0).real(), step(n + p, 0).real());
                sigma[p] += dz;
                step_norm += std::norm(dz);
            }
            step_norm = std::sqrt(step_norm);
            if (!std::isfinite(step_norm) || step_norm > 1e6) return {sigma, false};
            if (step_norm < opt_.step_tolerance) {
                small_step = true;
                break;
            }
        }
        evaluate(sigma, f, jac);
        double res = 0.0;
        for (const auto& z : f) res += std::norm(z);
        return {sigma, small_step && std::sqrt(res) <= opt_.residual_tolerance};
    }

private:
    // F_(a,b) = sum_x sigma_x c_(x^{-1} a, x^{-1} b) - sigma_a sigma_b.
    void evaluate(const std::vector<cplx>& sigma, std::vector<cplx>& f, std::vector<cplx>& jac) const {
        const std::size_t n = n_;
        std::fill(f.begin(), f.end(), cplx(0.0));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const std::size_t row = a * n + b;
                cplx acc = 0.0;
                for (std::size_t x = 0; x < n; ++x) {
                    const cplx cx = c_[left_[x * n + a] * n + left_[x * n + b]];
                    jac[row * n + x] = cx;
                    acc += sigma[x] * cx;
                }
                f[row] = acc - sigma[a] * sigma[b];
                jac[row * n + a] -= sigma[b];
                jac[row * n + b] -= sigma[a];
            }
    }

    const FiniteGroup& g_;
    std::size_t n_;
    const std::vector<cplx>& c_;
    ProbeOptions opt_;
    std::vector<std::size_t> left_;  ///< left_[x * n + a] = x^{-1} a
};

inline std::vector<cplx> unit_ball_point(std::size_t n, Rng& rng) {
    // Each coefficient uniform in the closed unit disk of C.
    std::vector<cplx> v(n);
    for (auto& z : v) z = std::polar(std::sqrt(rng.uniform()), 2.0 * std::numbers::pi * rng.uniform());
    return v;
}

inline bool coefficient_less(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
        if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
    }
    return false;
}

struct ProbeClusters {
    std::vector<std::vector<cplx>> centers;
    std::vector<std::size_t> sizes;
    std::size_t converged = 0, zero = 0, nonconvergent = 0;
};

inline ProbeClusters run_probe(const AlgElement& cocycle, const ProbeOptions& opt) {
    const SpectrumSolver solver(cocycle, opt);
    const std::size_t n = cocycle.group()->order();
    Rng rng(opt.seed);
    ProbeClusters pc;
    std::vector<std::vector<cplx>> members;
    for (std::size_t k = 0; k < opt.n_starts; ++k) {
        auto [sol, ok] = solver.solve(unit_ball_point(n, rng));
        if (!ok) {
            ++pc.nonconvergent;
            continue;
        }
        ++pc.converged;
        double nn = 0.0;
        for (const auto& z : sol) nn += std::norm(z);
        if (std::sqrt(nn) < opt.zero_radius) {
            ++pc.zero;
            continue;
        }
        bool placed = false;
        for (std::size_t c = 0; c < pc.centers.size() && !placed; ++c) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d += std::norm(sol[i] - pc.centers[c][i]);
            if (std::sqrt(d) <= opt.cluster_radius) {
                ++pc.sizes[c];
                placed = true;
            }
        }
        if (!placed) {
            pc.centers.push_back(sol);
            pc.sizes.push_back(1);
        }
    }
    std::vector<std::size_t> order(pc.centers.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return coefficient_less(pc.centers[a], pc.centers[b]); });
    ProbeClusters sorted = pc;
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted.centers[i] = pc.centers[order[i]];
        sorted.sizes[i] = pc.sizes[order[i]];
    }
    return sorted;
}

}  // namespace detail

/// Probe for solutions of the spectrum equation from random starts and match
/// every cluster against the candidates lambda(s) omega.
inline SpectrumReport completeness_probe(const WeightInverse& w, const ProbeOptions& opt = {}, const Tolerance& tol = {}) {
    SpectrumReport rep;
    rep.candidates = candidates(w, tol);
    const auto pc = detail::run_probe(w.cocycle(), opt);
    rep.converged_starts = pc.converged;
    rep.zero_solutions = pc.zero;
    rep.nonconvergent_starts = pc.nonconvergent;
    rep.cluster_sizes = pc.sizes;
    const AlgElement inv = detail::omega_inverse(w.omega(), tol);
    std::vector<std::size_t> hits(rep.candidates.size(), 0);
    for (const auto& c : pc.centers) {
        SpectrumPoint p;
        p.sigma = AlgElement(w.group(), c);
        p.t = p.sigma * inv;
        p.residual = spectrum_residual(p.sigma, w.cocycle());
        for (const auto& cand : rep.candidates)
            if (distance(cand.sigma, p.sigma) <= opt.match_tolerance) {
                p.group_element = cand.group_element;
                ++hits[*cand.group_element];
                break;
            }
        if (!p.group_element) rep.unmatched.push_back(p);
        rep.probe_solutions.push_back(std::move(p));
    }
    rep.complete = rep.unmatched.empty() &&
                   std::all_of(hits.begin(), hits.end(), [](std::size_t h) { return h == 1; });
    return rep;
}

/// Nonzero solutions of Gamma(T) = T (x) T found by the probe (Omega = I).
inline std::vector<AlgElement> grouplike_solve(const GroupPtr& g, const ProbeOptions& opt = {}) {
    const auto pc = detail::run_probe(AlgElement::identity(g, 2), opt);
    std::vector<AlgElement> out;
    for (const auto& c : pc.centers) out.emplace_back(g, c);
    return out;
}

/// Distance from x to the nearest lambda(s); returns (s, distance).
inline std::pair<std::size_t, double> nearest_group_element(const AlgElement& x) {
    std::pair<std::size_t, double> best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t s = 0; s < x.dim(); ++s) {
        const double d = distance(x, AlgElement::lambda(x.group(), s));
        if (d < best.second) best = {s, d};
    }
    return best;
}

struct ReductionReport {
    bool factorizes = false;
    std::size_t s = 0;                ///< sigma = lambda_G(s) iota_H(sigma_tilde)
    double outside_mass = 0.0;        ///< coefficient norm of lambda(s^{-1}) sigma off the image of H
    double subgroup_residual = 0.0;   ///< spectrum residual of sigma_tilde for (H, Omega_H)
    AlgElement sigma_tilde;
};

/// Factor sigma as lambda_G(s) iota_H(sigma_tilde) and check sigma_tilde
/// against the subgroup cocycle.
inline ReductionReport reduction_check(const AlgElement& sigma, const GroupEmbedding& e, const AlgElement& cocycle_h,
                                       const Tolerance& tol = {}) {
    detail::require_same_group(sigma.group(), e.target, "reduction_check");
    const auto& g = *e.target;
    std::vector<bool> in_image(g.order(), false);
    for (auto x : e.map) in_image[x] = true;
    ReductionReport best;
    best.outside_mass = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < g.order(); ++s) {
        const AlgElement shifted = AlgElement::lambda(e.target, g.inv(s)) * sigma;
        double out = 0.0;
        for (std::size_t x = 0; x < g.order(); ++x)
            if (!in_image[x]) out += std::norm(shifted[x]);
        out = std::sqrt(out);
        if (out < best.outside_mass) {
            best.outside_mass = out;
            best.s = s;
            best.sigma_tilde = AlgElement::zero(e.source);
            for (std::size_t k = 0; k < e.map.size(); ++k) best.sigma_tilde[k] = shifted[e.map[k]];
        }
    }
    best.subgroup_residual = spectrum_residual(best.sigma_tilde, cocycle_h);
    best.factorizes = best.outside_mass <= tol.zero_threshold(sigma.norm()) &&
                      best.subgroup_residual <= tol.rel_eps && best.sigma_tilde.norm() > 0.0;
    return best;
}

/// ||(T* T)^{1/2} - I|| for T = sigma omega^{-1}.
inline double polar_modulus_defect(const AlgElement& t, const Tolerance& tol = {}) {
    const auto p = polar_complete(embed(t), tol);
    return distance(p.positive, CMatrix::identity(t.dim())) / std::sqrt(static_cast<double>(t.dim()));
}

}  // namespace beurling
