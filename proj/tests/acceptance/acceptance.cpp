// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "beurling/beurling.hpp"
#include "beurling/catalog.hpp"
#include "beurling/classify.hpp"
#include "beurling/spectrum.hpp"
#include "beurling/weights.hpp"

using namespace beurling;

namespace {

/// Accumulates the first few failure messages of one criterion.
class Criterion {
public:
    void require(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (notes_.size() < 5) notes_.push_back(what);
    }
    void require_le(double value, double bound, const std::string& what) {
        std::ostringstream os;
        os << what << ": " << value << " > " << bound;
        require(value <= bound, os.str());
    }
    void require_near(double value, double expected, double tol, const std::string& what) {
        std::ostringstream os;
        os << what << ": " << value << " vs " << expected;
        require(std::abs(value - expected) <= tol, os.str());
    }
    bool ok() const { return failures_ == 0; }
    std::string summary() const {
        std::ostringstream os;
        os << failures_ << " failure(s)";
        for (const auto& n : notes_) os << "; " << n;
        return os.str();
    }
    void note(const std::string& s) { info_ = s; }
    const std::string& info() const { return info_; }

private:
    std::size_t failures_ = 0;
    std::vector<std::string> notes_;
    std::string info_;
};

struct Pair {
    std::string group;
    std::string weight;
    ResolvedWeight rw;
};

const std::vector<Pair>& catalog_pairs() {
    static const std::vector<Pair> pairs = [] {
        std::vector<Pair> out;
        for (const auto& name : catalog_group_names()) {
            const auto g = catalog_group(name);
            for (const auto& id : catalog_weight_ids(*g)) out.push_back({name, id, resolve_weight(*catalog_weight(g, id), g)});
        }
        return out;
    }();
    return pairs;
}

std::string tag(const Pair& p) { return p.group + "/" + p.weight; }

// 1. Z2 worked example. Hand-computed with the 2x2 DFT: multipliers of omega
// are 1/w = (1, 1/2), so omega = (3/4, 1/4); Omega has multipliers
// w(i + j) / (w(i) w(j)); Gamma(omega omega*) - omega omega* (x) omega omega*
// has multipliers (1 - 1, 1/4 - 1/4, 1/4 - 1/4, 1 - 1/16).
void criterion_1(Criterion& c) {
    const auto g = catalog_group("Z2");
    const auto w = weight_from_dual_function(DualWeightFunction::create(g, {1.0, 2.0}));
    c.require_near(w.omega()[0].real(), 0.75, 1e-10, "omega_e");
    c.require_near(w.omega()[1].real(), 0.25, 1e-10, "omega_s");
    c.require_le(std::abs(w.omega()[0].imag()) + std::abs(w.omega()[1].imag()), 1e-10, "omega imaginary part");
    const auto mult = abelian_multipliers(w.cocycle());
    const std::vector<double> expected{1.0, 1.0, 1.0, 0.25};
    c.require(mult.size() == 4, "cocycle multiplier count");
    for (std::size_t i = 0; i < std::min<std::size_t>(4, mult.size()); ++i)
        c.require_le(std::abs(mult[i] - expected[i]), 1e-10, "Omega multiplier " + std::to_string(i));
    c.require_near(op_norm(w.cocycle()), 1.0, 1e-10, "||Omega||");
    const auto rep = verify_weight_inverse(w.omega());
    c.require(rep.eigenvalues.size() == 4, "(iw) spectrum size");
    if (rep.eigenvalues.size() == 4) {
        c.require_near(rep.eigenvalues.front(), 15.0 / 16.0, 1e-10, "(iw) top eigenvalue");
        c.require_near(rep.eigenvalues.back(), 0.0, 1e-10, "(iw) bottom eigenvalue");
    }
    c.require_near(rep.margin, 0.0, 1e-10, "(iw) margin");
}

// 2. Weight-inverse invariants for every catalog pair.
void criterion_2(Criterion& c) {
    const Tolerance tol;
    std::size_t n = 0;
    for (const auto& p : catalog_pairs()) {
        if (p.rw.group->order() > 16) continue;
        ++n;
        const auto inv = check_invariants(p.rw.weight, tol);
        c.require(inv.iw_holds(tol), tag(p) + " (iw)");
        c.require(inv.kernel.trivial, tag(p) + " kernel");
        c.require(inv.weight_equation_holds(tol), tag(p) + " weight equation");
        c.require(inv.contractions_hold(tol), tag(p) + " contraction");
        c.require(inv.two_cocycle_holds(tol), tag(p) + " 2-cocycle");
        c.require_le(inv.symmetry, 1e-12, tag(p) + " symmetry");
        c.require_le(inv.two_cocycle, 1e-9, tag(p) + " 2-cocycle residual");
    }
    c.require(n >= 15, "fewer than 15 catalog pairs");
    c.note(std::to_string(n) + " pairs");
}

// 3. Spectrum completeness.
void criterion_3(Criterion& c) {
    ProbeOptions opt;
    opt.n_starts = 200;
    opt.seed = 42;
    std::size_t extended = 0;
    for (const auto& p : catalog_pairs()) {
        const auto& w = p.rw.weight;
        const std::size_t order = p.rw.group->order();
        const auto rep = completeness_probe(w, opt);
        c.require(rep.candidates.size() == order, tag(p) + " candidate count");
        for (const auto& cand : rep.candidates) c.require_le(cand.residual, 1e-10, tag(p) + " candidate residual");
        c.require(rep.probe_solutions.size() == order,
                  tag(p) + " clusters " + std::to_string(rep.probe_solutions.size()) + " != " + std::to_string(order));
        c.require(rep.complete && opt.match_tolerance <= 1e-6, tag(p) + " clusters do not match candidates");
        for (const auto& s : rep.probe_solutions)
            c.require_le(antipode_invariant(s.sigma, w.omega()), 1e-9, tag(p) + " antipode invariant");
        if (p.rw.extension) {
            ++extended;
            for (const auto& cand : rep.candidates) {
                const auto red = reduction_check(cand.sigma, p.rw.extension->embedding, p.rw.extension->cocycle_h);
                c.require(red.factorizes, tag(p) + " reduction");
            }
        }
    }
    c.require(extended > 0, "no extended weights in the catalog");
    c.note(std::to_string(catalog_pairs().size()) + " pairs, " + std::to_string(extended) + " extended");
}

// 4. Group-like solutions are exactly lambda(G).
void criterion_4(Criterion& c) {
    ProbeOptions opt;
    opt.n_starts = 500;
    opt.seed = 7;
    for (const char* name : {"Z4", "Z6", "S3", "D4"}) {
        const auto g = catalog_group(name);
        const auto sols = grouplike_solve(g, opt);
        c.require(sols.size() == g->order(), std::string(name) + " solution count " + std::to_string(sols.size()));
        std::set<std::size_t> seen;
        for (const auto& s : sols) {
            const auto [elem, d] = nearest_group_element(s);
            c.require_le(d, 1e-6, std::string(name) + " solution is not a permutation");
            seen.insert(elem);
        }
        c.require(seen.size() == g->order(), std::string(name) + " missing group elements");
    }
}

// 5. Classification round trip.
void criterion_5(Criterion& c) {
    std::size_t total = 0;
    for (const auto& name : catalog_group_names()) {
        const auto g = catalog_group(name);
        const auto subs = enumerate_subgroups(g);
        c.require(subs.size() == oracle::brute_force_subgroups(*g).size(), name + " subgroup count");
        total += subs.size();
        Rng rng = Rng(2024).split(name);
        for (const auto& h : subs)
            for (int trial = 0; trial < 20; ++trial) {
                const auto t = random_positive_invertible(g, rng);
                const auto u = random_unitary(g, rng);
                const auto d = decompose(synthesize(h, t, u).second);
                c.require(d.h == h, name + " subgroup not recovered");
                c.require_le(d.reconstruction_residual, 1e-9, name + " reconstruction");
            }
    }
    c.require(total >= 25, "fewer than 25 subgroups");
    for (const auto& p : catalog_pairs()) {
        const auto d = decompose(p.rw.weight.omega());
        c.require(d.h.size() == 1, tag(p) + " H != {e}");
        c.require(d.invertible, tag(p) + " not certified invertible");
    }
    c.note(std::to_string(total) + " subgroups x 20 trials");
}

// 6. Hadamard calculus. For w = (5/8, 3/8) on Z2 the character multipliers
// are (1, 1/4); w * w = (25/64, 9/64) has multipliers (17/32, 1/4) and
// alpha = h(S(w) w) = 17/32. Hence w*w - alpha w -> (0, 15/128) and
// w - w*w -> (15/32, 0).
void criterion_6(Criterion& c) {
    const auto z2 = catalog_group("Z2");
    const AlgElement w(z2, {5.0 / 8.0, 3.0 / 8.0});
    const auto r = hadamard_inequalities(w);
    c.require_near(r.alpha, 17.0 / 32.0, 1e-14, "alpha");
    auto sorted = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    const auto lo = sorted(r.lower_eigenvalues), up = sorted(r.upper_eigenvalues);
    c.require(lo.size() == 2 && up.size() == 2, "eigenvalue counts");
    if (lo.size() == 2 && up.size() == 2) {
        c.require_near(lo[0], 0.0, 1e-10, "w*w - alpha w, smaller");
        c.require_near(lo[1], 15.0 / 128.0, 1e-10, "w*w - alpha w, larger");
        c.require_near(up[0], 0.0, 1e-10, "w - w*w, smaller");
        c.require_near(up[1], 15.0 / 32.0, 1e-10, "w - w*w, larger");
    }
    for (const auto& name : catalog_group_names()) {
        const auto g = catalog_group(name);
        Rng rng = Rng(606).split(name);
        for (int i = 0; i < 100; ++i) {
            const auto o1 = random_partial_weight_inverse(g, rng), o2 = random_partial_weight_inverse(g, rng);
            const auto w1 = o1 * o1.adjoint(), w2 = o2 * o2.adjoint();
            c.require(hadamard_closure(w1, w2).holds, name + " closure");
            c.require_le(hadamard_antipode_residual(w1), 1e-9, name + " antipode invariance");
            c.require_le(hadamard_antipode_residual(random_element(g, rng)), 1e-9, name + " antipode invariance");
        }
    }
}

// 7. Algebra laws, 50 random instances per catalog group.
void criterion_7(Criterion& c) {
    constexpr double kTol = 1e-9;
    for (const auto& name : catalog_group_names()) {
        const auto g = catalog_group(name);
        Rng rng = Rng(707).split(name);
        c.require_le(pentagon_residual(*g), kTol, name + " pentagon");
        for (int i = 0; i < 50; ++i) {
            const auto x = random_element(g, rng), y = random_element(g, rng);
            c.require_le(distance(coproduct(x * y), coproduct(x) * coproduct(y)), kTol, name + " Gamma hom");
            const auto gx = coproduct(x);
            c.require_le(distance(coproduct(gx, 0), coproduct(gx, 1)), kTol, name + " coassociativity");
            const cplx hx = haar_trace(x.adjoint() * x);
            c.require(hx.real() > 0.0, name + " trace not faithful");
            c.require_le(std::abs(hx - x.norm() * x.norm()), kTol, name + " trace of x* x");
            c.require_le(std::abs(haar_trace(x * y) - haar_trace(y * x)), kTol, name + " trace property");
            c.require_le(distance(antipode(antipode(x)), x), kTol, name + " S^2");
            const auto u = as_function(x), v = as_function(y);
            c.require_le(ag_norm(u * v) - ag_norm(u) * ag_norm(v), kTol, name + " ag_norm submultiplicative");
        }
    }
    for (const auto& p : catalog_pairs()) {
        const TwistedAlgebra alg(p.rw.weight);
        const CMatrix om = embed(p.rw.weight.omega());
        Rng rng = Rng(708).split(tag(p));
        for (int i = 0; i < 50; ++i) {
            const auto u = random_function(p.rw.group, rng), v = random_function(p.rw.group, rng),
                       w = random_function(p.rw.group, rng);
            const auto uv = alg.product(u, v);
            c.require_le(alg.product(uv, w).sup_distance(alg.product(u, alg.product(v, w))), kTol, tag(p) + " assoc");
            c.require_le(uv.sup_distance(alg.product(v, u)), kTol, tag(p) + " commutativity");
            c.require_le(distance(alg.represent(uv), alg.represent(u) * alg.represent(v)), kTol,
                         tag(p) + " lambda_Omega hom");
            c.require_le(distance(om * alg.represent(u), check_multiplier(alg.to_weighted(u)) * om), kTol,
                         tag(p) + " omega lambda_Omega");
        }
    }
}

// 8. Closed-form A(G) norm against the dual-sup oracle.
void criterion_8(Criterion& c) {
    double worst = 0.0;
    for (const char* name : {"Z2", "Z3"}) {
        const auto g = catalog_group(name);
        Rng rng = Rng(808).split(name);
        for (int i = 0; i < 100; ++i) {
            const auto f = random_function(g, rng);
            const double d = std::abs(ag_norm(f) - oracle::ag_norm_dual_sup(f, 50, 9000 + i));
            worst = std::max(worst, d);
            c.require_le(d, 1e-6, std::string(name) + " ag_norm vs oracle");
        }
    }
    std::ostringstream os;
    os << "max deviation " << worst;
    c.note(os.str());
}

// 9. Swift inequality and cocycle normality for central weights, and for
// weights central in VN(H) of a subgroup H carrying their support.
void criterion_9(Criterion& c) {
    std::size_t central = 0, extended = 0;
    for (const auto& p : catalog_pairs()) {
        if (!p.rw.central && !p.rw.extended_central) continue;
        ++(p.rw.central ? central : extended);
        const auto s = swift_inequality(p.rw.weight.omega());
        c.require(s.margin >= -1e-10, tag(p) + " swift margin " + std::to_string(s.margin));
        c.require_le(cocycle_normality_residual(p.rw.weight.cocycle()), 1e-10, tag(p) + " normality");
    }
    c.require(central > 0, "no central weights");
    c.note(std::to_string(central) + " central, " + std::to_string(extended) + " extended-central");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
        {"1 Z2 worked example", criterion_1},
        {"2 weight-inverse invariants", criterion_2},
        {"3 spectrum completeness", criterion_3},
        {"4 group-like solutions", criterion_4},
        {"5 classification round trip", criterion_5},
        {"6 Hadamard calculus", criterion_6},
        {"7 algebra laws", criterion_7},
        {"8 A(G) norm oracle", criterion_8},
        {"9 central weights", criterion_9},
    };
    bool all = true;
    for (const auto& [name, body] : criteria) {
        Criterion c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        all = all && c.ok();
        std::cout << (c.ok() ? "PASS " : "FAIL ") << name;
        if (!c.info().empty()) std::cout << " (" << c.info() << ")";
        if (!c.ok()) std::cout << ": " << c.summary();
        std::cout << "  [" << std::fixed << std::setprecision(1) << secs << " s]" << std::defaultfloat << std::endl;
    }
    return all ? 0 : 1;
}
