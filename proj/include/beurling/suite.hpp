#pragma once

// Batch verification over a (group, weight) grid and report emission.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "beurling/beurling.hpp"
#include "beurling/catalog.hpp"
#include "beurling/classify.hpp"
#include "beurling/error.hpp"
#include "beurling/spectrum.hpp"
#include "beurling/weights.hpp"

namespace beurling {

/// Bad selectors, flags or files; maps to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> s{"algebra", "beurling", "classify", "spectrum", "weights"};
    return s;
}

struct SuiteConfig {
    std::vector<std::string> groups{"all"};
    std::vector<std::string> weights{"all"};
    std::vector<std::string> suites{suite_names()};
    Tolerance tol;
    std::size_t probe_starts = 200;
    std::uint64_t seed = 42;
    std::string out_dir = ".";
    std::string format = "json";
    std::vector<std::string> group_files;
    std::vector<std::string> weight_files;
    std::size_t random_instances = 10;   ///< random inputs per algebraic law
    std::size_t roundtrip_trials = 5;    ///< synthesize -> decompose trials per subgroup

    nlohmann::json to_json() const {
        return {{"groups", groups},
                {"weights", weights},
                {"suites", suites},
                {"tol_abs", tol.abs_eps},
                {"tol_rel", tol.rel_eps},
                {"probe_starts", probe_starts},
                {"seed", seed},
                {"format", format},
                {"group_files", group_files},
                {"weight_files", weight_files},
                {"random_instances", random_instances},
                {"roundtrip_trials", roundtrip_trials}};
    }
};

struct CheckRecord {
    std::string id;
    std::string anchor;
    std::string group;
    std::string weight;  ///< "-" for group-level checks
    bool pass = false;
    double margin = 0.0;  ///< eigenvalue margin for inequalities, residual for identities
    double runtime_ms = 0.0;
    std::string error;   ///< exception text when the check could not be evaluated
};

struct SuiteReport {
    nlohmann::json config;
    std::vector<CheckRecord> checks;

    std::size_t pass_count() const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.pass; }));
    }
    std::size_t fail_count() const { return checks.size() - pass_count(); }
    bool all_pass() const { return fail_count() == 0; }
};

struct CheckInfo {
    std::string id;
    std::string anchor;
};

/// Check ids and the formula each one verifies.
inline const std::vector<CheckInfo>& check_catalog() {
    static const std::vector<CheckInfo> c{
        {"algebra.antipode", "S(S(x)) = x, S(xy) = S(y) S(x)"},
        {"algebra.ag_norm_submult", "||uv||_A(G) <= ||u||_A(G) ||v||_A(G), ||u|| = |G|^-1 ||Lambda(u)||_1"},
        {"algebra.coassociativity", "(Gamma (x) iota) Gamma = (iota (x) Gamma) Gamma"},
        {"algebra.coproduct_hom", "Gamma(xy) = Gamma(x) Gamma(y)"},
        {"algebra.grouplike", "Gamma(T) = T (x) T, T != 0  =>  T = lambda(s)"},
        {"algebra.pentagon", "W23 W12 = W12 W13 W23"},
        {"algebra.trace", "h(x* x) = sum |x_g|^2 > 0 for x != 0, h(xy) = h(yx)"},
        {"beurling.associativity", "(u ._Omega v) ._Omega w = u ._Omega (v ._Omega w)"},
        {"beurling.commutativity", "u ._Omega v = v ._Omega u"},
        {"beurling.isometry", "omega (u ._Omega v) = (omega u)(omega v)"},
        {"beurling.lambda_omega_hom", "lambda_Omega(u ._Omega v) = lambda_Omega(u) lambda_Omega(v)"},
        {"beurling.omegalambda", "omega lambda_Omega(f) = M_{(omega f)^check} omega"},
        {"beurling.submultiplicative", "||u ._Omega v||_A(G) <= ||u||_A(G) ||v||_A(G)"},
        {"classify.decompose", "weight inverse omega = P_H T P_H U with H = {e}, omega invertible"},
        {"classify.grouplike", "(P_H (x) I) Gamma(P_H) = P_H (x) P_H, S(P_H) = P_H"},
        {"classify.hadamard", "alpha w <= w * w <= w, alpha = h(S(w) w), w = omega omega*"},
        {"classify.predual", "f = w^ and f - f^2 positive definite, f . w again s.p.w.i."},
        {"classify.roundtrip", "decompose(alpha P_H T P_H U) recovers H"},
        {"spectrum.antipode", "S(sigma) sigma = S(omega) omega on every probe cluster"},
        {"spectrum.candidates", "Gamma(lambda(s) omega) Omega = lambda(s) omega (x) lambda(s) omega"},
        {"spectrum.polar_modulus", "T = sigma omega^-1 has |T| = I"},
        {"spectrum.probe", "every solution of Gamma(sigma) Omega = sigma (x) sigma, sigma != 0, is some lambda(s) omega"},
        {"spectrum.reduction", "sigma = lambda_G(s) iota_H(sigma_tilde), sigma_tilde in spec(H, Omega_H)"},
        {"weights.contraction", "||omega|| <= 1, ||Omega|| <= 1"},
        {"weights.iw", "omega omega* (x) omega omega* <= Gamma(omega omega*)"},
        {"weights.kernel", "ker omega = ker omega* = {0}"},
        {"weights.normality", "Omega Omega* = Omega* Omega"},
        {"weights.resolve", "weight description resolves to a weight inverse"},
        {"weights.swift", "(S(omega) (x) I) Gamma(omega) <= I (x) omega"},
        {"weights.symmetry", "flip(Omega) = Omega"},
        {"weights.two_cocycle", "(iota (x) Gamma)(Omega)(I (x) Omega) = (Gamma (x) iota)(Omega)(Omega (x) I)"},
        {"weights.weight_equation", "Gamma(omega) Omega = omega (x) omega"},
    };
    return c;
}

inline const std::string& check_anchor(const std::string& id) {
    for (const auto& c : check_catalog())
        if (c.id == id) return c.anchor;
    throw InvalidArgument("unknown check id '" + id + "'");
}

namespace detail {

struct GridEntry {
    GroupPtr group;
    std::vector<WeightSpec> weights;
};

inline bool selected(const std::vector<std::string>& sel, const std::string& id) {
    return std::find(sel.begin(), sel.end(), "all") != sel.end() || std::find(sel.begin(), sel.end(), id) != sel.end();
}

/// Resolve groups and weight selectors into the (group, weights) grid.
inline std::vector<GridEntry> build_grid(const SuiteConfig& cfg) {
    std::map<std::string, GroupPtr> named;
    std::vector<std::string> order;
    auto add = [&](const GroupPtr& g) {
        if (!named.count(g->name())) order.push_back(g->name());
        named[g->name()] = g;
    };
    if (cfg.groups.empty()) throw ConfigError("no groups selected");
    std::map<std::string, GroupPtr> from_files;
    for (const auto& path : cfg.group_files) {
        try {
            const auto g = share(load_cayley(path));
            from_files[g->name()] = g;
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("group file: ") + e.what());
        }
    }
    const auto& cat = catalog_group_names();
    for (const auto& name : cfg.groups) {
        if (name == "all") {
            for (const auto& c : cat) add(catalog_group(c));
        } else if (from_files.count(name)) {
            add(from_files[name]);
        } else if (std::find(cat.begin(), cat.end(), name) != cat.end()) {
            add(catalog_group(name));
        } else {
            throw ConfigError("unknown group '" + name + "'");
        }
    }
    // Groups supplied by file are always part of the grid.
    for (const auto& [name, g] : from_files) add(g);
    std::vector<WeightSpec> file_weights;
    for (const auto& path : cfg.weight_files) {
        try {
            for (auto& w : load_weight_file(path)) file_weights.push_back(std::move(w));
        } catch (const Error& e) {
            throw ConfigError(std::string("weight file: ") + e.what());
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("weight file: ") + e.what());
        }
    }
    for (const auto& w : file_weights)
        if (!from_files.count(w.group) && std::find(cat.begin(), cat.end(), w.group) == cat.end())
            throw ConfigError("weight '" + w.id + "' refers to unknown group '" + w.group + "'");

    if (cfg.weights.empty()) throw ConfigError("no weights selected");
    std::set<std::string> used;
    std::vector<GridEntry> grid;
    for (const auto& name : order) {
        GridEntry e{named[name], {}};
        for (const auto& id : catalog_weight_ids(*e.group)) {
            if (!selected(cfg.weights, id)) continue;
            if (auto spec = catalog_weight(e.group, id)) {
                e.weights.push_back(*spec);
                used.insert(id);
            }
        }
        for (const auto& w : file_weights)
            if (w.group == name && selected(cfg.weights, w.id)) {
                e.weights.push_back(w);
                used.insert(w.id);
            }
        grid.push_back(std::move(e));
    }
    for (const auto& w : cfg.weights)
        if (w != "all" && !used.count(w)) throw ConfigError("weight selector '" + w + "' matches no selected group");
    std::size_t pairs = 0;
    for (const auto& e : grid) pairs += e.weights.size();
    if (pairs == 0) throw ConfigError("selectors resolve to no (group, weight) pair");
    return grid;
}

/// Collects check records; each check body returns (pass, margin).
class Recorder {
public:
    explicit Recorder(std::vector<CheckRecord>& out) : out_(out) {}

    void run(const std::string& id, const std::string& group, const std::string& weight,
             const std::function<std::pair<bool, double>()>& body) {
        CheckRecord r{id, check_anchor(id), group, weight, false, 0.0, 0.0, {}};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            std::tie(r.pass, r.margin) = body();
        } catch (const VerificationError& e) {
            r.error = e.what();
            r.margin = e.residual();
        } catch (const std::exception& e) {
            r.error = e.what();
            r.margin = std::numeric_limits<double>::quiet_NaN();
        }
        r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out_.push_back(std::move(r));
    }

private:
    std::vector<CheckRecord>& out_;
};

inline Rng cell_rng(const SuiteConfig& cfg, const std::string& suite, const std::string& group, const std::string& weight) {
    return Rng(cfg.seed).split(suite).split(group).split(weight);
}

inline ProbeOptions probe_options(const SuiteConfig& cfg) {
    ProbeOptions opt;
    opt.n_starts = cfg.probe_starts;
    opt.seed = cfg.seed;
    return opt;
}

inline void algebra_suite(const SuiteConfig& cfg, const GroupPtr& g, Recorder& rec) {
    const std::string& gn = g->name();
    const Tolerance& tol = cfg.tol;
    const std::size_t k = cfg.random_instances;
    auto rng = cell_rng(cfg, "algebra", gn, "-");
    std::vector<AlgElement> xs, ys;
    for (std::size_t i = 0; i < k; ++i) {
        xs.push_back(random_element(g, rng));
        ys.push_back(random_element(g, rng));
    }
    auto worst = [&](const std::function<double(const AlgElement&, const AlgElement&)>& f) {
        double w = 0.0;
        for (std::size_t i = 0; i < k; ++i) w = std::max(w, f(xs[i], ys[i]));
        return w;
    };
    rec.run("algebra.coproduct_hom", gn, "-", [&] {
        const double r = worst([](const auto& x, const auto& y) { return distance(coproduct(x * y), coproduct(x) * coproduct(y)); });
        return std::pair{r <= tol.rel_eps, r};
    });
    rec.run("algebra.coassociativity", gn, "-", [&] {
        const double r = worst([](const auto& x, const auto&) {
            return distance(coproduct(coproduct(x), 0), coproduct(coproduct(x), 1));
        });
        return std::pair{r <= tol.rel_eps, r};
    });
    rec.run("algebra.pentagon", gn, "-", [&] {
        const double r = pentagon_residual(*g);
        return std::pair{r <= tol.rel_eps, r};
    });
    rec.run("algebra.trace", gn, "-", [&] {
        double r = 0.0;
        bool faithful = true;
        for (std::size_t i = 0; i < k; ++i) {
            const cplx hx = haar_trace(xs[i].adjoint() * xs[i]);
            faithful = faithful && hx.real() > 0.0;
            r = std::max({r, std::abs(hx - xs[i].norm() * xs[i].norm()),
                          std::abs(haar_trace(xs[i] * ys[i]) - haar_trace(ys[i] * xs[i]))});
        }
        return std::pair{faithful && r <= tol.rel_eps, r};
    });
    rec.run("algebra.antipode", gn, "-", [&] {
        const double r = worst([](const auto& x, const auto& y) {
            return std::max(distance(antipode(antipode(x)), x), distance(antipode(x * y), antipode(y) * antipode(x)));
        });
        return std::pair{r <= tol.rel_eps, r};
    });
    rec.run("algebra.ag_norm_submult", gn, "-", [&] {
        double slack = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            const auto u = as_function(xs[i]), v = as_function(ys[i]);
            slack = std::min(slack, ag_norm(u) * ag_norm(v) - ag_norm(u * v));
        }
        return std::pair{slack >= -tol.rel_eps, slack};
    });
    rec.run("algebra.grouplike", gn, "-", [&] {
        const auto sols = grouplike_solve(g, probe_options(cfg));
        std::set<std::size_t> seen;
        double worst_dist = 0.0;
        for (const auto& s : sols) {
            const auto [elem, d] = nearest_group_element(s);
            seen.insert(elem);
            worst_dist = std::max(worst_dist, d);
        }
        const bool ok = sols.size() == g->order() && seen.size() == g->order() && worst_dist <= 1e-6;
        return std::pair{ok, worst_dist};
    });
}

inline void weights_suite(const SuiteConfig& cfg, const ResolvedWeight& rw, Recorder& rec) {
    const std::string& gn = rw.group->name();
    const std::string& wn = rw.spec.id;
    const Tolerance& tol = cfg.tol;
    const auto inv = check_invariants(rw.weight, tol);
    rec.run("weights.iw", gn, wn, [&] { return std::pair{inv.iw_holds(tol), inv.iw_margin}; });
    rec.run("weights.kernel", gn, wn, [&] {
        return std::pair{inv.kernel.trivial, std::min(inv.kernel.omega, inv.kernel.omega_adjoint)};
    });
    rec.run("weights.weight_equation", gn, wn, [&] { return std::pair{inv.weight_equation_holds(tol), inv.weight_equation}; });
    rec.run("weights.contraction", gn, wn, [&] {
        return std::pair{inv.contractions_hold(tol), 1.0 - std::max(inv.cocycle_op_norm, inv.omega_op_norm)};
    });
    rec.run("weights.two_cocycle", gn, wn, [&] { return std::pair{inv.two_cocycle_holds(tol), inv.two_cocycle}; });
    rec.run("weights.symmetry", gn, wn, [&] {
        return std::pair{inv.symmetry <= tol.zero_threshold(rw.weight.cocycle().norm()), inv.symmetry};
    });
    // Both hold for omega central in VN(H), H a subgroup containing its support; iota_H carries them to G.
    if (rw.central || rw.extended_central) {
        rec.run("weights.normality", gn, wn, [&] {
            const double r = cocycle_normality_residual(rw.weight.cocycle());
            return std::pair{r <= tol.abs_eps, r};
        });
        rec.run("weights.swift", gn, wn, [&] {
            const auto c = swift_inequality(rw.weight.omega(), tol);
            return std::pair{c.holds, c.margin};
        });
    }
}

inline void beurling_suite(const SuiteConfig& cfg, const ResolvedWeight& rw, Recorder& rec) {
    const std::string& gn = rw.group->name();
    const std::string& wn = rw.spec.id;
    const Tolerance& tol = cfg.tol;
    const TwistedAlgebra alg(rw.weight);
    auto rng = cell_rng(cfg, "beurling", gn, wn);
    struct Triple {
        AFunction u, v, w;
    };
    std::vector<Triple> t;
    for (std::size_t i = 0; i < cfg.random_instances; ++i)
        t.push_back({random_function(rw.group, rng), random_function(rw.group, rng), random_function(rw.group, rng)});
    auto worst = [&](const std::function<double(const Triple&)>& f) {
        double r = 0.0;
        for (const auto& x : t) r = std::max(r, f(x));
        return std::pair{r <= tol.rel_eps, r};
    };
    rec.run("beurling.associativity", gn, wn, [&] {
        return worst([&](const Triple& x) {
            return alg.product(alg.product(x.u, x.v), x.w).sup_distance(alg.product(x.u, alg.product(x.v, x.w)));
        });
    });
    rec.run("beurling.commutativity", gn, wn, [&] {
        return worst([&](const Triple& x) { return alg.product(x.u, x.v).sup_distance(alg.product(x.v, x.u)); });
    });
    rec.run("beurling.isometry", gn, wn, [&] {
        return worst([&](const Triple& x) {
            return alg.to_weighted(alg.product(x.u, x.v)).sup_distance(alg.to_weighted(x.u) * alg.to_weighted(x.v));
        });
    });
    rec.run("beurling.submultiplicative", gn, wn, [&] {
        double slack = std::numeric_limits<double>::infinity();
        for (const auto& x : t) slack = std::min(slack, alg.norm(x.u) * alg.norm(x.v) - alg.norm(alg.product(x.u, x.v)));
        return std::pair{slack >= -tol.rel_eps, slack};
    });
    rec.run("beurling.lambda_omega_hom", gn, wn, [&] {
        return worst([&](const Triple& x) {
            return distance(alg.represent(alg.product(x.u, x.v)), alg.represent(x.u) * alg.represent(x.v));
        });
    });
    rec.run("beurling.omegalambda", gn, wn, [&] {
        const CMatrix om = embed(rw.weight.omega());
        return worst([&](const Triple& x) {
            return distance(om * alg.represent(x.u), check_multiplier(alg.to_weighted(x.u)) * om);
        });
    });
}

inline void spectrum_suite(const SuiteConfig& cfg, const ResolvedWeight& rw, Recorder& rec) {
    const std::string& gn = rw.group->name();
    const std::string& wn = rw.spec.id;
    const Tolerance& tol = cfg.tol;
    const auto rep = completeness_probe(rw.weight, probe_options(cfg), tol);
    rec.run("spectrum.candidates", gn, wn, [&] {
        double r = 0.0;
        for (const auto& c : rep.candidates) r = std::max(r, c.residual);
        return std::pair{rep.candidates.size() == rw.group->order() && r <= tol.abs_eps, r};
    });
    rec.run("spectrum.probe", gn, wn, [&] {
        const double excess = static_cast<double>(rep.probe_solutions.size()) - static_cast<double>(rw.group->order());
        return std::pair{rep.complete && excess == 0.0, excess};
    });
    rec.run("spectrum.antipode", gn, wn, [&] {
        double r = 0.0;
        for (const auto& p : rep.probe_solutions) r = std::max(r, antipode_invariant(p.sigma, rw.weight.omega()));
        return std::pair{!rep.probe_solutions.empty() && r <= tol.rel_eps, r};
    });
    rec.run("spectrum.polar_modulus", gn, wn, [&] {
        double r = 0.0;
        for (const auto& c : rep.candidates) r = std::max(r, polar_modulus_defect(c.t, tol));
        return std::pair{r <= tol.rel_eps, r};
    });
    if (rw.extension) {
        rec.run("spectrum.reduction", gn, wn, [&] {
            bool ok = true;
            double r = 0.0;
            for (const auto& c : rep.candidates) {
                const auto red = reduction_check(c.sigma, rw.extension->embedding, rw.extension->cocycle_h, tol);
                ok = ok && red.factorizes;
                r = std::max({r, red.outside_mass, red.subgroup_residual});
            }
            return std::pair{ok, r};
        });
    }
}

inline void classify_weight_suite(const SuiteConfig& cfg, const ResolvedWeight& rw, Recorder& rec) {
    const std::string& gn = rw.group->name();
    const std::string& wn = rw.spec.id;
    const Tolerance& tol = cfg.tol;
    rec.run("classify.decompose", gn, wn, [&] {
        const auto d = decompose(rw.weight.omega(), tol);
        return std::pair{d.h.size() == 1 && d.invertible && d.reconstruction_residual <= tol.rel_eps,
                         d.reconstruction_residual};
    });
    const AlgElement w = rw.weight.omega() * rw.weight.omega().adjoint();
    rec.run("classify.hadamard", gn, wn, [&] {
        const auto r = hadamard_inequalities(w, tol);
        return std::pair{r.holds, std::min(r.lower_margin, r.upper_margin)};
    });
    rec.run("classify.predual", gn, wn, [&] {
        const auto r = predual_weight_check(w, tol);
        const double m = std::min({r.f_margin, r.f_minus_square_margin, r.action.positivity_margin,
                                   r.action.inequality_margin});
        return std::pair{r.holds, m};
    });
}

inline void classify_group_suite(const SuiteConfig& cfg, const GroupPtr& g, Recorder& rec) {
    const std::string& gn = g->name();
    const Tolerance& tol = cfg.tol;
    const auto subs = enumerate_subgroups(g);
    rec.run("classify.grouplike", gn, "-", [&] {
        bool ok = true;
        double r = 0.0;
        for (const auto& h : subs) {
            const auto c = grouplike_projection_check(AlgElement::subgroup_projection(h), tol);
            ok = ok && c.ok() && c.result->h == h;
            r = std::max(r, c.projection_residual);
        }
        return std::pair{ok, r};
    });
    rec.run("classify.roundtrip", gn, "-", [&] {
        auto rng = cell_rng(cfg, "classify", gn, "-");
        bool ok = true;
        double r = 0.0;
        for (const auto& h : subs)
            for (std::size_t i = 0; i < cfg.roundtrip_trials; ++i) {
                const auto t = random_positive_invertible(g, rng, 0.5, 2.0, tol);
                const auto u = random_unitary(g, rng, tol);
                const auto d = decompose(synthesize(h, t, u, tol).second, tol);
                ok = ok && d.h == h && d.reconstruction_residual <= tol.rel_eps;
                r = std::max(r, d.reconstruction_residual);
            }
        return std::pair{ok, r};
    });
}

inline bool record_less(const CheckRecord& a, const CheckRecord& b) {
    return std::tie(a.id, a.group, a.weight) < std::tie(b.id, b.group, b.weight);
}

}  // namespace detail

inline void validate_config(const SuiteConfig& cfg) {
    if (cfg.random_instances == 0 || cfg.roundtrip_trials == 0) throw ConfigError("instance counts must be positive");
    if (cfg.suites.empty()) throw ConfigError("empty suite list: nothing to run");
    for (const auto& s : cfg.suites)
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw ConfigError("unknown suite '" + s + "'");
    try {
        cfg.tol.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.probe_starts == 0) throw ConfigError("--probe-starts must be positive");
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "text")
        throw ConfigError("unknown format '" + cfg.format + "'");
}

/// Run the selected suites; records are sorted by (id, group, weight).
inline SuiteReport run_suite(const SuiteConfig& cfg) {
    validate_config(cfg);
    const auto grid = detail::build_grid(cfg);
    auto has = [&](const char* s) { return std::find(cfg.suites.begin(), cfg.suites.end(), s) != cfg.suites.end(); };
    SuiteReport report;
    report.config = cfg.to_json();
    detail::Recorder rec(report.checks);
    for (const auto& entry : grid) {
        if (has("algebra")) detail::algebra_suite(cfg, entry.group, rec);
        if (has("classify")) detail::classify_group_suite(cfg, entry.group, rec);
        for (const auto& spec : entry.weights) {
            std::optional<ResolvedWeight> rw;
            try {
                rw = resolve_weight(spec, entry.group, cfg.tol);
            } catch (const VerificationError& e) {
                rec.run("weights.resolve", entry.group->name(), spec.id, [&]() -> std::pair<bool, double> { throw e; });
                continue;
            } catch (const InvalidArgument& e) {
                throw ConfigError("weight '" + spec.id + "': " + e.what());
            }
            if (has("weights")) detail::weights_suite(cfg, *rw, rec);
            if (has("beurling")) detail::beurling_suite(cfg, *rw, rec);
            if (has("spectrum")) detail::spectrum_suite(cfg, *rw, rec);
            if (has("classify")) detail::classify_weight_suite(cfg, *rw, rec);
        }
    }
    std::stable_sort(report.checks.begin(), report.checks.end(), detail::record_less);
    return report;
}

namespace detail {

inline nlohmann::json margin_json(double m) { return std::isfinite(m) ? nlohmann::json(m) : nlohmann::json(nullptr); }

inline std::string margin_text(double m) {
    if (!std::isfinite(m)) return "nan";
    std::ostringstream os;
    os << std::setprecision(6) << std::scientific << m;
    return os.str();
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace detail

/// Deterministic JSON: runtime_ms is written as 0; timings go to the metadata sidecar.
inline std::string render_json(const SuiteReport& r) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["config"] = r.config;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json e;
        e["id"] = c.id;
        e["anchor"] = c.anchor;
        e["group"] = c.group;
        e["weight"] = c.weight;
        e["pass"] = c.pass;
        e["margin"] = detail::margin_json(c.margin);
        e["runtime_ms"] = 0;
        if (!c.error.empty()) e["error"] = c.error;
        j["checks"].push_back(std::move(e));
    }
    j["summary"] = {{"pass", r.pass_count()}, {"fail", r.fail_count()}};
    return j.dump(2) + "\n";
}

inline std::string render_csv(const SuiteReport& r) {
    std::ostringstream os;
    os << "check_id,group,weight,pass,margin,runtime_ms\n";
    for (const auto& c : r.checks)
        os << c.id << ',' << detail::csv_field(c.group) << ',' << detail::csv_field(c.weight) << ','
           << (c.pass ? "true" : "false") << ',' << detail::margin_text(c.margin) << ",0\n";
    return os.str();
}

inline std::string render_text(const SuiteReport& r) {
    std::ostringstream os;
    for (const auto& c : r.checks) {
        os << (c.pass ? "PASS " : "FAIL ") << c.id << "  " << c.group << "  " << c.weight << "  margin "
           << detail::margin_text(c.margin);
        if (!c.error.empty()) os << "  (" << c.error << ")";
        os << '\n';
    }
    os << (r.all_pass() ? "PASS " : "FAIL ") << r.pass_count() << '/' << r.checks.size() << '\n';
    return os.str();
}

inline std::string render(const SuiteReport& r, const std::string& format) {
    if (format == "json") return render_json(r);
    if (format == "csv") return render_csv(r);
    if (format == "text") return render_text(r);
    throw ConfigError("unknown format '" + format + "'");
}

inline std::string report_extension(const std::string& format) { return format == "text" ? "txt" : format; }

/// Create `dir` if needed and confirm a file can be written there.
inline void ensure_output_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path probe = fs::path(dir) / ".beurling-kit-write-test";
    std::ofstream out(probe);
    if (ec || !out) throw ConfigError("output directory '" + dir + "' is not writable");
    out.close();
    fs::remove(probe, ec);
}

/// Write report.{json|csv|txt} and the timing sidecar report.meta.json into `dir`.
inline std::filesystem::path emit_report(const SuiteReport& r, const std::string& format, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
    const fs::path path = fs::path(dir) / ("report." + report_extension(format));
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write '" + path.string() + "'");
        out << render(r, format);
        if (!out) throw Error("write failed for '" + path.string() + "'");
    }
    nlohmann::ordered_json meta;
    meta["generated_at_unix"] = static_cast<long long>(std::time(nullptr));
    meta["report"] = path.filename().string();
    double total = 0.0;
    meta["runtime_ms"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        total += c.runtime_ms;
        meta["runtime_ms"].push_back({{"id", c.id}, {"group", c.group}, {"weight", c.weight}, {"ms", c.runtime_ms}});
    }
    meta["total_ms"] = total;
    std::ofstream side(fs::path(dir) / "report.meta.json", std::ios::binary);
    if (!side) throw Error("cannot write timing sidecar in '" + dir + "'");
    side << meta.dump(2) << '\n';
    return path;
}

}  // namespace beurling
