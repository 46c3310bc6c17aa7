#pragma once

// Built-in groups and weights, and resolution of weight descriptions
// {"group", "kind", "params"} into verified weight inverses.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "beurling/algebra.hpp"
#include "beurling/characters.hpp"
#include "beurling/error.hpp"
#include "beurling/group.hpp"
#include "beurling/weights.hpp"

namespace beurling {

inline const std::vector<std::string>& catalog_group_names() {
    static const std::vector<std::string> names{"Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12",
                                                "Z2xZ4", "S3", "D4", "Q8"};
    return names;
}

/// Groups are shared so that elements built in different places compare by pointer.
inline GroupPtr catalog_group(const std::string& name) {
    static std::map<std::string, GroupPtr> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    GroupPtr g = share(make_group(name));
    cache.emplace(name, g);
    return g;
}

/// A weight description as found in the catalog or in a weight file.
struct WeightSpec {
    std::string id;
    std::string group;
    std::string kind;  ///< "dual_function", "central" or "extended"
    nlohmann::json params;
};

/// Subgroup data kept for weights transplanted from a cyclic subgroup.
struct ExtensionData {
    GroupEmbedding embedding;
    AlgElement omega_h;
    AlgElement cocycle_h;
};

struct ResolvedWeight {
    WeightSpec spec;
    GroupPtr group;
    WeightInverse weight;
    bool central = false;           ///< omega is central in VN(G)
    std::optional<ExtensionData> extension;
    bool extended_central = false;  ///< omega is central in VN(H) for a subgroup H containing its support
};

struct FamilyInfo {
    std::string id;
    std::string formula;
    std::string anchor;
};

inline const std::vector<FamilyInfo>& weight_families() {
    static const std::vector<FamilyInfo> f{
        {"trivial", "w = 1, omega = I", "Gamma(I) = I (x) I"},
        {"cyclic-exp", "w(k) = 2^{beta d(k)}, d = cyclic distance to 0 summed over factors, beta in {0.5, 1}",
         "sub-multiplicative: d(k + l) <= d(k) + d(l)"},
        {"cyclic-poly", "w(k) = (1 + d(k))^alpha, alpha = 1", "sub-multiplicative: 1 + d(k + l) <= (1 + d(k))(1 + d(l))"},
        {"central", "omega = sum_pi w_pi z_pi; catalog halves the value on the two-dimensional irreducible",
         "omega(pi) omega(rho) <= omega(sigma) for sigma in pi (x) rho, checked through (iw)"},
        {"extended", "omega = iota_H(omega_H) for a dual-function weight on a cyclic subgroup H",
         "iota_H: lambda_H(s) -> lambda_G(s) preserves (iw)"},
    };
    return f;
}

namespace detail {

/// Generator of the cyclic subgroup used for "ext-Z<m>-..." weights.
inline std::optional<std::size_t> extension_generator(const std::string& group, std::size_t m) {
    static const std::map<std::pair<std::string, std::size_t>, std::size_t> gens{
        {{"S3", 3}, 3}, {{"S3", 2}, 1}, {{"D4", 4}, 1}, {{"D4", 2}, 4}, {{"Q8", 4}, 2}, {{"Q8", 2}, 1}};
    const auto it = gens.find({group, m});
    if (it == gens.end()) return std::nullopt;
    return it->second;
}

inline nlohmann::json family_params(const std::string& family) {
    if (family == "trivial") return {{"family", "trivial"}};
    if (family == "cyclic-exp-0.5") return {{"family", "cyclic-exp"}, {"beta", 0.5}};
    if (family == "cyclic-exp-1") return {{"family", "cyclic-exp"}, {"beta", 1.0}};
    if (family == "cyclic-poly-1") return {{"family", "cyclic-poly"}, {"alpha", 1.0}};
    throw InvalidArgument("unknown dual-function family '" + family + "'");
}

inline std::vector<double> central_halved_values(const GroupPtr& g, const Tolerance& tol) {
    std::vector<double> v;
    for (const auto& ir : irreducible_characters(g, tol)) v.push_back(ir.dim >= 2 ? 0.5 : 1.0);
    return v;
}

}  // namespace detail

/// Catalog weight ids available for a group.
inline std::vector<std::string> catalog_weight_ids(const FiniteGroup& g) {
    if (!g.cyclic_factors().empty()) return {"trivial", "cyclic-exp-0.5", "cyclic-exp-1", "cyclic-poly-1"};
    std::vector<std::string> ids{"trivial"};
    if (g.name() == "S3" || g.name() == "D4" || g.name() == "Q8") {
        ids.push_back("central-halved");
        const std::size_t big = g.name() == "S3" ? 3 : 4;
        for (std::size_t m : {big, std::size_t{2}})
            for (const char* fam : {"cyclic-exp-0.5", "cyclic-exp-1", "cyclic-poly-1"})
                ids.push_back("ext-Z" + std::to_string(m) + "-" + fam);
    }
    return ids;
}

/// Catalog id -> weight description, or nullopt when the id does not apply to the group.
inline std::optional<WeightSpec> catalog_weight(const GroupPtr& g, const std::string& id) {
    const std::string& group = g->name();
    const auto ids = catalog_weight_ids(*g);
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) return std::nullopt;
    if (id == "trivial") return WeightSpec{id, group, "dual_function", detail::family_params("trivial")};
    if (id == "central-halved") return WeightSpec{id, group, "central", {{"halve_two_dimensional", true}}};
    if (id.rfind("ext-Z", 0) == 0) {
        const auto dash = id.find('-', 5);
        const std::size_t m = std::stoul(id.substr(5, dash - 5));
        const auto gen = detail::extension_generator(group, m);
        if (!gen) return std::nullopt;
        return WeightSpec{id, group, "extended",
                          {{"generator", *gen}, {"base", detail::family_params(id.substr(dash + 1))}}};
    }
    return WeightSpec{id, group, "dual_function", detail::family_params(id)};
}

inline std::optional<WeightSpec> catalog_weight(const std::string& group, const std::string& id) {
    return catalog_weight(catalog_group(group), id);
}

namespace detail {

inline DualWeightFunction dual_function_from_params(const GroupPtr& g, const nlohmann::json& p) {
    if (p.contains("values")) return DualWeightFunction::create(g, p.at("values").get<std::vector<double>>());
    const std::string fam = p.value("family", std::string());
    if (fam == "trivial") return DualWeightFunction::create(g, std::vector<double>(g->order(), 1.0));
    if (fam == "cyclic-exp") return cyclic_exponential_weight(g, p.value("beta", 1.0));
    if (fam == "cyclic-poly") return cyclic_polynomial_weight(g, p.value("alpha", 1.0));
    throw InvalidArgument("dual_function params need \"values\" or a known \"family\"");
}

}  // namespace detail

/// Build and verify the weight inverse described by `spec` over `g`.
inline ResolvedWeight resolve_weight(const WeightSpec& spec, const GroupPtr& g, const Tolerance& tol = {}) {
    if (spec.kind == "dual_function") {
        if (g->cyclic_factors().empty()) {
            const bool trivial = spec.params.value("family", std::string()) == "trivial";
            if (!trivial) throw InvalidArgument("dual_function weights need a product of cyclic groups, got " + g->name());
            return {spec, g, WeightInverse::create(AlgElement::identity(g), tol), true, std::nullopt, true};
        }
        const auto w = detail::dual_function_from_params(g, spec.params);
        return {spec, g, weight_from_dual_function(w, tol), true, std::nullopt, true};
    }
    if (spec.kind == "central") {
        std::vector<double> values;
        if (spec.params.contains("values"))
            values = spec.params.at("values").get<std::vector<double>>();
        else if (spec.params.value("halve_two_dimensional", false))
            values = detail::central_halved_values(g, tol);
        else
            throw InvalidArgument("central params need \"values\" or \"halve_two_dimensional\"");
        return {spec, g, WeightInverse::create(central_weight(g, values, tol), tol), true, std::nullopt,
                true};
    }
    if (spec.kind == "extended") {
        const std::size_t gen = spec.params.at("generator").get<std::size_t>();
        if (gen >= g->order()) throw InvalidArgument("extended weight: generator out of range");
        const GroupEmbedding e = GroupEmbedding::cyclic_into(g, gen);
        const auto base = detail::dual_function_from_params(e.source, spec.params.at("base"));
        const WeightInverse wh = weight_from_dual_function(base, tol);
        const AlgElement omega = extend_from_subgroup(e, wh.omega(), tol);
        // omega_H lives in the commutative VN(H); centrality in VN(G) depends on how H sits in G.
        const bool central = centrality_residual(omega) <= tol.zero_threshold(omega.norm());
        return {spec, g, WeightInverse::create(omega, tol), central, ExtensionData{e, wh.omega(), wh.cocycle()},
                true};
    }
    throw InvalidArgument("unknown weight kind '" + spec.kind + "'");
}

inline WeightSpec weight_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("group") || !j.contains("kind"))
        throw InvalidArgument("weight entry needs \"group\" and \"kind\"");
    WeightSpec s;
    s.group = j.at("group").get<std::string>();
    s.kind = j.at("kind").get<std::string>();
    s.params = j.value("params", nlohmann::json::object());
    s.id = j.value("id", s.kind + ":" + s.params.dump());
    return s;
}

inline std::vector<WeightSpec> load_weight_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open weight file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("weight file parse failure: ") + e.what());
    }
    std::vector<WeightSpec> out;
    if (j.is_array())
        for (const auto& e : j) out.push_back(weight_spec_from_json(e));
    else
        out.push_back(weight_spec_from_json(j));
    return out;
}

}  // namespace beurling
