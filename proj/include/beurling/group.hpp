#pragma once

// Finite groups as dense multiplication tables.  Elements are indices
// 0..order-1 and index 0 is always the identity.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "beurling/error.hpp"

namespace beurling {

/// Raw, unvalidated multiplication table as read from input.
struct CayleyTable {
    std::string name;
    std::vector<std::vector<long long>> table;
};

struct GroupViolation {
    std::string axiom;  ///< "shape", "identity", "latin_row", "latin_column", "inverse", "associativity"
    std::vector<std::size_t> witness;
    std::string message;
};

struct GroupReport {
    std::vector<GroupViolation> violations;
    bool ok() const noexcept { return violations.empty(); }

    std::string summary() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < violations.size(); ++i) os << (i ? "; " : "") << violations[i].message;
        return os.str();
    }
};

/// Check every group axiom on a raw table; the report is empty iff the table
/// is a group with identity at index 0.  Associativity failures are listed up
/// to `max_triples` witnesses.
inline GroupReport group_check(const CayleyTable& t, std::size_t max_triples = 8) {
    GroupReport rep;
    auto add = [&](std::string axiom, std::vector<std::size_t> w, std::string msg) {
        rep.violations.push_back({std::move(axiom), std::move(w), std::move(msg)});
    };
    const std::size_t n = t.table.size();
    if (n == 0) {
        add("shape", {}, "table is empty");
        return rep;
    }
    for (std::size_t r = 0; r < n; ++r) {
        if (t.table[r].size() != n) {
            add("shape", {r}, "row " + std::to_string(r) + " has length " + std::to_string(t.table[r].size()) +
                                  ", expected " + std::to_string(n));
            return rep;
        }
        for (std::size_t c = 0; c < n; ++c) {
            const long long v = t.table[r][c];
            if (v < 0 || static_cast<std::size_t>(v) >= n) {
                add("shape", {r, c}, "entry (" + std::to_string(r) + "," + std::to_string(c) + ") = " +
                                         std::to_string(v) + " is out of range");
                return rep;
            }
        }
    }
    auto at = [&](std::size_t a, std::size_t b) { return static_cast<std::size_t>(t.table[a][b]); };

    for (std::size_t g = 0; g < n; ++g) {
        if (at(0, g) != g || at(g, 0) != g) {
            add("identity", {g}, "index 0 is not a two-sided identity at element " + std::to_string(g));
            break;
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<bool> seen(n, false);
        for (std::size_t c = 0; c < n; ++c) {
            if (seen[at(r, c)]) {
                add("latin_row", {r, c}, "Latin-square violation at row " + std::to_string(r) + " (entry " +
                                             std::to_string(at(r, c)) + " repeated at column " + std::to_string(c) + ")");
                break;
            }
            seen[at(r, c)] = true;
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<bool> seen(n, false);
        for (std::size_t r = 0; r < n; ++r) {
            if (seen[at(r, c)]) {
                add("latin_column", {r, c}, "Latin-square violation at column " + std::to_string(c) + " (entry " +
                                                std::to_string(at(r, c)) + " repeated at row " + std::to_string(r) + ")");
                break;
            }
            seen[at(r, c)] = true;
        }
    }
    for (std::size_t g = 0; g < n; ++g) {
        bool found = false;
        for (std::size_t h = 0; h < n && !found; ++h) found = at(g, h) == 0 && at(h, g) == 0;
        if (!found) add("inverse", {g}, "element " + std::to_string(g) + " has no two-sided inverse");
    }
    std::size_t bad = 0;
    for (std::size_t a = 0; a < n && bad < max_triples; ++a)
        for (std::size_t b = 0; b < n && bad < max_triples; ++b)
            for (std::size_t c = 0; c < n && bad < max_triples; ++c)
                if (at(at(a, b), c) != at(a, at(b, c))) {
                    ++bad;
                    add("associativity", {a, b, c},
                        "associativity fails at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                            std::to_string(c) + ")");
                }
    return rep;
}

class FiniteGroup {
public:
    /// Build from a table, verifying every axiom.  `cyclic_factors`, when
    /// nonempty, records that the group is Z_{n1} x ... x Z_{nk} with mixed
    /// radix indexing (first factor slowest).
    static FiniteGroup from_table(std::string name, const std::vector<std::vector<std::size_t>>& table,
                                  std::vector<std::size_t> cyclic_factors = {}) {
        CayleyTable raw{name, {}};
        raw.table.reserve(table.size());
        for (const auto& row : table) raw.table.emplace_back(row.begin(), row.end());
        return from_cayley(raw, std::move(cyclic_factors));
    }

    static FiniteGroup from_cayley(const CayleyTable& raw, std::vector<std::size_t> cyclic_factors = {}) {
        const auto rep = group_check(raw);
        if (!rep.ok()) throw InvalidArgument("invalid group table '" + raw.name + "': " + rep.summary());
        FiniteGroup g;
        g.name_ = raw.name;
        g.order_ = raw.table.size();
        g.table_.resize(g.order_ * g.order_);
        for (std::size_t a = 0; a < g.order_; ++a)
            for (std::size_t b = 0; b < g.order_; ++b)
                g.table_[a * g.order_ + b] = static_cast<std::size_t>(raw.table[a][b]);
        g.inverse_.resize(g.order_);
        for (std::size_t a = 0; a < g.order_; ++a)
            for (std::size_t b = 0; b < g.order_; ++b)
                if (g.mul(a, b) == 0) g.inverse_[a] = b;
        if (!cyclic_factors.empty()) {
            const std::size_t prod = std::accumulate(cyclic_factors.begin(), cyclic_factors.end(), std::size_t{1},
                                                     std::multiplies<>());
            if (prod != g.order_) throw InvalidArgument("cyclic factors do not multiply to the group order");
        }
        g.cyclic_factors_ = std::move(cyclic_factors);
        return g;
    }

    const std::string& name() const noexcept { return name_; }
    std::size_t order() const noexcept { return order_; }
    static constexpr std::size_t identity() noexcept { return 0; }

    std::size_t mul(std::size_t a, std::size_t b) const { return table_[a * order_ + b]; }
    std::size_t inv(std::size_t a) const { return inverse_[a]; }

    /// Z_{n1} x ... x Z_{nk} factorization when known; empty otherwise.
    const std::vector<std::size_t>& cyclic_factors() const noexcept { return cyclic_factors_; }

    std::size_t element_order(std::size_t g) const {
        std::size_t k = 1;
        for (std::size_t x = g; x != 0; x = mul(x, g)) ++k;
        return k;
    }

    bool is_abelian() const {
        for (std::size_t a = 0; a < order_; ++a)
            for (std::size_t b = a + 1; b < order_; ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    std::vector<std::vector<std::size_t>> conjugacy_classes() const {
        std::vector<int> cls(order_, -1);
        std::vector<std::vector<std::size_t>> out;
        for (std::size_t g = 0; g < order_; ++g) {
            if (cls[g] >= 0) continue;
            std::set<std::size_t> members;
            for (std::size_t x = 0; x < order_; ++x) members.insert(mul(mul(x, g), inv(x)));
            for (auto m : members) cls[m] = static_cast<int>(out.size());
            out.emplace_back(members.begin(), members.end());
        }
        return out;
    }

    bool same_as(const FiniteGroup& o) const { return order_ == o.order_ && table_ == o.table_; }

    std::vector<std::vector<std::size_t>> table() const {
        std::vector<std::vector<std::size_t>> t(order_, std::vector<std::size_t>(order_));
        for (std::size_t a = 0; a < order_; ++a)
            for (std::size_t b = 0; b < order_; ++b) t[a][b] = mul(a, b);
        return t;
    }

private:
    std::string name_;
    std::size_t order_ = 0;
    std::vector<std::size_t> table_;
    std::vector<std::size_t> inverse_;
    std::vector<std::size_t> cyclic_factors_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline FiniteGroup make_cyclic(std::size_t n) {
    if (n == 0) throw InvalidArgument("cyclic group order must be at least 1");
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FiniteGroup::from_table("Z" + std::to_string(n), t, {n});
}

/// Direct product; element (a, b) has index a*|B| + b.
inline FiniteGroup make_product(const FiniteGroup& a, const FiniteGroup& b) {
    const std::size_t na = a.order(), nb = b.order();
    std::vector<std::vector<std::size_t>> t(na * nb, std::vector<std::size_t>(na * nb));
    for (std::size_t x = 0; x < na * nb; ++x)
        for (std::size_t y = 0; y < na * nb; ++y)
            t[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
    std::vector<std::size_t> factors;
    if (!a.cyclic_factors().empty() && !b.cyclic_factors().empty()) {
        factors = a.cyclic_factors();
        factors.insert(factors.end(), b.cyclic_factors().begin(), b.cyclic_factors().end());
    }
    return FiniteGroup::from_table(a.name() + "x" + b.name(), t, std::move(factors));
}

namespace detail {

inline FiniteGroup make_s3() {
    // Permutations of {0,1,2} in lexicographic order; (p*q)(x) = p(q(x)).
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p{0, 1, 2};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    auto index_of = [&](const std::array<int, 3>& q) {
        return static_cast<std::size_t>(std::find(perms.begin(), perms.end(), q) - perms.begin());
    };
    std::vector<std::vector<std::size_t>> t(6, std::vector<std::size_t>(6));
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
            std::array<int, 3> c{};
            for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
            t[a][b] = index_of(c);
        }
    return FiniteGroup::from_table("S3", t);
}

inline FiniteGroup make_d4() {
    // r^k s^j has index k + 4j; s r s = r^{-1}.
    std::vector<std::vector<std::size_t>> t(8, std::vector<std::size_t>(8));
    for (std::size_t x = 0; x < 8; ++x)
        for (std::size_t y = 0; y < 8; ++y) {
            const std::size_t a = x % 4, i = x / 4, b = y % 4, j = y / 4;
            const std::size_t k = (i == 0 ? a + b : a + 4 - b) % 4;
            t[x][y] = k + 4 * ((i + j) % 2);
        }
    return FiniteGroup::from_table("D4", t);
}

inline FiniteGroup make_q8() {
    // Index 2u + s encodes (-1)^s * q_u with q_0..q_3 = 1, i, j, k.
    // unit_mul[u][v] = (sign bit, unit) of q_u q_v.
    static const int unit_mul[4][4][2] = {
        {{0, 0}, {0, 1}, {0, 2}, {0, 3}},
        {{0, 1}, {1, 0}, {0, 3}, {1, 2}},
        {{0, 2}, {1, 3}, {1, 0}, {0, 1}},
        {{0, 3}, {0, 2}, {1, 1}, {1, 0}},
    };
    std::vector<std::vector<std::size_t>> t(8, std::vector<std::size_t>(8));
    for (std::size_t x = 0; x < 8; ++x)
        for (std::size_t y = 0; y < 8; ++y) {
            const auto& m = unit_mul[x / 2][y / 2];
            const std::size_t sign = (x % 2 + y % 2 + static_cast<std::size_t>(m[0])) % 2;
            t[x][y] = 2 * static_cast<std::size_t>(m[1]) + sign;
        }
    return FiniteGroup::from_table("Q8", t);
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace detail

/// Build a group from a textual spec: "Zn" (or "Cn"), "S3", "D4", "Q8", or a
/// product "AxB" of specs.
inline FiniteGroup make_group(std::string_view spec) {
    const std::string s = detail::trim(spec);
    if (s.empty()) throw InvalidArgument("empty group spec");
    const auto cross = s.find_first_of("x*");
    if (cross != std::string::npos)
        return make_product(make_group(s.substr(0, cross)), make_group(std::string_view(s).substr(cross + 1)));
    if (s == "S3") return detail::make_s3();
    if (s == "D4") return detail::make_d4();
    if (s == "Q8") return detail::make_q8();
    if ((s[0] == 'Z' || s[0] == 'C') && s.size() > 1 &&
        std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        const unsigned long n = std::stoul(s.substr(1));
        if (n == 0) throw InvalidArgument("cyclic group order must be at least 1");
        return make_cyclic(n);
    }
    throw InvalidArgument("unknown group spec '" + s + "'");
}

inline GroupPtr share(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

/// Parse a Cayley table JSON document {"name", "order", "table"}.
inline FiniteGroup parse_cayley(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("Cayley file parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("table") || !j["table"].is_array())
        throw InvalidArgument("Cayley file parse failure: missing \"table\" array");
    CayleyTable raw;
    raw.name = j.value("name", std::string("G"));
    for (const auto& row : j["table"]) {
        if (!row.is_array()) throw InvalidArgument("Cayley file parse failure: table rows must be arrays");
        std::vector<long long> r;
        for (const auto& v : row) {
            if (!v.is_number_integer()) throw InvalidArgument("Cayley file parse failure: entries must be integers");
            r.push_back(v.get<long long>());
        }
        raw.table.push_back(std::move(r));
    }
    if (j.contains("order")) {
        if (!j["order"].is_number_integer() || j["order"].get<long long>() != static_cast<long long>(raw.table.size()))
            throw InvalidArgument("Cayley file: \"order\" does not match the table size");
    }
    return FiniteGroup::from_cayley(raw);
}

inline FiniteGroup load_cayley(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open Cayley file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_cayley(ss.str());
}

inline std::string cayley_json(const FiniteGroup& g) {
    nlohmann::json j;
    j["name"] = g.name();
    j["order"] = g.order();
    j["table"] = g.table();
    return j.dump();
}

/// Subgroup as a sorted element-index set of its parent.
class Subgroup {
public:
    Subgroup(GroupPtr parent, std::vector<std::size_t> elements) : parent_(std::move(parent)), elements_(std::move(elements)) {
        std::sort(elements_.begin(), elements_.end());
        elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
        if (!parent_) throw InvalidArgument("Subgroup: null parent");
        if (elements_.empty() || elements_.front() != 0) throw InvalidArgument("Subgroup: identity missing");
        for (auto a : elements_) {
            if (a >= parent_->order()) throw InvalidArgument("Subgroup: element out of range");
            if (!contains(parent_->inv(a))) throw InvalidArgument("Subgroup: not closed under inverse");
            for (auto b : elements_)
                if (!contains(parent_->mul(a, b))) throw InvalidArgument("Subgroup: not closed under multiplication");
        }
    }

    const GroupPtr& parent() const noexcept { return parent_; }
    const std::vector<std::size_t>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }

    bool contains(std::size_t g) const { return std::binary_search(elements_.begin(), elements_.end(), g); }

    /// H as a standalone group; local index i corresponds to elements()[i].
    FiniteGroup as_group() const {
        const std::size_t n = elements_.size();
        std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) t[i][j] = local_index(parent_->mul(elements_[i], elements_[j]));
        std::ostringstream os;
        os << parent_->name() << "{";
        for (std::size_t i = 0; i < n; ++i) os << (i ? "," : "") << elements_[i];
        os << "}";
        return FiniteGroup::from_table(os.str(), t);
    }

    std::size_t local_index(std::size_t g) const {
        const auto it = std::lower_bound(elements_.begin(), elements_.end(), g);
        if (it == elements_.end() || *it != g) throw InvalidArgument("Subgroup: element not in subgroup");
        return static_cast<std::size_t>(it - elements_.begin());
    }

    friend bool operator==(const Subgroup& a, const Subgroup& b) {
        return a.elements_ == b.elements_ && a.parent_->same_as(*b.parent_);
    }

private:
    GroupPtr parent_;
    std::vector<std::size_t> elements_;
};

/// Injective homomorphism source -> target given on elements.
struct GroupEmbedding {
    GroupPtr source;
    GroupPtr target;
    std::vector<std::size_t> map;

    void validate() const {
        if (!source || !target || map.size() != source->order())
            throw InvalidArgument("GroupEmbedding: map size does not match source order");
        std::set<std::size_t> image(map.begin(), map.end());
        if (image.size() != map.size()) throw InvalidArgument("GroupEmbedding: map is not injective");
        for (std::size_t a = 0; a < map.size(); ++a) {
            if (map[a] >= target->order()) throw InvalidArgument("GroupEmbedding: image out of range");
            for (std::size_t b = 0; b < map.size(); ++b)
                if (map[source->mul(a, b)] != target->mul(map[a], map[b]))
                    throw InvalidArgument("GroupEmbedding: map is not a homomorphism");
        }
    }

    Subgroup image() const { return Subgroup(target, map); }

    /// Z_m -> <g> via k |-> g^k, where m is the order of g.
    static GroupEmbedding cyclic_into(const GroupPtr& target, std::size_t g) {
        const std::size_t m = target->element_order(g);
        GroupEmbedding e{share(make_cyclic(m)), target, std::vector<std::size_t>(m)};
        std::size_t x = 0;
        for (std::size_t k = 0; k < m; ++k, x = target->mul(x, g)) e.map[k] = x;
        e.validate();
        return e;
    }

    /// Inclusion of a subgroup, viewed through Subgroup::as_group().
    static GroupEmbedding of_subgroup(const Subgroup& h) {
        GroupEmbedding e{share(h.as_group()), h.parent(), h.elements()};
        e.validate();
        return e;
    }
};

/// All subgroups, sorted by size then elements.  Brute-force closure of
/// H u {g} starting from {e}; requires order <= 64 (bitmask representation).
inline std::vector<Subgroup> enumerate_subgroups(const GroupPtr& g) {
    const std::size_t n = g->order();
    if (n > 64) throw InvalidArgument("enumerate_subgroups: order above 64 is not supported");
    auto closure = [&](std::uint64_t mask) {
        std::vector<std::size_t> elems;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1ULL) elems.push_back(i);
        for (std::size_t k = 0; k < elems.size(); ++k)
            for (std::size_t l = 0; l <= k; ++l)
                for (std::size_t p : {g->mul(elems[k], elems[l]), g->mul(elems[l], elems[k])})
                    if (!(mask >> p & 1ULL)) {
                        mask |= 1ULL << p;
                        elems.push_back(p);
                    }
        return mask;
    };
    std::set<std::uint64_t> found{1ULL};
    std::vector<std::uint64_t> frontier{1ULL};
    while (!frontier.empty()) {
        std::vector<std::uint64_t> next;
        for (auto h : frontier)
            for (std::size_t x = 0; x < n; ++x) {
                if (h >> x & 1ULL) continue;
                const auto c = closure(h | 1ULL << x);
                if (found.insert(c).second) next.push_back(c);
            }
        frontier = std::move(next);
    }
    std::vector<Subgroup> out;
    for (auto m : found) {
        std::vector<std::size_t> elems;
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1ULL) elems.push_back(i);
        out.emplace_back(g, std::move(elems));
    }
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        return a.size() != b.size() ? a.size() < b.size() : a.elements() < b.elements();
    });
    return out;
}

}  // namespace beurling
