#pragma once

// Character data used to build central and dual-function weights.  For a
// general finite group the minimal central projections z_pi are read off
// the eigenspaces of a generic Hermitian element of the center; for
// Z_{n1} x ... x Z_{nk} the characters are written down directly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "beurling/algebra.hpp"
#include "beurling/error.hpp"
#include "beurling/group.hpp"
#include "beurling/matrix.hpp"
#include "beurling/random.hpp"

namespace beurling {

struct Irrep {
    std::size_t dim = 0;
    std::vector<cplx> character;  ///< chi(g) per element
    AlgElement central_projection;  ///< z = (d/|G|) sum_g chi(g^{-1}) lambda(g)
};

namespace detail {

inline bool character_greater(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i].real() - b[i].real()) > 1e-9) return a[i].real() > b[i].real();
        if (std::abs(a[i].imag() - b[i].imag()) > 1e-9) return a[i].imag() > b[i].imag();
    }
    return false;
}

}  // namespace detail

/// Irreducible characters and central projections.
///
/// Order: dimension ascending; within a dimension the trivial character first,
/// then characters in descending lexicographic order of (Re, Im) values.
inline std::vector<Irrep> irreducible_characters(const GroupPtr& g, const Tolerance& tol = {}) {
    const std::size_t n = g->order();
    const auto classes = g->conjugacy_classes();
    std::vector<AlgElement> class_sums;
    for (const auto& c : classes) {
        AlgElement s = AlgElement::zero(g);
        for (auto x : c) s[x] = 1.0;
        class_sums.push_back(std::move(s));
    }

    for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
        Rng rng = Rng(0x43454e54524bULL).split(attempt);
        AlgElement h = AlgElement::zero(g);
        for (const auto& c : class_sums) {
            const double a = rng.uniform(-1.0, 1.0), b = rng.uniform(-1.0, 1.0);
            h += (c + c.adjoint()) * cplx(a) + (c - c.adjoint()) * cplx(0.0, b);
        }
        const auto eig = hermitian_eig(embed(h), tol);
        const double scale = std::max(1.0, std::abs(eig.values.front()) + std::abs(eig.values.back()));

        std::vector<std::vector<std::size_t>> groups;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == 0 || eig.values[k - 1] - eig.values[k] > 1e-7 * scale) groups.emplace_back();
            groups.back().push_back(k);
        }
        if (groups.size() != classes.size()) continue;

        std::vector<Irrep> out;
        bool ok = true;
        for (const auto& grp : groups) {
            CMatrix p(n, n);
            for (auto k : grp)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) p(i, j) += eig.vectors(i, k) * std::conj(eig.vectors(j, k));
            const auto proj = project_with_residual(p, g);
            const double de = std::sqrt(static_cast<double>(n) * proj.element[0].real());
            const double d = std::round(de);
            if (proj.residual > 1e-8 || std::abs(de - d) > 1e-6 || d * d != static_cast<double>(grp.size())) {
                ok = false;
                break;
            }
            Irrep ir;
            ir.dim = static_cast<std::size_t>(d);
            ir.central_projection = proj.element;
            ir.character.resize(n);
            for (std::size_t x = 0; x < n; ++x)
                ir.character[x] = static_cast<double>(n) / d * proj.element[g->inv(x)];
            out.push_back(std::move(ir));
        }
        if (!ok) continue;

        auto is_trivial = [](const Irrep& r) {
            return std::all_of(r.character.begin(), r.character.end(),
                               [](const cplx& z) { return std::abs(z - cplx(1.0)) < 1e-9; });
        };
        std::sort(out.begin(), out.end(), [&](const Irrep& a, const Irrep& b) {
            if (a.dim != b.dim) return a.dim < b.dim;
            if (is_trivial(a) != is_trivial(b)) return is_trivial(a);
            return detail::character_greater(a.character, b.character);
        });
        return out;
    }
    throw VerificationError("irreducible_characters: could not separate the isotypic components of " + g->name(), 0.0);
}

/// Characters of Z_{n1} x ... x Z_{nk}: chi_k(g) = exp(2 pi i sum_j k_j g_j / n_j),
/// with k and g in the group's mixed radix indexing.  result[k][g] = chi_k(g).
inline std::vector<std::vector<cplx>> abelian_characters(const FiniteGroup& g) {
    const auto& f = g.cyclic_factors();
    if (f.empty()) throw InvalidArgument("abelian_characters: " + g.name() + " has no cyclic factorization");
    const std::size_t n = g.order();
    auto digits = [&](std::size_t x) {
        std::vector<std::size_t> d(f.size());
        for (std::size_t j = f.size(); j-- > 0;) {
            d[j] = x % f[j];
            x /= f[j];
        }
        return d;
    };
    std::vector<std::vector<cplx>> chi(n, std::vector<cplx>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const auto kd = digits(k);
        for (std::size_t x = 0; x < n; ++x) {
            const auto xd = digits(x);
            double phase = 0.0;
            for (std::size_t j = 0; j < f.size(); ++j)
                phase += static_cast<double>((kd[j] * xd[j]) % f[j]) / static_cast<double>(f[j]);
            chi[k][x] = std::polar(1.0, 2.0 * M_PI * phase);
        }
    }
    return chi;
}

/// Eigenvalue of a (multi-leg) element on chi_{k_1} (x) ... (x) chi_{k_m}.
/// lambda(g) acts on chi_k by conj(chi_k(g)).
inline std::vector<cplx> abelian_multipliers(const AlgElement& x) {
    const auto chi = abelian_characters(*x.group());
    const auto ix = x.indexer();
    std::vector<cplx> out(x.dim());
    for (std::size_t k = 0; k < x.dim(); ++k) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < x.dim(); ++i) {
            if (x[i] == cplx(0.0)) continue;
            cplx c = 1.0;
            for (std::size_t l = 0; l < x.legs(); ++l) c *= std::conj(chi[ix.digit(k, l)][ix.digit(i, l)]);
            acc += x[i] * c;
        }
        out[k] = acc;
    }
    return out;
}

/// Inverse transform: the element with the given multipliers on a single leg.
inline AlgElement from_abelian_multipliers(const GroupPtr& g, const std::vector<cplx>& m) {
    const auto chi = abelian_characters(*g);
    const std::size_t n = g->order();
    if (m.size() != n) throw InvalidArgument("from_abelian_multipliers: length does not match |G|");
    AlgElement x = AlgElement::zero(g);
    for (std::size_t s = 0; s < n; ++s) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += chi[k][s] * m[k];
        x[s] = acc / static_cast<double>(n);
    }
    return x;
}

}  // namespace beurling
