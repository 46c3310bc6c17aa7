#include <gtest/gtest.h>

#include <set>
#include <string>

#include "beurling/catalog.hpp"
#include "beurling/spectrum.hpp"

using namespace beurling;

namespace {

ResolvedWeight catalog(const std::string& group, const std::string& id) {
    return resolve_weight(*catalog_weight(group, id), catalog_group(group));
}

/// Each solution is exactly one lambda(s), and every s occurs once.
void expect_permutations(const std::vector<AlgElement>& sols, std::size_t order) {
    ASSERT_EQ(sols.size(), order);
    std::set<std::size_t> seen;
    for (const auto& s : sols) {
        const auto [elem, dist] = nearest_group_element(s);
        EXPECT_LE(dist, 1e-9);
        seen.insert(elem);
        const CMatrix m = embed(s);
        EXPECT_LT(distance(m * m.adjoint(), CMatrix::identity(order)), 1e-9);
    }
    EXPECT_EQ(seen.size(), order);
}

}  // namespace

TEST(Candidates, Z2AreWeightAndItsSwap) {
    const auto rw = catalog("Z2", "cyclic-exp-1");
    const auto c = candidates(rw.weight);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NEAR(std::abs(c[0].sigma[0] - 0.75), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(c[0].sigma[1] - 0.25), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(c[1].sigma[0] - 0.25), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(c[1].sigma[1] - 0.75), 0.0, 1e-12);
    for (const auto& p : c) EXPECT_LE(p.residual, 1e-12);
}

TEST(Candidates, S3CentralAllVerify) {
    const auto rw = catalog("S3", "central-halved");
    const auto c = candidates(rw.weight);
    ASSERT_EQ(c.size(), 6u);
    for (const auto& p : c) {
        EXPECT_LE(p.residual, 1e-12);
        const auto v = verify_point(p.sigma, rw.weight.cocycle());
        EXPECT_LE(v.residual, 1e-12);
        EXPECT_LE(v.multiplicativity, 1e-10);
        EXPECT_LE(polar_modulus_defect(p.t), 1e-10);
    }
}

TEST(Candidates, PerturbationBreaksTheEquation) {
    const auto rw = catalog("S3", "ext-Z3-cyclic-exp-1");
    const auto& omega = rw.weight.omega();
    const auto sigma = omega + AlgElement::lambda(rw.group, 1) * omega * cplx(0.1);
    EXPECT_GT(spectrum_residual(sigma, rw.weight.cocycle()), 1e-3);
    EXPECT_GT(verify_point(sigma, rw.weight.cocycle()).multiplicativity, 1e-4);
}

TEST(Probe, TrivialWeightOnZ3) {
    const auto rw = catalog("Z3", "trivial");
    const auto rep = completeness_probe(rw.weight);
    EXPECT_TRUE(rep.complete);
    ASSERT_EQ(rep.probe_solutions.size(), 3u);
    std::set<std::size_t> seen;
    for (const auto& p : rep.probe_solutions) seen.insert(*p.group_element);
    EXPECT_EQ(seen, (std::set<std::size_t>{0, 1, 2}));
}

TEST(Probe, Z2CatalogWeight) {
    const auto rw = catalog("Z2", "cyclic-exp-1");
    const auto rep = completeness_probe(rw.weight, ProbeOptions{});
    EXPECT_TRUE(rep.complete);
    EXPECT_EQ(rep.probe_solutions.size(), 2u);
    EXPECT_TRUE(rep.unmatched.empty());
    EXPECT_EQ(rep.converged_starts + rep.nonconvergent_starts, 200u);
}

TEST(Probe, S3ExtendedWeightFiveHundredStarts) {
    const auto rw = catalog("S3", "ext-Z2-cyclic-exp-1");
    ProbeOptions opt;
    opt.n_starts = 500;
    const auto rep = completeness_probe(rw.weight, opt);
    EXPECT_TRUE(rep.complete);
    ASSERT_EQ(rep.probe_solutions.size(), 6u);
    for (const auto& p : rep.probe_solutions) {
        EXPECT_LE(p.residual, 1e-9);
        EXPECT_LE(antipode_invariant(p.sigma, rw.weight.omega()), 1e-9);
    }
}

TEST(Probe, DeterministicForFixedSeed) {
    const auto rw = catalog("Q8", "central-halved");
    ProbeOptions opt;
    opt.n_starts = 60;
    const auto a = completeness_probe(rw.weight, opt), b = completeness_probe(rw.weight, opt);
    ASSERT_EQ(a.probe_solutions.size(), b.probe_solutions.size());
    for (std::size_t i = 0; i < a.probe_solutions.size(); ++i)
        EXPECT_EQ(a.probe_solutions[i].sigma.coeffs(), b.probe_solutions[i].sigma.coeffs());
    EXPECT_EQ(a.cluster_sizes, b.cluster_sizes);
}

TEST(Probe, WithoutDeflationStartsCollapseToZero) {
    // Omega = I on Z8: the undeflated iteration is drawn to sigma = 0.
    const auto rw = catalog("Z8", "trivial");
    ProbeOptions opt;
    opt.deflate_zero = false;
    const auto plain = completeness_probe(rw.weight, opt);
    EXPECT_GT(plain.zero_solutions, 150u);
    opt.deflate_zero = true;
    const auto deflated = completeness_probe(rw.weight, opt);
    EXPECT_TRUE(deflated.complete);
    EXPECT_EQ(deflated.zero_solutions, 0u);
}

TEST(GroupLike, PermutationSolutionsOnly) {
    ProbeOptions opt;
    opt.n_starts = 500;
    opt.seed = 7;
    for (const char* name : {"Z4", "D4"}) {
        const auto g = catalog_group(name);
        expect_permutations(grouplike_solve(g, opt), g->order());
    }
}

TEST(Antipode, InvariantOnCandidates) {
    const auto rw = catalog("D4", "ext-Z4-cyclic-poly-1");
    for (const auto& p : candidates(rw.weight)) EXPECT_LE(antipode_invariant(p.sigma, rw.weight.omega()), 1e-12);
}

TEST(Reduction, ExtendedWeightsFactorThroughTheSubgroup) {
    for (const char* group : {"S3", "D4", "Q8"}) {
        const auto g = catalog_group(group);
        for (const auto& id : catalog_weight_ids(*g)) {
            const auto rw = catalog(group, id);
            if (!rw.extension) continue;
            for (const auto& p : candidates(rw.weight)) {
                const auto r = reduction_check(p.sigma, rw.extension->embedding, rw.extension->cocycle_h);
                EXPECT_TRUE(r.factorizes) << group << " " << id << " s=" << *p.group_element;
                EXPECT_LE(r.subgroup_residual, 1e-10);
                EXPECT_TRUE(rw.extension->embedding.image().contains(g->mul(g->inv(r.s), *p.group_element)));
            }
        }
    }
}

TEST(Reduction, ElementOutsideTheSubgroupImageDoesNotFactor) {
    const auto rw = catalog("S3", "ext-Z3-cyclic-exp-1");
    // A generic combination of two cosets is not a translate of an element over H.
    const auto sigma = rw.weight.omega() + AlgElement::lambda(rw.group, 1) * rw.weight.omega();
    EXPECT_FALSE(reduction_check(sigma, rw.extension->embedding, rw.extension->cocycle_h).factorizes);
}
