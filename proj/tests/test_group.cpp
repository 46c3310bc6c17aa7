#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <string>

#include "beurling/catalog.hpp"
#include "beurling/group.hpp"
#include "oracles.hpp"

using namespace beurling;

namespace {

std::map<std::size_t, std::size_t> order_census(const FiniteGroup& g) {
    std::map<std::size_t, std::size_t> c;
    for (std::size_t x = 0; x < g.order(); ++x) ++c[g.element_order(x)];
    return c;
}

}  // namespace

TEST(Group, CyclicTableIsAdditionModN) {
    const auto g = make_cyclic(5);
    EXPECT_EQ(g.order(), 5u);
    EXPECT_EQ(g.name(), "Z5");
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b) EXPECT_EQ(g.mul(a, b), (a + b) % 5);
    EXPECT_EQ(g.inv(2), 3u);
    EXPECT_EQ(g.cyclic_factors(), std::vector<std::size_t>{5});
}

TEST(Group, ProductIndexing) {
    const auto g = make_group("Z2xZ4");
    EXPECT_EQ(g.order(), 8u);
    EXPECT_EQ(g.cyclic_factors(), (std::vector<std::size_t>{2, 4}));
    // (1,3) + (1,2) = (0,1)
    EXPECT_EQ(g.mul(1 * 4 + 3, 1 * 4 + 2), 0u * 4 + 1);
    EXPECT_TRUE(g.is_abelian());
}

TEST(Group, S3HasThreeInvolutions) {
    const auto g = make_group("S3");
    EXPECT_EQ(g.order(), 6u);
    EXPECT_FALSE(g.is_abelian());
    const auto c = order_census(g);
    EXPECT_EQ(c.at(2), 3u);
    EXPECT_EQ(c.at(3), 2u);
    EXPECT_EQ(g.conjugacy_classes().size(), 3u);
}

TEST(Group, D4AndQ8Census) {
    const auto d4 = make_group("D4");
    const auto q8 = make_group("Q8");
    EXPECT_EQ(order_census(d4).at(2), 5u);
    EXPECT_EQ(order_census(d4).at(4), 2u);
    EXPECT_EQ(order_census(q8).at(2), 1u);
    EXPECT_EQ(order_census(q8).at(4), 6u);
    EXPECT_EQ(d4.conjugacy_classes().size(), 5u);
    EXPECT_EQ(q8.conjugacy_classes().size(), 5u);
    EXPECT_FALSE(d4.same_as(q8));
}

TEST(Group, UnknownNameRejected) {
    EXPECT_THROW(make_group("A5"), InvalidArgument);
    EXPECT_THROW(make_group("Z0"), InvalidArgument);
}

TEST(Group, CheckReportsLatinViolationAtRow) {
    const CayleyTable t{"bad", {{0, 1}, {1, 1}}};
    const auto r = group_check(t);
    ASSERT_FALSE(r.ok());
    EXPECT_NE(r.summary().find("Latin-square violation at row 1"), std::string::npos) << r.summary();
}

TEST(Group, CheckReportsAssociativityWitness) {
    // Latin square with identity 0 that is not associative (order 5 loop).
    const CayleyTable t{"loop", {{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}}};
    const auto r = group_check(t);
    ASSERT_FALSE(r.ok());
    const bool assoc = std::any_of(r.violations.begin(), r.violations.end(),
                                   [](const GroupViolation& v) { return v.axiom == "associativity"; });
    EXPECT_TRUE(assoc) << r.summary();
    EXPECT_NE(r.summary().find("associativity fails at ("), std::string::npos);
}

TEST(Group, FromCayleyThrowsOnInvalidTable) {
    EXPECT_THROW(FiniteGroup::from_cayley({"bad", {{0, 1}, {1, 1}}}), InvalidArgument);
    EXPECT_THROW(FiniteGroup::from_cayley({"shape", {{0, 1}, {1}}}), InvalidArgument);
}

TEST(GroupFile, LoadsQ8Sample) {
    const auto g = load_cayley(std::string(BEURLING_SAMPLES_DIR) + "/q8.json");
    EXPECT_EQ(g.order(), 8u);
    EXPECT_EQ(g.name(), "Q8-file");
    EXPECT_EQ(order_census(g).at(2), 1u);
    EXPECT_TRUE(g.same_as(make_group("Q8")));
}

TEST(GroupFile, BrokenSampleNamesTheRow) {
    try {
        load_cayley(std::string(BEURLING_SAMPLES_DIR) + "/z2_bad.json");
        FAIL() << "expected a Latin-square error";
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
    }
}

TEST(GroupFile, ParseFailures) {
    EXPECT_THROW(parse_cayley("{"), InvalidArgument);
    EXPECT_THROW(parse_cayley(R"({"name": "x"})"), InvalidArgument);
    EXPECT_THROW(parse_cayley(R"({"order": 3, "table": [[0,1],[1,0]]})"), InvalidArgument);
}

TEST(GroupFile, JsonRoundTrip) {
    for (const auto& name : catalog_group_names()) {
        const auto g = make_group(name);
        EXPECT_TRUE(parse_cayley(cayley_json(g)).same_as(g)) << name;
    }
}

TEST(Subgroups, Z4HasThree) {
    const auto subs = enumerate_subgroups(share(make_cyclic(4)));
    ASSERT_EQ(subs.size(), 3u);
    EXPECT_EQ(subs[0].elements(), std::vector<std::size_t>{0});
    EXPECT_EQ(subs[1].elements(), (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(subs[2].elements(), (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Subgroups, S3Lattice) {
    const auto subs = enumerate_subgroups(share(make_group("S3")));
    std::map<std::size_t, std::size_t> sizes;
    for (const auto& h : subs) ++sizes[h.size()];
    EXPECT_EQ(subs.size(), 6u);
    EXPECT_EQ(sizes[1], 1u);
    EXPECT_EQ(sizes[2], 3u);
    EXPECT_EQ(sizes[3], 1u);
    EXPECT_EQ(sizes[6], 1u);
}

class SubgroupOracle : public ::testing::TestWithParam<std::string> {};

TEST_P(SubgroupOracle, MatchesBruteForceClosure) {
    const auto g = catalog_group(GetParam());
    const auto subs = enumerate_subgroups(g);
    const auto expected = oracle::brute_force_subgroups(*g);
    ASSERT_EQ(subs.size(), expected.size());
    for (std::size_t i = 0; i < subs.size(); ++i) EXPECT_EQ(subs[i].elements(), expected[i]);
}

INSTANTIATE_TEST_SUITE_P(Catalog, SubgroupOracle, ::testing::ValuesIn(catalog_group_names()),
                         [](const auto& info) { return info.param; });

TEST(Subgroups, FrozenCounts) {
    // Divisor counts for cyclic groups; lattice sizes for the rest.
    const std::map<std::string, std::size_t> expected{{"Z12", 6}, {"Z7", 2}, {"Z2xZ4", 8}, {"D4", 10}, {"Q8", 6}};
    for (const auto& [name, count] : expected) EXPECT_EQ(enumerate_subgroups(catalog_group(name)).size(), count) << name;
}

TEST(Subgroups, ConstructorValidatesClosure) {
    const auto g = share(make_cyclic(4));
    EXPECT_THROW(Subgroup(g, {0, 1}), InvalidArgument);
    EXPECT_THROW(Subgroup(g, {1, 3}), InvalidArgument);
    const Subgroup h(g, {2, 0});
    EXPECT_EQ(h.elements(), (std::vector<std::size_t>{0, 2}));
    EXPECT_TRUE(h.contains(2));
    EXPECT_EQ(h.as_group().order(), 2u);
}

TEST(Embedding, CyclicIntoS3) {
    const auto s3 = catalog_group("S3");
    for (std::size_t x = 0; x < s3->order(); ++x) {
        const auto e = GroupEmbedding::cyclic_into(s3, x);
        EXPECT_NO_THROW(e.validate());
        EXPECT_EQ(e.source->order(), s3->element_order(x));
        EXPECT_EQ(e.image().size(), s3->element_order(x));
        for (std::size_t k = 0; k < e.source->order(); ++k)
            for (std::size_t l = 0; l < e.source->order(); ++l)
                EXPECT_EQ(e.map[e.source->mul(k, l)], s3->mul(e.map[k], e.map[l]));
    }
}

TEST(Embedding, NonHomomorphismRejected) {
    const auto z4 = catalog_group("Z4");
    GroupEmbedding e{catalog_group("Z2"), z4, {0, 1}};
    EXPECT_THROW(e.validate(), InvalidArgument);
}
