#include <gtest/gtest.h>

#include <set>

#include "gext/groups.hpp"
#include "support.hpp"

using namespace gext;

namespace {

void expect_group_axioms(const FiniteGroup& g) {
    const std::size_t m = g.order();
    for (std::size_t x = 0; x < m; ++x) {
        EXPECT_EQ(g.mul(0, x), x);
        EXPECT_EQ(g.mul(x, 0), x);
        EXPECT_EQ(g.mul(x, g.inv(x)), 0u);
        for (std::size_t y = 0; y < m; ++y)
            for (std::size_t z = 0; z < m; ++z) ASSERT_EQ(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
    }
}

std::size_t class_total(const FiniteGroup& g) {
    std::size_t s = 0;
    for (const auto& c : g.classes()) s += c.size();
    return s;
}

}  // namespace

TEST(Groups, OrdersAndClassCounts) {
    struct Case {
        GroupSpec spec;
        std::size_t order, classes;
        bool abelian;
    };
    const std::vector<Case> cases{
        {GroupSpec::cyclic(1), 1, 1, true},
        {GroupSpec::cyclic(5), 5, 5, true},
        {GroupSpec::dihedral(3), 6, 3, false},
        {GroupSpec::dihedral(4), 8, 5, false},
        {GroupSpec::dihedral(5), 10, 4, false},
        {GroupSpec::symmetric(3), 6, 3, false},
        {GroupSpec::symmetric(4), 24, 5, false},
        {GroupSpec::product({GroupSpec::cyclic(2), GroupSpec::cyclic(3)}), 6, 6, true},
        {GroupSpec::product({GroupSpec::cyclic(2), GroupSpec::dihedral(3)}), 12, 6, false},
    };
    for (const auto& c : cases) {
        auto g = make_group(c.spec);
        EXPECT_EQ(g->order(), c.order);
        EXPECT_EQ(g->class_count(), c.classes);
        EXPECT_EQ(g->is_abelian(), c.abelian);
        EXPECT_EQ(class_total(*g), g->order());
        expect_group_axioms(*g);
    }
}

TEST(Groups, ClassesAreConjugationOrbits) {
    for (auto g : {make_group(GroupSpec::symmetric(4)), make_group(GroupSpec::dihedral(6))}) {
        for (std::size_t x = 0; x < g->order(); ++x)
            for (std::size_t h = 0; h < g->order(); ++h) EXPECT_EQ(g->class_of(g->conj(h, x)), g->class_of(x));
    }
}

TEST(Groups, SymmetricGroupCompositionRule) {
    auto g = make_group(GroupSpec::symmetric(3));
    // (gh)(x) = g(h(x)): (1 2)(2 3) sends 1 -> 2 -> ... images of 0-based points
    auto a = *g->find_permutation({1, 0, 2});
    auto b = *g->find_permutation({0, 2, 1});
    auto ab = *g->find_permutation({1, 2, 0});
    EXPECT_EQ(g->mul(a, b), ab);
    EXPECT_EQ(g->element_order(ab), 3u);
}

TEST(Groups, SameSpecGivesSameGroup) {
    EXPECT_EQ(make_group(GroupSpec::cyclic(4, "s")), make_group(GroupSpec::cyclic(4, "s")));
    EXPECT_NE(make_group(GroupSpec::cyclic(4, "s")), make_group(GroupSpec::cyclic(4)));
}

TEST(Groups, ExplicitTableMatchesCyclic) {
    std::vector<std::vector<std::size_t>> t(3, std::vector<std::size_t>(3));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) t[i][j] = (i + j) % 3;
    auto g = make_group(GroupSpec::explicit_table(t, {"e", "a", "b"}));
    EXPECT_EQ(g->order(), 3u);
    EXPECT_TRUE(g->is_abelian());
    EXPECT_EQ(g->find_name("a"), std::optional<std::size_t>(1));
    expect_group_axioms(*g);
}

TEST(Groups, ExplicitTableRejectsNonGroups) {
    std::vector<std::vector<std::size_t>> not_assoc{{0, 1, 2}, {1, 0, 2}, {2, 2, 0}};
    EXPECT_THROW(make_group(GroupSpec::explicit_table(not_assoc)), InvalidArgument);
    std::vector<std::vector<std::size_t>> no_identity{{1, 0}, {0, 1}};
    EXPECT_THROW(make_group(GroupSpec::explicit_table(no_identity)), InvalidArgument);
    EXPECT_THROW(make_group(GroupSpec::explicit_table({{0, 1}})), InvalidArgument);
    EXPECT_THROW(make_group(GroupSpec::cyclic(0)), InvalidArgument);
}

TEST(Groups, ElementOrdersDivideGroupOrder) {
    for (const auto& g : test::small_groups())
        for (std::size_t x = 0; x < g->order(); ++x) EXPECT_EQ(g->order() % g->element_order(x), 0u);
}

TEST(Groups, SymmetricFactorsInProductsAreRefused) {
    EXPECT_THROW(make_group(GroupSpec::product({GroupSpec::cyclic(2), GroupSpec::symmetric(3)})), InvalidArgument);
}
