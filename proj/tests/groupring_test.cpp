#include <gtest/gtest.h>

#include <random>

#include "gext/groupring.hpp"
#include "gext/polymat.hpp"
#include "support.hpp"

using namespace gext;

TEST(GroupRing, RingAxiomsOnRandomElements) {
    std::mt19937_64 rng(11);
    for (const auto& g : test::small_groups()) {
        for (int trial = 0; trial < 20; ++trial) {
            auto x = test::random_elem(g, rng, -3, 3), y = test::random_elem(g, rng, -3, 3), z = test::random_elem(g, rng, -3, 3);
            EXPECT_EQ((x * y) * z, x * (y * z));
            EXPECT_EQ(x * (y + z), x * y + x * z);
            EXPECT_EQ((x + y) * z, x * z + y * z);
            EXPECT_EQ(one_like(x) * x, x);
            EXPECT_EQ(x - x, zero_like(x));
            if (g->is_abelian()) {
                EXPECT_EQ(x * y, y * x);
            }
        }
    }
}

TEST(GroupRing, AugmentationIsARingMap) {
    std::mt19937_64 rng(12);
    for (const auto& g : test::small_groups())
        for (int trial = 0; trial < 20; ++trial) {
            auto x = test::random_elem(g, rng, -4, 4), y = test::random_elem(g, rng, -4, 4);
            EXPECT_EQ(augment(x * y), augment(x) * augment(y));
            EXPECT_EQ(augment(x + y), augment(x) + augment(y));
        }
}

TEST(GroupRing, RegularRepresentationIsMultiplicative) {
    std::mt19937_64 rng(13);
    for (const auto& g : test::small_groups())
        for (int trial = 0; trial < 10; ++trial) {
            auto x = test::random_elem(g, rng, -3, 3), y = test::random_elem(g, rng, -3, 3);
            EXPECT_EQ(regular_rep(x * y), regular_rep(x) * regular_rep(y));
            EXPECT_EQ(trace(regular_rep(x)), Integer(static_cast<unsigned long>(g->order())) * x[0]);
        }
}

TEST(GroupRing, SumOfGroupAbsorbs) {
    std::mt19937_64 rng(14);
    for (const auto& g : test::small_groups()) {
        const GRElem u = GRElem::sum_of_group(g);
        for (int trial = 0; trial < 10; ++trial) {
            auto x = test::random_elem(g, rng, -3, 3);
            GRElem expect = u;
            expect *= augment(x);
            EXPECT_EQ(x * u, expect);
            EXPECT_EQ(u * x, expect);
        }
        GRElem uu = u;
        uu *= Integer(static_cast<unsigned long>(g->order()));
        EXPECT_EQ(u * u, uu);
        EXPECT_TRUE(u.is_multiple_of_u());
        EXPECT_TRUE(u.is_strictly_positive());
    }
}

TEST(GroupRing, OppositeReversesProducts) {
    std::mt19937_64 rng(15);
    auto g = make_group(GroupSpec::symmetric(3));
    for (int trial = 0; trial < 20; ++trial) {
        auto x = test::random_elem(g, rng, -3, 3), y = test::random_elem(g, rng, -3, 3);
        EXPECT_EQ(opposite(x * y), opposite(y) * opposite(x));
    }
}

TEST(GroupRing, KappaIsAdditiveAndConjugationInvariant) {
    std::mt19937_64 rng(16);
    auto g = make_group(GroupSpec::symmetric(4));
    for (int trial = 0; trial < 20; ++trial) {
        auto x = test::random_elem(g, rng, -3, 3), y = test::random_elem(g, rng, -3, 3);
        EXPECT_EQ(kappa_project(x + y), kappa_project(x) + kappa_project(y));
        // kappa(xy) = kappa(yx): traces are class functions
        EXPECT_EQ(kappa_project(x * y), kappa_project(y * x));
    }
}

TEST(GroupRing, MixingGroupsIsRejected) {
    auto a = GRElem::scalar(make_group(GroupSpec::cyclic(2)), 1);
    auto b = GRElem::scalar(make_group(GroupSpec::cyclic(3)), 1);
    EXPECT_THROW(a + b, InvalidArgument);
    EXPECT_THROW(a * b, InvalidArgument);
}

TEST(GroupRing, Printing) {
    auto g = make_group(GroupSpec::cyclic(3));
    GRElem x(g);
    x[0] = 2;
    x[1] = 1;
    x[2] = -3;
    EXPECT_EQ(to_string(x), "2 + g - 3*g^2");
    EXPECT_EQ(to_string(GRElem(g)), "0");
}
