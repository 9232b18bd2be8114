#include <gtest/gtest.h>

#include <random>

#include "gext/dynamics_oracle.hpp"
#include "gext/invariants.hpp"
#include "support.hpp"

using namespace gext;

TEST(Oracle, PeriodicWeightsEqualTraces) {
    std::mt19937_64 rng(51);
    for (const auto& g : test::small_groups())
        for (int trial = 0; trial < 4; ++trial) {
            auto a = test::random_matrix(g, 1 + trial % 3, rng, 0, 1, 0.35);
            auto tr = trace_series(a, 6);
            for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(periodic_weights(labeled_graph(a), n), tr[n - 1]);
        }
}

TEST(Oracle, SkewFixedPointsEqualLiftTraces) {
    std::mt19937_64 rng(52);
    for (const auto& g : test::small_groups())
        for (int trial = 0; trial < 4; ++trial) {
            auto a = test::random_matrix(g, 1 + trial % 3, rng, 0, 1, 0.35);
            auto lift = tilde_lift(a);
            IntMatrix p = lift;
            auto tr = trace_series(a, 5);
            for (std::size_t n = 1; n <= 5; ++n) {
                const Integer fixed = skew_fixed_count(labeled_graph(a), n);
                EXPECT_EQ(fixed, trace(p));
                EXPECT_EQ(fixed, Integer(static_cast<unsigned long>(g->order())) * tr[n - 1][0]);
                p = p * lift;
            }
        }
}

TEST(Oracle, BudgetIsEnforced) {
    auto g = make_group(GroupSpec::cyclic(2));
    MatGR a(1, 1, GRElem(g));
    a(0, 0) = GRElem::scalar(g, 3) + GRElem::term(g, 1, 3);
    EXPECT_THROW(periodic_weights(labeled_graph(a), 10, Integer(1000)), BudgetExceeded);
    EXPECT_THROW(skew_fixed_count(labeled_graph(a), 10, Integer(1000)), BudgetExceeded);
    EXPECT_NO_THROW(periodic_weights(labeled_graph(a), 3, Integer(1000)));
}

TEST(Oracle, RejectsNegativeLabelsAndZeroPeriod) {
    auto g = make_group(GroupSpec::cyclic(2));
    MatGR a(1, 1, GRElem(g));
    a(0, 0) = GRElem::term(g, 1, -1);
    EXPECT_THROW(labeled_graph(a), PreconditionFailed);
    a(0, 0) = GRElem::term(g, 1, 1);
    EXPECT_THROW(periodic_weights(labeled_graph(a), 0), InvalidArgument);
}
