#include <gtest/gtest.h>

#include <random>

#include "gext/intlinalg.hpp"
#include "gext/polymat.hpp"
#include "support.hpp"

using namespace gext;

namespace {

GRPoly random_poly(const GroupPtr& g, std::mt19937_64& rng, int deg) {
    GRPoly p = gr_poly_zero(g);
    for (int k = 0; k <= deg; ++k) p += gr_poly(test::random_elem(g, rng, -2, 2), k);
    return p;
}

}  // namespace

TEST(Poly, RingAxioms) {
    std::mt19937_64 rng(21);
    for (const auto& g : test::small_groups())
        for (int trial = 0; trial < 10; ++trial) {
            auto x = random_poly(g, rng, 3), y = random_poly(g, rng, 2), z = random_poly(g, rng, 2);
            EXPECT_EQ((x * y) * z, x * (y * z));
            EXPECT_EQ(x * (y + z), x * y + x * z);
            EXPECT_EQ(x - x, gr_poly_zero(g));
        }
}

TEST(Poly, DegreesAndEvaluation) {
    auto g = make_group(GroupSpec::cyclic(2));
    GRPoly p = gr_poly(GRElem::term(g, 1, 3), 2) + gr_poly(GRElem::scalar(g, 1), 5);
    EXPECT_EQ(p.degree(), 5);
    EXPECT_EQ(p.low_degree(), 2);
    EXPECT_EQ(p.at_one(), GRElem::term(g, 1, 3) + GRElem::scalar(g, 1));
    EXPECT_TRUE(p.constant_term().is_zero());
    EXPECT_EQ(p.shifted(1).degree(), 6);
    EXPECT_EQ(p.truncated(3).degree(), 2);
    // cancelling terms disappear
    EXPECT_TRUE((p - p).is_zero());
    EXPECT_EQ((p - p).degree(), -1);
}

TEST(Matrix, ProductIsAssociativeAndBarIsMultiplicative) {
    std::mt19937_64 rng(22);
    for (const auto& g : test::small_groups())
        for (int trial = 0; trial < 5; ++trial) {
            auto a = test::random_matrix(g, 3, rng, -2, 2), b = test::random_matrix(g, 3, rng, -2, 2),
                 c = test::random_matrix(g, 3, rng, -2, 2);
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(bar_matrix(a * b), bar_matrix(a) * bar_matrix(b));
        }
}

TEST(Matrix, TildeLiftIsMultiplicative) {
    std::mt19937_64 rng(23);
    for (const auto& g : test::small_groups())
        for (int trial = 0; trial < 5; ++trial) {
            auto a = test::random_matrix(g, 2, rng, -2, 2), b = test::random_matrix(g, 2, rng, -2, 2);
            EXPECT_EQ(tilde_lift(a * b), tilde_lift(a) * tilde_lift(b));
            EXPECT_EQ(tilde_lift(a + b), tilde_lift(a) + tilde_lift(b));
        }
}

TEST(Matrix, TildeLiftOfFiveG) {
    auto g = make_group(GroupSpec::cyclic(2));
    MatGR a(1, 1, GRElem(g));
    a(0, 0) = GRElem::term(g, 1, 5);
    EXPECT_EQ(tilde_lift(a), int_matrix({{0, 5}, {5, 0}}));
}

TEST(Matrix, TransposeOppositeIsAnAntiHomomorphism) {
    std::mt19937_64 rng(24);
    auto g = make_group(GroupSpec::symmetric(3));
    for (int trial = 0; trial < 5; ++trial) {
        auto a = test::random_matrix(g, 3, rng, -2, 2), b = test::random_matrix(g, 3, rng, -2, 2);
        EXPECT_EQ(transpose_opposite(a * b), transpose_opposite(b) * transpose_opposite(a));
    }
}

TEST(Matrix, BerkowitzDeterminantMatchesCofactorExpansion) {
    std::mt19937_64 rng(25);
    for (const auto& g : test::small_abelian_groups())
        for (std::size_t n = 1; n <= 4; ++n) {
            MatGRPoly a(n, n, gr_poly_zero(g));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) a(i, j) = random_poly(g, rng, 2);
            EXPECT_EQ(determinant(a), test::laplace_det(a));
        }
}

TEST(Matrix, DeterminantIsMultiplicative) {
    std::mt19937_64 rng(26);
    for (const auto& g : test::small_abelian_groups()) {
        auto a = test::random_matrix(g, 3, rng, -3, 3), b = test::random_matrix(g, 3, rng, -3, 3);
        EXPECT_EQ(determinant(a * b), determinant(a) * determinant(b));
    }
}

TEST(Matrix, ShapeMismatchThrows) {
    IntMatrix a(2, 3, Integer(0)), b(2, 3, Integer(0));
    EXPECT_THROW(a * b, InvalidArgument);
    EXPECT_THROW(determinant(a), InvalidArgument);
}

TEST(Matrix, NonCommutativeDeterminantIsRefused) {
    auto g = make_group(GroupSpec::symmetric(3));
    MatGR a = MatGR::identity(2, GRElem(g));
    EXPECT_THROW(determinant(a), PreconditionFailed);
}
