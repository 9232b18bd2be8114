#include <gtest/gtest.h>

#include <random>

#include "gext/equivalence.hpp"
#include "gext/invariants.hpp"
#include "gext/io.hpp"
#include "support.hpp"

using namespace gext;

namespace {

GRPoly t_poly(const GroupPtr& g, int k = 1) { return gr_poly(GRElem::scalar(g, 1), k); }

}  // namespace

TEST(NZC, DirectAndPowerChecksAgree) {
    std::mt19937_64 rng(61);
    for (const auto& g : test::small_groups())
        for (int trial = 0; trial < 6; ++trial) {
            auto a = test::random_t_matrix(g, 3, 2, rng);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) a(i, j) += gr_poly(test::random_elem(g, rng, 0, 1, 0.25));
            EXPECT_EQ(nzc_check(a), nzc_by_powers(a));
            EXPECT_EQ(nzc_check(a), !constant_term_cycle(a).has_value());
        }
}

TEST(NZC, PaperExampleMatrix) {
    auto g = make_group(GroupSpec::cyclic(1));
    auto a = parse_matrix("[[t, 3+t^3],[2*t^5, t]]", g);
    EXPECT_TRUE(nzc_check(a));
    auto cyc = parse_matrix("[[t, 1],[1, t]]", g);
    EXPECT_FALSE(nzc_check(cyc));
}

TEST(Box, ChainReplaysAndPreservesDeterminant) {
    std::mt19937_64 rng(62);
    for (const auto& g : test::small_abelian_groups())
        for (int trial = 0; trial < 4; ++trial) {
            auto a = test::random_t_matrix(g, 1 + trial % 3, 1 + trial % 3, rng);
            auto b = box_construct(a);
            auto rep = verify_chain(b.chain);
            EXPECT_TRUE(rep.valid) << rep.message;
            EXPECT_EQ(det_poly(a), det_poly(b.box));
            EXPECT_EQ(b.box.rows(), a.rows() * static_cast<std::size_t>(std::max(1, degree(a))));
        }
}

TEST(Box, RequiresZeroConstantTerms) {
    auto g = make_group(GroupSpec::cyclic(2));
    EXPECT_THROW(box_construct(parse_matrix("[[1 + t]]", g)), PreconditionFailed);
    EXPECT_THROW(box_construct(parse_matrix("[[t - g*t^2]]", g)), PreconditionFailed);
    EXPECT_NO_THROW(box_construct(parse_matrix("[[t - g*t^2]]", g), ChainMode::el_only));
}

TEST(Diamond, DeterminantCoherenceOnSeededNZC) {
    std::mt19937_64 rng(63);
    int checked = 0;
    for (int trial = 0; trial < 24; ++trial) {
        const auto groups = test::small_abelian_groups();
        const GroupPtr g = groups[trial % groups.size()];
        auto a = test::random_nzc(g, 1 + trial % 3, 1 + trial % 3, rng);
        ASSERT_TRUE(nzc_check(a));
        auto d = diamond_normalize(a);
        auto rep = verify_chain(d.chain);
        EXPECT_TRUE(rep.valid) << rep.message;
        EXPECT_EQ(det_poly(a), det_poly(d.diamond)) << to_string(a);
        EXPECT_TRUE(eval_at_zero(d.cleared).is_zero());
        for (std::size_t k = 0; k + 1 < d.measure_trace.size(); k += 2) EXPECT_LT(d.measure_trace[k + 1], d.measure_trace[k]);
        ++checked;
    }
    EXPECT_GE(checked, 20);
}

TEST(Diamond, RejectsNonNZC) {
    auto g = make_group(GroupSpec::cyclic(2));
    EXPECT_THROW(diamond_normalize(parse_matrix("[[t, 1],[1, t]]", g)), PreconditionFailed);
}

TEST(Core, StripsTransientVertices) {
    auto g = make_group(GroupSpec::cyclic(2));
    auto a = eval_at_zero(parse_matrix("[[e, g, 0], [0, 0, 0], [g, 0, e]]", g));
    EXPECT_EQ(core(a), eval_at_zero(parse_matrix("[[e, 0], [g, e]]", g)));
    EXPECT_TRUE(core(eval_at_zero(parse_matrix("[[0, e], [0, 0]]", g))).is_zero());
}

TEST(Chains, TamperingIsDetected) {
    auto g = make_group(GroupSpec::cyclic(2));
    auto b = box_construct(parse_matrix("[[t + g*t^2, t], [2*t^2, g*t]]", g));
    ASSERT_TRUE(verify_chain(b.chain).valid);
    for (std::size_t k = 0; k < b.chain.moves.size(); ++k) {
        MoveChain bad = b.chain;
        bad.moves[k].r += t_poly(g);
        EXPECT_FALSE(verify_chain(bad).valid) << "move " << k;
    }
    MoveChain bad_end = b.chain;
    bad_end.end(0, 0) += t_poly(g);
    EXPECT_FALSE(verify_chain(bad_end).valid);
    MoveChain negative = b.chain;
    negative.moves[0].r = -negative.moves[0].r;
    EXPECT_FALSE(verify_chain(negative).valid);
}

TEST(Chains, ReverseAndCompose) {
    auto g = make_group(GroupSpec::cyclic(3));
    auto a = parse_matrix("[[t + g*t^3, t^2], [g^2*t, t]]", g);
    auto b = box_construct(a, ChainMode::el_only);
    ASSERT_TRUE(verify_chain(b.chain).valid);
    ChainBuilder pre(one_minus(t_times(b.box)), ChainMode::el_only);
    pre.right(0, 1, t_poly(g, 2));
    MoveChain tail = pre.finish();
    auto both = compose_chains(b.chain, tail);
    EXPECT_TRUE(verify_chain(both).valid);
    auto back = reverse_chain(tail);
    EXPECT_TRUE(verify_chain(back).valid);
    EXPECT_THROW(compose_chains(tail, b.chain), InvalidArgument);
}

TEST(Witnesses, SSEAndTampering) {
    std::mt19937_64 rng(64);
    for (const auto& g : test::small_groups()) {
        auto r = constant_poly_matrix(test::random_matrix(g, 2, rng, 0, 2));
        MatGRPoly s(2, 3, gr_poly_zero(g));
        auto s0 = test::random_matrix(g, 3, rng, 1, 2, 1.0);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 3; ++j) s(i, j) = gr_poly(s0(i, j));
        MatGRPoly r3(3, 2, gr_poly_zero(g));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 2; ++j) r3(i, j) = r(i % 2, j);
        SSEWitness w;
        w.steps.push_back({r3, s});
        const MatGRPoly a = r3 * s, b = s * r3;
        EXPECT_TRUE(verify_sse(a, b, w).valid);
        SSEWitness bad = w;
        bad.steps[0].first(1, 1) += gr_poly(GRElem::scalar(g, 1));
        EXPECT_FALSE(verify_sse(a, b, bad).valid);
        SSEWitness neg = w;
        neg.steps[0].first(0, 0) -= gr_poly(GRElem::scalar(g, 5));
        EXPECT_FALSE(verify_sse(a, b, neg).valid);
    }
}

TEST(Witnesses, SEFromSSE) {
    std::mt19937_64 rng(65);
    auto g = make_group(GroupSpec::symmetric(3));
    auto r = constant_poly_matrix(test::random_matrix(g, 2, rng, 0, 1));
    auto s = constant_poly_matrix(test::random_matrix(g, 2, rng, 0, 1));
    SEWitness w{Semiring::zplus_g, 1, r, s};
    EXPECT_TRUE(verify_se(r * s, s * r, w).valid);
    w.lag = 2;
    EXPECT_FALSE(verify_se(r * s, s * r, w).valid);
}

TEST(ForcedSE, LiftsIntegerWitnessOnUEntries) {
    auto g = make_group(GroupSpec::cyclic(2));
    const GroupPtr tg = trivial_group();
    auto a = eval_at_zero(parse_matrix("[[e + g]]", g));
    auto b = eval_at_zero(parse_matrix("[[e + g, 0], [0, 0]]", g));
    SEWitness zw{Semiring::z_g, 1, constant_poly_matrix(lift_integer(int_matrix({{2, 0}}), tg)),
                 constant_poly_matrix(lift_integer(int_matrix({{1}, {0}}), tg))};
    for (unsigned long p : {1ul, 2ul}) {
        SEWitness w = forced_se_lift(a, b, p, zw);
        EXPECT_EQ(w.lag, 2 * p + 1);
        auto rep = verify_se(constant_poly_matrix(a), constant_poly_matrix(b), w);
        EXPECT_TRUE(rep.valid) << rep.message;
        SEWitness bad = w;
        bad.r(0, 0) += gr_poly(GRElem::term(g, 1, 1));
        EXPECT_FALSE(verify_se(constant_poly_matrix(a), constant_poly_matrix(b), bad).valid);
    }
}

TEST(ForcedSE, RequiresPowersInU) {
    auto g = make_group(GroupSpec::cyclic(2));
    const GroupPtr tg = trivial_group();
    auto a = eval_at_zero(parse_matrix("[[2*e + g]]", g));
    SEWitness zw{Semiring::z_g, 1, constant_poly_matrix(lift_integer(int_matrix({{1}}), tg)),
                 constant_poly_matrix(lift_integer(int_matrix({{3}}), tg))};
    EXPECT_THROW(forced_se_lift(a, a, 2, zw), PreconditionFailed);
}

TEST(Amalgamation, BarVanishesAndChainsReplayForEveryR) {
    auto g = make_group(GroupSpec::cyclic(2));
    auto n = eval_at_zero(parse_matrix("[[0, g, e - g], [0, 0, 2*g], [0, 0, 0]]", g));
    std::vector<Integer> magnitudes;
    for (int r = 1; r <= 10; ++r) {
        auto am = amalg_nilpotent(n, r);
        EXPECT_TRUE(bar_matrix(am.m).is_zero());
        auto rep = verify_chain(am.chain);
        EXPECT_TRUE(rep.valid) << rep.message;
        EXPECT_EQ(am.chain.mode, ChainMode::el_only);
        Integer biggest = 0;
        for (std::size_t i = 0; i < am.m.rows(); ++i)
            for (std::size_t j = 0; j < am.m.cols(); ++j)
                for (const auto& [k, c] : am.m(i, j).terms())
                    for (const auto& x : c.coeffs()) biggest = std::max(biggest, Integer(abs(x)));
        magnitudes.push_back(biggest);
    }
    for (const auto& m : magnitudes) EXPECT_EQ(m, magnitudes.front());
}

TEST(Amalgamation, NonNilpotentIsRefused) {
    auto g = make_group(GroupSpec::cyclic(2));
    EXPECT_THROW(amalg_nilpotent(eval_at_zero(parse_matrix("[[0, g], [e, 0]]", g)), 1), PreconditionFailed);
}

TEST(VF, InversesAreExact) {
    auto g = make_group(GroupSpec::cyclic(3));
    auto n = eval_at_zero(parse_matrix("[[0, g, g^2], [0, 0, e], [0, 0, 0]]", g));
    for (int r = 1; r <= 4; ++r) {
        auto v = vf_reps(n, r);
        EXPECT_TRUE((v.v * v.v_inv).is_identity());
        EXPECT_TRUE((v.f * v.f_inv).is_identity());
    }
}

TEST(Absorb, StepsArePositiveMoves) {
    auto g = make_group(GroupSpec::cyclic(2));
    auto a = eval_at_zero(parse_matrix("[[e + g, e], [g, e + g]]", g));
    MatGRPoly state = one_minus(t_times(a));
    for (auto dir : {AbsorbDirection::column, AbsorbDirection::row, AbsorbDirection::column}) {
        auto step = absorb_step(state, dir);
        MoveChain c{state, step.state, step.moves, ChainMode::positive};
        EXPECT_TRUE(verify_chain(c).valid);
        EXPECT_EQ(det_poly(one_minus(state)), det_poly(one_minus(step.state)));
        state = step.state;
    }
}
