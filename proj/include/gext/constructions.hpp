#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "core.hpp"
#include "equivalence.hpp"
#include "groupring.hpp"
#include "intlinalg.hpp"
#include "invariants.hpp"
#include "polymat.hpp"

namespace gext {

namespace detail {

inline GRPoly u_poly(const GroupPtr& g, int degree, const Integer& c = 1) {
    GRElem u = GRElem::sum_of_group(g);
    u *= c;
    return gr_poly(u, degree);
}

inline GRPoly e_poly(const GroupPtr& g, int degree, const Integer& c = 1) { return gr_poly(GRElem::scalar(g, c), degree); }

inline GRPoly poly_power(const GRPoly& p, int k) {
    GRPoly out = GRPoly::constant(one_like(p.zero()));
    for (int i = 0; i < k; ++i) out = out * p;
    return out;
}

inline bool poly_nonnegative(const GRPoly& p) {
    for (const auto& [k, c] : p.terms())
        if (!c.is_nonnegative()) return false;
    return true;
}

inline bool in_t_zplus(const MatGRPoly& a) { return is_nonnegative(a) && eval_at_zero(a).is_zero(); }

inline bool in_t_zplus(const IntPolyMatrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (const auto& [k, c] : a(i, j).terms())
                if (k == 0 || sgn(c) < 0) return false;
    return true;
}

inline std::vector<std::pair<std::size_t, std::size_t>> negative_entries(const MatGRPoly& a) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!poly_nonnegative(a(i, j))) out.emplace_back(i, j);
    return out;
}

}  // namespace detail

/// G-primitivity of A^box read on its core; box vertices fed by zero columns of the top coefficient are transient.
inline GPrimitivity box_primitivity(const MatGRPoly& a) {
    const MatGR c = core(box_matrix(a));
    if (c.is_zero()) {
        GPrimitivity out;
        out.g_primitive = false;
        out.reason = "core is empty";
        return out;
    }
    return g_primitive_test(c);
}

// ---- C_k / D_k / F_k family ----

struct FamilyParams {
    GroupPtr group;
    std::size_t g = 1;
    std::size_t k = 0;
    std::vector<int> exponents;  // n_1 < ... < n_k
};

struct FamilyResult {
    MatGRPoly c, d, f;
    MatGRPoly u, v;
    GRPoly p;
    bool d_identity = false;  // D = U^-1 C U
    bool f_identity = false;  // F = V D V^-1
    bool bar_matches = false; // bar(F_k) = bar(F_0)
};

inline void validate(const FamilyParams& p) {
    if (!p.group) throw InvalidArgument("family needs a group");
    if (p.g == 0 || p.g >= p.group->order()) throw InvalidArgument("g must be a non-identity element");
    if (p.exponents.size() != p.k) throw InvalidArgument("need exactly k exponents");
    for (std::size_t i = 0; i < p.exponents.size(); ++i) {
        if (p.exponents[i] < 1) throw InvalidArgument("exponents must be positive");
        if (i > 0 && p.exponents[i] <= p.exponents[i - 1]) throw InvalidArgument("exponents must be strictly increasing");
    }
}

inline GRPoly family_p(const FamilyParams& p) {
    GRPoly out = gr_poly_zero(p.group);
    const GRElem eg = GRElem::scalar(p.group, 1) - GRElem::term(p.group, p.g);
    for (int n : p.exponents) out += gr_poly(eg, n);
    return out;
}

inline FamilyResult family_ck_fk(const FamilyParams& params) {
    validate(params);
    const GroupPtr g = params.group;
    const GRPoly s = detail::u_poly(g, 1), w = detail::e_poly(g, 1), z = gr_poly_zero(g);
    const GRPoly p = family_p(params);
    auto mul = [](int c, const GRPoly& x) { return Integer(c) * x; };
    FamilyResult out;
    out.p = p;
    const GRPoly proto = z;
    out.c = MatGRPoly::from_rows({{mul(4, s), s, s, z, z},
                                  {mul(4, s), s, s, z, z},
                                  {mul(4, s), mul(2, s), mul(2, s), z, z},
                                  {z, z, z, w, p},
                                  {z, z, z, z, w}},
                                 proto);
    const GRPoly x34 = mul(2, s) - w;
    const GRPoly x35 = mul(2, s) - w - p;
    const MatGRPoly d_disp = MatGRPoly::from_rows({{mul(4, s), s, s, s, s},
                                                   {mul(4, s), s, s, s, s},
                                                   {mul(4, s), mul(2, s), mul(2, s), x34, x35},
                                                   {z, z, z, w, p},
                                                   {z, z, z, z, w}},
                                                  proto);
    const MatGRPoly f_disp = MatGRPoly::from_rows({{mul(2, s), s, s, s, s},
                                                   {mul(2, s), s, s, s, s},
                                                   {mul(2, w) + p, mul(2, s), mul(2, s), x34, x35},
                                                   {mul(2, s) - w - p, s, s, s + w, s + p},
                                                   {mul(2, s) - w, s, s, s, s + w}},
                                                  proto);
    const MatGRPoly one = identity_poly_matrix(5, g);
    const GRPoly unit = gr_poly(GRElem::scalar(g, 1));
    out.u = one;
    out.u(2, 3) = unit;
    out.u(2, 4) = unit;
    out.v = one;
    out.v(3, 0) = unit;
    out.v(4, 0) = unit;
    MatGRPoly u_inv = one, v_inv = one;
    u_inv(2, 3) = -unit;
    u_inv(2, 4) = -unit;
    v_inv(3, 0) = -unit;
    v_inv(4, 0) = -unit;
    if (out.u * u_inv != one || out.v * v_inv != one) throw Error("U or V inverse is wrong");
    out.d = u_inv * out.c * out.u;
    out.f = out.v * out.d * v_inv;
    out.d_identity = out.d == d_disp;
    out.f_identity = out.f == f_disp;
    FamilyParams base{g, params.g, 0, {}};
    if (params.k == 0) {
        out.bar_matches = true;
    } else {
        out.bar_matches = bar_matrix(out.f) == bar_matrix(family_ck_fk(base).f);
    }
    return out;
}

struct FamilyRepair {
    MatGRPoly b;                 // B_k
    MoveChain chain;             // I - F_k -> I - B_k, el_only
    bool b_in_t_zplus = false;
    bool bars_in_t_zplus = false;  // every intermediate bar(B_(i)) over tZ+[t]
    bool multipliers_in_t = true;
    std::optional<GPrimitivity> box_primitivity;
    std::vector<std::pair<std::size_t, std::size_t>> negative;
};

/// Right-multiply I - F_k by E_25(s^i) and E_21(s^i), i = 1..k (1-based indices).
inline FamilyRepair family_repair(const FamilyParams& params, bool test_primitivity = true) {
    const FamilyResult fam = family_ck_fk(params);
    const GroupPtr g = params.group;
    const GRPoly s = detail::u_poly(g, 1);
    ChainBuilder b(one_minus(fam.f), ChainMode::el_only);
    FamilyRepair out;
    out.bars_in_t_zplus = detail::in_t_zplus(bar_matrix(fam.f));
    auto step = [&](std::size_t i, std::size_t j, const GRPoly& r) {
        if (r.low_degree() < 1) out.multipliers_in_t = false;
        b.right(i, j, r);
        out.bars_in_t_zplus = out.bars_in_t_zplus && detail::in_t_zplus(bar_matrix(one_minus(b.state())));
    };
    for (std::size_t i = 1; i <= params.k; ++i) step(1, 4, detail::poly_power(s, static_cast<int>(i)));
    for (std::size_t i = 1; i <= params.k; ++i) step(1, 0, detail::poly_power(s, static_cast<int>(i)));
    out.b = one_minus(b.state());
    out.chain = b.finish();
    out.negative = detail::negative_entries(out.b);
    out.b_in_t_zplus = detail::in_t_zplus(out.b);
    if (test_primitivity && out.b_in_t_zplus) out.box_primitivity = box_primitivity(out.b);
    return out;
}

/// Lexicographically smallest exponent set (entries <= bound) whose repaired B_k lies in tZ+G[t].
inline std::optional<std::vector<int>> scan_family_exponents(const GroupPtr& g, std::size_t elem, std::size_t k, int bound = -1) {
    if (bound < 0) bound = static_cast<int>(2 * k + 2);
    std::vector<int> cur;
    std::optional<std::vector<int>> found;
    auto rec = [&](auto&& self, int next) -> void {
        if (found) return;
        if (cur.size() == k) {
            FamilyParams p{g, elem, k, cur};
            if (family_repair(p, false).b_in_t_zplus) found = cur;
            return;
        }
        for (int n = next; n <= bound && !found; ++n) {
            cur.push_back(n);
            self(self, n + 1);
            cur.pop_back();
        }
    };
    rec(rec, 1);
    return found;
}

/// cok(I - C') restricted to the lower right 2|G| block of the regular-representation lift at t = 1.
struct FamilyCokernel {
    IntMatrix block;       // -k(I - P) extracted from the lift; the sign does not affect the cokernel
    Cokernel cokernel;
    Cokernel expected;     // (Z/k)^{(m-1)c} + Z^c
    bool block_matches = false;
};

inline FamilyCokernel family_cokernel(const FamilyParams& params) {
    const FamilyResult fam = family_ck_fk(params);
    const GroupPtr g = params.group;
    const std::size_t m = g->order();
    const IntMatrix lift = tilde_lift(eval_at_one(one_minus(fam.c)));
    FamilyCokernel out;
    out.block = lift.block(3 * m, 4 * m, m, m);
    const IntMatrix p = regular_rep(GRElem::term(g, params.g));
    const IntMatrix kip = Integer(static_cast<unsigned long>(params.k)) * (IntMatrix::identity(m, Integer(0)) - p);
    out.block_matches = (out.block == kip || out.block == -kip) && lift.block(3 * m, 3 * m, m, m).is_zero() &&
                        lift.block(4 * m, 3 * m, m, 2 * m).is_zero();
    out.cokernel = cokernel(out.block);
    const std::size_t order = g->element_order(params.g);
    const std::size_t c = m / order;
    if (params.k >= 2)
        for (std::size_t i = 0; i < (order - 1) * c; ++i) out.expected.torsion.push_back(Integer(static_cast<unsigned long>(params.k)));
    out.expected.free_rank = params.k == 0 ? m : c;
    return out;
}

/// Cokernel of k(I - P) for P a cyclic permutation matrix of size m.
inline Cokernel cyclic_cokernel(std::size_t m, long k) {
    IntMatrix p(m, m, Integer(0));
    for (std::size_t i = 0; i < m; ++i) p((i + 1) % m, i) = 1;
    return cokernel(Integer(k) * (IntMatrix::identity(m, Integer(0)) - p));
}

// ---- B = V^-1 H V assembly ----

struct EmbedResult {
    MatGRPoly h, v, v_inv, b;
    MatGRPoly c;  // the corner block
    bool similarity = false;    // I - B = V^-1 (I - H) V
    bool closed_form = false;   // B matches the block display entrywise
    bool b_in_t_zplus = false;
    std::vector<std::pair<std::size_t, std::size_t>> negative;
    std::optional<GPrimitivity> box_primitivity;
    std::optional<SSEWitness> bar_sse;  // bar(B) = R S, bar(C) = S R over Z+[t], when bar(Q) = 0
    std::optional<WitnessReport> bar_sse_report;
};

inline EmbedResult embed_assemble(const MatGRPoly& q, const MatGRPoly& c, const GRPoly& alpha, bool test_primitivity = true) {
    if (!q.is_square() || !c.is_square()) throw InvalidArgument("Q and C must be square");
    if (q.rows() == 0 || c.rows() == 0) throw InvalidArgument("Q and C must be nonempty");
    const GroupPtr g = group_of(q);
    if (group_of(c) != g || alpha.zero().group() != g) throw InvalidArgument("Q, C and alpha must share a group");
    const std::size_t k = q.rows(), n = c.rows();
    const GRPoly z = gr_poly_zero(g), one = gr_poly(GRElem::scalar(g, 1));
    MatGRPoly x(k, n, z), y(n, k, z);
    for (std::size_t i = 0; i < k; ++i) x(i, 0) = alpha;
    for (std::size_t j = 0; j < k; ++j) y(0, j) = one;
    EmbedResult out;
    out.c = c;
    out.h = block_matrix<GRPoly>({{q, x}, {MatGRPoly(n, k, z), c}});
    out.v = identity_poly_matrix(k + n, g);
    out.v_inv = out.v;
    out.v.set_block(k, 0, y);
    out.v_inv.set_block(k, 0, -y);
    if (out.v * out.v_inv != identity_poly_matrix(k + n, g)) throw Error("V inverse is wrong");
    out.b = out.v_inv * out.h * out.v;
    out.similarity = one_minus(out.b) == out.v_inv * one_minus(out.h) * out.v;

    MatGRPoly disp(k + n, k + n, z);
    const GRPoly xx = c(0, 0) - Integer(static_cast<unsigned long>(k)) * alpha;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) disp(i, j) = q(i, j) + alpha;
        disp(i, k) = alpha;
    }
    for (std::size_t j = 0; j < k; ++j) {
        GRPoly eta = z;
        for (std::size_t i = 0; i < k; ++i) eta += q(i, j);
        disp(k, j) = xx - eta;
    }
    disp(k, k) = xx;
    for (std::size_t j = 1; j < n; ++j) disp(k, k + j) = c(0, j);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j <= k; ++j) disp(k + i, j) = c(i, 0);
        for (std::size_t j = 1; j < n; ++j) disp(k + i, k + j) = c(i, j);
    }
    out.closed_form = disp == out.b;
    out.negative = detail::negative_entries(out.b);
    out.b_in_t_zplus = detail::in_t_zplus(out.b);
    if (test_primitivity && out.b_in_t_zplus) out.box_primitivity = box_primitivity(out.b);

    if (bar_matrix(q).is_zero()) {
        const GroupPtr tg = trivial_group();
        const IntPolyMatrix xb = bar_matrix(x), yb = bar_matrix(y), cb = bar_matrix(c);
        const IntPolyMatrix db = cb - yb * xb;
        SSEWitness w;
        w.semiring = Semiring::zplus_g_t;
        IntPolyMatrix r = block_matrix<IntPoly>({{xb}, {db}});
        IntPolyMatrix sm = block_matrix<IntPoly>({{yb, IntPolyMatrix::identity(n, IntPoly())}});
        w.steps.push_back({lift_integer(r, tg), lift_integer(sm, tg)});
        out.bar_sse = w;
        out.bar_sse_report = verify_sse(lift_integer(bar_matrix(out.b), tg), lift_integer(cb, tg), w);
    }
    return out;
}

/// alpha = sum_m a_m u t^m with a_m the largest coefficient magnitude of Q at degree m (at least 1 from r to d).
inline GRPoly embed_alpha(const MatGRPoly& q, int r, int d) {
    const GroupPtr g = group_of(q);
    GRPoly out = gr_poly_zero(g);
    for (int m = r; m <= d; ++m) {
        Integer a = 1;
        for (std::size_t i = 0; i < q.rows(); ++i)
            for (std::size_t j = 0; j < q.cols(); ++j)
                for (const GRElem qc = q(i, j).coeff(m); const auto& x : qc.coeffs())
                    if (cmpabs(x, a) > 0) a = abs_value(x);
        out += detail::u_poly(g, m, a);
    }
    return out;
}

struct GrowthResult {
    MatGRPoly c;                 // I - C positive equivalent to I - tA
    MoveChain chain;
    std::vector<AbsorbDirection> steps;
};

/// Grow the (1,1) entry of C by absorption steps starting from tA.
inline GrowthResult grow_corner(const MatGR& a, const std::vector<AbsorbDirection>& steps) {
    const GroupPtr g = group_of(a);
    const MatGRPoly start = one_minus(t_times(a, 1));
    ChainBuilder b(start, ChainMode::positive);
    for (auto dir : steps)
        for (const auto& mv : absorb_step(b.state(), dir).moves) b.apply(mv);
    GrowthResult out;
    out.c = one_minus(b.state());
    out.chain = b.finish();
    out.steps = steps;
    (void)g;
    return out;
}

struct EmbedScan {
    int r = 0;
    std::size_t column_steps = 0;
    AmalgResult amalg;
    GrowthResult growth;
    GRPoly alpha;
    EmbedResult embed;
};

/// Scan r and the number of absorption steps until B lands in tZ+G[t].
inline std::optional<EmbedScan> scan_embed(const MatGR& n, const MatGR& a, int r_max = 6, std::size_t steps_max = 6) {
    for (int r = 1; r <= r_max; ++r) {
        AmalgResult am = amalg_nilpotent(n, r);
        for (std::size_t s = 0; s <= steps_max; ++s) {
            std::vector<AbsorbDirection> dirs(s, AbsorbDirection::column);
            GrowthResult gr = grow_corner(a, dirs);
            const int d = std::max(r, degree(am.m));
            GRPoly alpha = embed_alpha(am.m, r, d);
            EmbedResult e = embed_assemble(am.m, gr.c, alpha, false);
            if (!e.b_in_t_zplus) continue;
            e = embed_assemble(am.m, gr.c, alpha, true);
            return EmbedScan{r, s, am, gr, alpha, e};
        }
    }
    return std::nullopt;
}

// ---- NK_1 example over Z[C4] ----

namespace detail {
struct C4Term {
    long coeff;
    int t_degree;
    int sigma_power;
};

inline GRPoly c4_poly(const GroupPtr& g, const std::vector<C4Term>& terms) {
    GRPoly out = gr_poly_zero(g);
    for (const auto& tm : terms) out += gr_poly(GRElem::term(g, static_cast<std::size_t>(tm.sigma_power) % 4, tm.coeff), tm.t_degree);
    return out;
}
}  // namespace detail

struct NK1Example {
    GroupPtr group;
    GRPoly a, b, c, d;
    MatGRPoly m, adj;
    GRPoly det;
    bool det_is_one = false;
    bool inverse_ok = false;     // M * adj(M) = adj(M) * M = I
    MatGR m0, m0_inv;            // M(0) and adj(M(0))
    bool m0_inverse_ok = false;
};

inline MatGRPoly adjugate2(const MatGRPoly& m) {
    if (m.rows() != 2 || m.cols() != 2) throw InvalidArgument("2x2 adjugate needs a 2x2 matrix");
    return MatGRPoly::from_rows({{m(1, 1), -m(0, 1)}, {-m(1, 0), m(0, 0)}}, m.zero());
}

inline MatGR adjugate2(const MatGR& m) {
    if (m.rows() != 2 || m.cols() != 2) throw InvalidArgument("2x2 adjugate needs a 2x2 matrix");
    return MatGR::from_rows({{m(1, 1), -m(0, 1)}, {-m(1, 0), m(0, 0)}}, m.zero());
}

/// Z/4 with generator s; shared so results of separate calls can be combined.
inline GroupPtr c4_group() {
    static const GroupPtr g = make_group(GroupSpec::cyclic(4, "s"));
    return g;
}

inline NK1Example nk1_example_c4() {
    NK1Example out;
    const GroupPtr g = c4_group();
    out.group = g;
    const GRPoly factor = detail::c4_poly(g, {{1, 0, 0}, {-1, 0, 2}});
    out.a = factor * detail::c4_poly(g, {{1, 1, 0}, {-2, 2, 0}, {2, 3, 0}, {-1, 0, 1}, {1, 1, 1}, {1, 2, 1}});
    out.b = factor * detail::c4_poly(g, {{1, 0, 0}, {2, 1, 0}, {-1, 2, 0}, {-1, 3, 0}, {-2, 4, 0},
                                         {1, 0, 1}, {-1, 1, 1}, {-2, 2, 1}, {-3, 3, 1}, {2, 4, 1}});
    out.c = factor * detail::c4_poly(g, {{-1, 0, 0}, {2, 1, 0}, {-5, 2, 0}, {7, 3, 0}, {-3, 4, 0}, {2, 5, 0},
                                         {-1, 0, 1}, {2, 1, 1}, {-2, 3, 1}, {3, 4, 1}, {-2, 5, 1}});
    out.d = factor * detail::c4_poly(g, {{2, 0, 0}, {1, 1, 0}, {-2, 2, 0}, {-4, 4, 0}, {-2, 5, 0},
                                         {1, 0, 1}, {-3, 1, 1}, {-1, 2, 1}, {-4, 3, 1}, {6, 4, 1}, {-4, 5, 1}, {4, 6, 1}});
    const GRPoly one = gr_poly(GRElem::scalar(g, 1));
    out.m = MatGRPoly::from_rows({{one - out.a, -out.b}, {-out.c, one - out.d}}, gr_poly_zero(g));
    out.det = determinant(out.m);
    out.det_is_one = out.det == one;
    out.adj = adjugate2(out.m);
    const MatGRPoly id = identity_poly_matrix(2, g);
    out.inverse_ok = out.m * out.adj == id && out.adj * out.m == id;
    out.m0 = eval_at_zero(out.m);
    out.m0_inv = adjugate2(out.m0);
    const MatGR id0 = MatGR::identity(2, GRElem(g));
    out.m0_inverse_ok = out.m0 * out.m0_inv == id0 && out.m0_inv * out.m0 == id0;
    return out;
}

// ---- linearization of a determinant-one polynomial matrix ----

struct HigmanResult {
    MatGRPoly normalized;    // M * M(0)^-1, identity at t = 0
    MatGR n;                 // I - t N is El-equivalent to normalized (+) I
    MoveChain chain;         // I - normalized -> I - t N, el_only
    bool nilpotent = false;  // N^size = 0 verified by powering
    bool chain_valid = false;
    std::string diagnostic;
};

/// Normalize by the constant term, then linearize with the companion block construction.
inline HigmanResult higman_linearize(const MatGRPoly& m, const std::optional<MatGR>& m0_inverse = std::nullopt) {
    if (!m.is_square()) throw InvalidArgument("linearization needs a square matrix");
    const GroupPtr g = group_of(m);
    if (!g->is_abelian()) throw PreconditionFailed("linearization needs an abelian group");
    const std::size_t n = m.rows();
    const GRPoly one = gr_poly(GRElem::scalar(g, 1));
    if (determinant(m) != one) throw PreconditionFailed("det(M) must equal 1");
    const MatGR m0 = eval_at_zero(m);
    MatGR m0_inv;
    if (m0_inverse) {
        m0_inv = *m0_inverse;
    } else {
        m0_inv = adjugate(m0);
    }
    const MatGR id0 = MatGR::identity(n, GRElem(g));
    if (m0 * m0_inv != id0) throw PreconditionFailed("supplied inverse of M(0) is wrong");
    HigmanResult out;
    out.normalized = m * constant_poly_matrix(m0_inv);
    if (eval_at_zero(out.normalized) != id0) throw Error("normalization did not reach the identity at t = 0");
    const MatGRPoly a = one_minus(out.normalized);
    if (a.is_zero()) {
        out.n = MatGR(n, n, GRElem(g));
        out.chain = ChainBuilder(one_minus(a), ChainMode::el_only).finish();
        out.nilpotent = true;
        out.chain_valid = verify_chain(out.chain).valid;
        return out;
    }
    BoxResult box;
    try {
        box = box_construct(a, ChainMode::el_only);
    } catch (const Error& e) {
        out.diagnostic = std::string("degree reduction failed: ") + e.what();
        return out;
    }
    out.n = box.box;
    out.chain = box.chain;
    out.chain_valid = verify_chain(out.chain).valid;
    out.nilpotent = mat_pow(out.n, out.n.rows()).is_zero();
    if (!out.nilpotent) out.diagnostic = "N^size is not zero";
    if (!out.chain_valid) out.diagnostic = "chain does not replay: " + verify_chain(out.chain).message;
    return out;
}

// ---- K / L pair ----

/// The 4x4 product P1 P2 (K + X) P2^-1 P1^-1 with K = (e f; e f) and X = (a b; c d).
template <class T>
Matrix<T> kl_product(const T& e, const T& f, const T& a, const T& b, const T& c, const T& d) {
    const T z = zero_like(e), o = one_like(e), m = z - o;
    auto mk = [&](std::vector<std::vector<T>> rows) { return Matrix<T>::from_rows(rows, z); };
    const Matrix<T> p1 = mk({{o, z, z, z}, {z, o, z, z}, {o, z, o, z}, {o, z, z, o}});
    const Matrix<T> p2 = mk({{o, z, z, z}, {z, o, m, m}, {z, z, o, z}, {z, z, z, o}});
    const Matrix<T> mid = mk({{e, f, z, z}, {e, f, z, z}, {z, z, a, b}, {z, z, c, d}});
    const Matrix<T> p2i = mk({{o, z, z, z}, {z, o, o, o}, {z, z, o, z}, {z, z, z, o}});
    const Matrix<T> p1i = mk({{o, z, z, z}, {z, o, z, z}, {m, z, o, z}, {m, z, z, o}});
    return p1 * p2 * mid * p2i * p1i;
}

/// The closed form for L as printed alongside the product.
template <class T>
Matrix<T> kl_printed_closed_form(const T& e, const T& f, const T& a, const T& b, const T& c, const T& d) {
    const T z = zero_like(e), two_f = f + f;
    return Matrix<T>::from_rows({{e - two_f, f, f, f},
                                 {e - two_f + (a + b + c + d), f, f - (a + c), f - (b + d)},
                                 {e - (a + b), z, f - c, f - d},
                                 {e - (c + d), z, f - a, f - b}},
                                z);
}

/// The closed form obtained by expanding the product; rows 3 and 4 differ from the printed one.
template <class T>
Matrix<T> kl_expanded_closed_form(const T& e, const T& f, const T& a, const T& b, const T& c, const T& d) {
    const T two_f = f + f;
    return Matrix<T>::from_rows({{e - two_f, f, f, f},
                                 {e - two_f + (a + b + c + d), f, f - (a + c), f - (b + d)},
                                 {e - two_f - (a + b), f, f + a, f + b},
                                 {e - two_f - (c + d), f, f + c, f + d}},
                                zero_like(e));
}

struct ClosedFormCheck {
    bool holds = true;
    std::vector<std::pair<std::size_t, std::size_t>> mismatches;  // entries differing for some basis input
};

/// Both sides are linear in (e, f, a, b, c, d), so agreement on the six unit inputs is the generic identity.
template <class F>
ClosedFormCheck check_closed_form_generic(F closed_form) {
    ClosedFormCheck out;
    std::vector<std::pair<std::size_t, std::size_t>> bad;
    for (int which = 0; which < 6; ++which) {
        std::vector<Integer> v(6, Integer(0));
        v[which] = 1;
        const IntMatrix lhs = kl_product<Integer>(v[0], v[1], v[2], v[3], v[4], v[5]);
        const IntMatrix rhs = closed_form(v[0], v[1], v[2], v[3], v[4], v[5]);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (lhs(i, j) != rhs(i, j) && std::find(bad.begin(), bad.end(), std::make_pair(i, j)) == bad.end())
                    bad.emplace_back(i, j);
    }
    std::sort(bad.begin(), bad.end());
    out.mismatches = bad;
    out.holds = bad.empty();
    return out;
}

struct KLReport {
    MatGRPoly k, l;
    MatGRPoly x;                     // the (a b; c d) block used
    bool normalized = false;         // X' = I - M * M(0)^-1 in place of (a b; c d)
    bool printed_form_matches = false;
    bool expanded_form_matches = false;
    bool k_in_zplus = false, l_in_zplus = false;
    bool k_in_t_zplus = false, l_in_t_zplus = false;
    std::vector<std::size_t> k_zero_rows, l_zero_rows;
    std::vector<std::pair<std::size_t, std::size_t>> l_negative;
    std::optional<GPrimitivity> k_box, l_box;
    GRPoly det_l, det_k, det_m;
    bool det_identity = false;       // det(I - L) = det(I - K) det(I - X)
};

inline std::vector<std::size_t> zero_rows(const MatGRPoly& a) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < a.cols(); ++j) zero = zero && a(i, j).is_zero();
        if (zero) out.push_back(i);
    }
    return out;
}

/// The 2x2 block X used in L: (a b; c d) from the example, or I - M M(0)^-1 when normalized.
inline MatGRPoly kl_block(const NK1Example& ex, bool normalized) {
    if (!normalized) return MatGRPoly::from_rows({{ex.a, ex.b}, {ex.c, ex.d}}, gr_poly_zero(ex.group));
    return one_minus(ex.m * constant_poly_matrix(ex.m0_inv));
}

inline KLReport kl_pair(const GRPoly& e, const GRPoly& f, bool normalized = false, bool test_primitivity = true) {
    const NK1Example ex = nk1_example_c4();
    const GroupPtr g = ex.group;
    if (e.zero().group() != g || f.zero().group() != g) throw InvalidArgument("e and f must lie over the example's group C4");
    KLReport out;
    out.normalized = normalized;
    out.x = kl_block(ex, normalized);
    const GRPoly &a = out.x(0, 0), &b = out.x(0, 1), &c = out.x(1, 0), &d = out.x(1, 1);
    out.k = MatGRPoly::from_rows({{e, f}, {e, f}}, gr_poly_zero(g));
    out.l = kl_product<GRPoly>(e, f, a, b, c, d);
    out.printed_form_matches = out.l == kl_printed_closed_form<GRPoly>(e, f, a, b, c, d);
    out.expanded_form_matches = out.l == kl_expanded_closed_form<GRPoly>(e, f, a, b, c, d);
    out.k_in_zplus = is_nonnegative(out.k);
    out.l_in_zplus = is_nonnegative(out.l);
    out.k_in_t_zplus = detail::in_t_zplus(out.k);
    out.l_in_t_zplus = detail::in_t_zplus(out.l);
    out.k_zero_rows = zero_rows(out.k);
    out.l_zero_rows = zero_rows(out.l);
    out.l_negative = detail::negative_entries(out.l);
    if (test_primitivity && out.k_in_t_zplus && out.l_in_t_zplus) {
        out.k_box = box_primitivity(out.k);
        out.l_box = box_primitivity(out.l);
    }
    out.det_l = det_poly(out.l);
    out.det_k = det_poly(out.k);
    out.det_m = determinant(one_minus(out.x));
    out.det_identity = out.det_l == out.det_k * out.det_m;
    return out;
}

struct KLScan {
    Integer c_f, c_e;
    int degree = 0;
    GRPoly e, f;
    KLReport report;
};

/// f = c_f u (t + ... + t^D), then e = c_e u (t + ... + t^D), increasing c_f and then c_e until L is over tZ+G[t].
inline std::optional<KLScan> scan_kl(bool normalized, long limit = 4096) {
    const NK1Example ex = nk1_example_c4();
    const GroupPtr g = ex.group;
    const MatGRPoly x = kl_block(ex, normalized);
    const int deg = std::max(1, degree(x));
    auto ramp = [&](const Integer& c) {
        GRPoly p = gr_poly_zero(g);
        for (int k = 1; k <= deg; ++k) p += detail::u_poly(g, k, c);
        return p;
    };
    const GRPoly &a = x(0, 0), &b = x(0, 1), &c = x(1, 0), &d = x(1, 1);
    auto ok = [](std::initializer_list<GRPoly> ps) {
        for (const auto& p : ps)
            if (!detail::poly_nonnegative(p) || !p.constant_term().is_zero()) return false;
        return true;
    };
    for (long cf = 1; cf <= limit; ++cf) {
        const GRPoly f = ramp(cf);
        if (!ok({f, f - (a + c), f - (b + d), f + a, f + b, f + c, f + d})) continue;
        for (long ce = 2 * cf; ce <= 2 * cf + limit; ++ce) {
            const GRPoly e = ramp(ce), two_f = f + f;
            if (!ok({e - two_f, e - two_f + (a + b + c + d), e - two_f - (a + b), e - two_f - (c + d)})) continue;
            KLScan out{cf, ce, deg, e, f, kl_pair(e, f, normalized)};
            return out;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace gext
