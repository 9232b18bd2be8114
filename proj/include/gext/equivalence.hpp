#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "groupring.hpp"
#include "intlinalg.hpp"
#include "invariants.hpp"
#include "polymat.hpp"

namespace gext {

inline GroupPtr group_of(const MatGRPoly& a) { return a.zero().zero().group(); }
inline GroupPtr group_of(const MatGR& a) { return a.zero().group(); }

inline MatGRPoly identity_poly_matrix(std::size_t n, const GroupPtr& g) {
    return MatGRPoly::identity(n, gr_poly_zero(g));
}
inline MatGRPoly one_minus(const MatGRPoly& a) { return identity_poly_matrix(a.rows(), group_of(a)) - a; }

/// Integer matrix viewed over ZG (each entry n becomes n*e).
inline MatGR lift_integer(const IntMatrix& m, const GroupPtr& g) {
    return m.map([&g](const Integer& x) { return GRElem::scalar(g, x); });
}
inline MatGRPoly lift_integer(const IntPolyMatrix& m, const GroupPtr& g) {
    return m.map([&g](const IntPoly& p) { return p.map_coeffs([&g](const Integer& x) { return GRElem::scalar(g, x); }); });
}

// ---- NZC ----

/// An index on a cycle of the constant-term support digraph, if any.
inline std::optional<std::size_t> constant_term_cycle(const MatGRPoly& a) {
    const std::size_t n = a.rows();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!a(i, j).constant_term().is_zero()) adj[i].push_back(j);
    std::vector<int> color(n, 0);
    std::optional<std::size_t> found;
    auto dfs = [&](auto&& self, std::size_t v) -> void {
        color[v] = 1;
        for (auto w : adj[v]) {
            if (found) return;
            if (color[w] == 1) found = w;
            else if (color[w] == 0) self(self, w);
        }
        color[v] = 2;
    };
    for (std::size_t v = 0; v < n && !found; ++v)
        if (color[v] == 0) dfs(dfs, v);
    return found;
}

/// NZC, decided by acyclicity of the constant-term digraph (equivalent for nonnegative constant terms).
inline bool nzc_check(const MatGRPoly& a) {
    if (!a.is_square()) throw InvalidArgument("NZC check of a non-square matrix");
    if (!is_nonnegative(a)) throw PreconditionFailed("NZC check needs entries in Z+G[t]");
    return !constant_term_cycle(a).has_value();
}

/// NZC straight from the definition: every diagonal entry of A(0)^k vanishes for k = 1..n.
inline bool nzc_by_powers(const MatGRPoly& a) {
    MatGR c = eval_at_zero(a);
    MatGR p = c;
    for (std::size_t k = 1; k <= a.rows(); ++k) {
        for (std::size_t i = 0; i < a.rows(); ++i)
            if (!p(i, i).is_zero()) return false;
        p = p * c;
    }
    return true;
}

// ---- moves and chains ----

enum class Side { left, right };
enum class ChainMode { positive, el_only };

inline std::string to_string(Side s) { return s == Side::left ? "left" : "right"; }
inline std::string to_string(ChainMode m) { return m == ChainMode::positive ? "positive" : "el_only"; }

/// Multiplication by I + r e_ij (or its inverse I - r e_ij) on one side,
/// after optionally padding the state to the given size with an identity block.
struct ElementaryMove {
    Side side = Side::left;
    std::size_t i = 0, j = 0;
    GRPoly r;
    bool inverse = false;
    std::optional<std::size_t> stabilize_to;

    GRPoly multiplier() const { return inverse ? -r : r; }
};

struct MoveChain {
    MatGRPoly start, end;  // both of the form I - A
    std::vector<ElementaryMove> moves;
    ChainMode mode = ChainMode::positive;
};

/// Rejects a state that is not I - C with C in NZC(Z+G[t]).
inline void require_positive_state(const MatGRPoly& state, const std::string& where) {
    MatGRPoly c = one_minus(state);
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
            if (!is_nonnegative(c(i, j)))
                throw PreconditionFailed(where + ": entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                         ") of A has a negative coefficient");
    if (auto v = constant_term_cycle(c))
        throw PreconditionFailed(where + ": NZC fails, diagonal entry " + std::to_string(*v + 1) +
                                 " of a power of A has a nonzero constant term");
}

inline MatGRPoly apply_move(const MatGRPoly& state, const ElementaryMove& mv, ChainMode mode) {
    MatGRPoly s = state;
    if (mv.stabilize_to && *mv.stabilize_to > s.rows()) s = pad_identity(s, *mv.stabilize_to - s.rows());
    if (mv.i == mv.j) throw InvalidArgument("elementary move needs distinct indices");
    if (mv.i >= s.rows() || mv.j >= s.rows()) throw InvalidArgument("elementary move index out of range");
    if (mode == ChainMode::positive) {
        if (!is_nonnegative(mv.r)) throw PreconditionFailed("positive move with an entry outside Z+G[t]");
        require_positive_state(s, "positive move source");
    }
    const GRPoly q = mv.multiplier();
    if (!q.is_zero()) {
        if (mv.side == Side::left) {
            // row_i += q * row_j
            for (std::size_t k = 0; k < s.cols(); ++k)
                if (!s(mv.j, k).is_zero()) s(mv.i, k) = s(mv.i, k) + q * s(mv.j, k);
        } else {
            // col_j += col_i * q
            for (std::size_t k = 0; k < s.rows(); ++k)
                if (!s(k, mv.i).is_zero()) s(k, mv.j) = s(k, mv.j) + s(k, mv.i) * q;
        }
    }
    if (mode == ChainMode::positive) require_positive_state(s, "positive move target");
    return s;
}

/// Equality up to padding the smaller matrix with an identity block.
inline bool equal_up_to_padding(const MatGRPoly& a, const MatGRPoly& b) {
    if (a.rows() < b.rows()) return pad_identity(a, b.rows() - a.rows()) == b;
    if (b.rows() < a.rows()) return a == pad_identity(b, a.rows() - b.rows());
    return a == b;
}

struct ChainReport {
    bool valid = true;
    std::optional<std::size_t> failing_step;  // 0-based move index; moves.size() means the endpoint
    std::string message;
    MatGRPoly final_state;
};

inline ChainReport verify_chain(const MoveChain& chain) {
    ChainReport out;
    MatGRPoly s = chain.start;
    try {
        if (chain.mode == ChainMode::positive) require_positive_state(s, "chain start");
    } catch (const Error& e) {
        out.valid = false;
        out.failing_step = 0;
        out.message = e.what();
        return out;
    }
    for (std::size_t k = 0; k < chain.moves.size(); ++k) {
        try {
            s = apply_move(s, chain.moves[k], chain.mode);
        } catch (const Error& e) {
            out.valid = false;
            out.failing_step = k;
            out.message = e.what();
            out.final_state = s;
            return out;
        }
    }
    out.final_state = s;
    if (!equal_up_to_padding(s, chain.end)) {
        out.valid = false;
        out.failing_step = chain.moves.size();
        out.message = "replayed matrix differs from the recorded endpoint";
    }
    return out;
}

/// Records moves while applying them.
class ChainBuilder {
public:
    ChainBuilder(MatGRPoly start, ChainMode mode) : state_(start), mode_(mode) {
        chain_.start = std::move(start);
        chain_.mode = mode;
    }

    const MatGRPoly& state() const { return state_; }

    void apply(ElementaryMove mv) {
        if (mv.r.is_zero() && !mv.stabilize_to) return;
        if (mv.r.is_zero()) mv.r = gr_poly_zero(group_of(state_));
        state_ = apply_move(state_, mv, mode_);
        chain_.moves.push_back(std::move(mv));
    }
    void left(std::size_t i, std::size_t j, const GRPoly& r) { apply({Side::left, i, j, r, false, std::nullopt}); }
    void right(std::size_t i, std::size_t j, const GRPoly& r) { apply({Side::right, i, j, r, false, std::nullopt}); }
    void stabilize(std::size_t size) {
        if (size <= state_.rows()) return;
        pending_ = size;
        state_ = pad_identity(state_, size - state_.rows());
    }
    void append(const MoveChain& other) {
        for (auto mv : other.moves) {
            if (pending_) {
                mv.stabilize_to = std::max(*pending_, mv.stabilize_to.value_or(0));
                pending_.reset();
            }
            state_ = apply_move(state_, mv, mode_);
            chain_.moves.push_back(std::move(mv));
        }
    }

    MoveChain finish(std::optional<MatGRPoly> end = std::nullopt) {
        chain_.end = end ? *end : state_;
        return chain_;
    }

private:
    MatGRPoly state_;
    ChainMode mode_;
    MoveChain chain_;
    std::optional<std::size_t> pending_;
};

/// Inverse chain: from end back to start. Internal stabilizations are not supported.
inline MoveChain reverse_chain(const MoveChain& c) {
    for (const auto& mv : c.moves)
        if (mv.stabilize_to) throw InvalidArgument("cannot reverse a chain with internal stabilization");
    MoveChain out;
    out.start = c.end;
    out.end = c.start;
    out.mode = c.mode;
    for (auto it = c.moves.rbegin(); it != c.moves.rend(); ++it) {
        ElementaryMove mv = *it;
        mv.inverse = !mv.inverse;
        out.moves.push_back(std::move(mv));
    }
    if (!out.moves.empty() && c.start.rows() > c.end.rows()) out.moves.front().stabilize_to = c.start.rows();
    return out;
}

/// Concatenation; the second chain must start where the first ends (up to padding).
inline MoveChain compose_chains(const MoveChain& a, const MoveChain& b) {
    if (a.mode != b.mode) throw InvalidArgument("cannot compose chains of different modes");
    if (!equal_up_to_padding(a.end, b.start)) throw InvalidArgument("chains do not meet");
    MoveChain out = a;
    out.end = b.end;
    bool first = true;
    for (auto mv : b.moves) {
        if (first && b.start.rows() > a.end.rows())
            mv.stabilize_to = std::max(b.start.rows(), mv.stabilize_to.value_or(0));
        first = false;
        out.moves.push_back(std::move(mv));
    }
    if (b.moves.empty() && b.end.rows() > a.end.rows()) out.end = b.end;
    return out;
}

// ---- A^box ----

struct BoxResult {
    MatGR box;
    MoveChain chain;  // I - A  ->  I - t*box
};

/// Companion linearization: top block row A_1..A_d, identities on the block subdiagonal.
inline MatGR box_matrix(const MatGRPoly& a) {
    const GroupPtr g = group_of(a);
    const std::size_t n = a.rows();
    const int d = std::max(1, degree(a));
    MatGR out(n * d, n * d, GRElem(g));
    for (int k = 1; k <= d; ++k) out.set_block(0, n * (k - 1), coefficient_matrix(a, k));
    for (int k = 1; k < d; ++k) out.set_block(n * k, n * (k - 1), MatGR::identity(n, GRElem(g)));
    return out;
}

/// Chain I - A -> I - t*box. Positive mode needs A over tZ+G[t]; el_only needs only zero constant terms.
inline BoxResult box_construct(const MatGRPoly& a, ChainMode mode = ChainMode::positive) {
    if (!a.is_square()) throw InvalidArgument("box construction needs a square matrix");
    if (mode == ChainMode::positive && !is_nonnegative(a)) throw PreconditionFailed("box construction needs entries in Z+G[t]");
    if (!eval_at_zero(a).is_zero()) throw PreconditionFailed("box construction needs entries in tZ+G[t]; normalize constant terms first");
    const GroupPtr g = group_of(a);
    const std::size_t n = a.rows();
    const int d = std::max(1, degree(a));
    BoxResult out;
    out.box = box_matrix(a);
    const GRPoly t = gr_poly(GRElem::scalar(g, 1), 1);

    // Forward: from I - t*box down to (I - A) + I.
    ChainBuilder fwd(one_minus(t_times(out.box)), mode);
    for (int j = d; j >= 2; --j)
        for (std::size_t c = 0; c < n; ++c) fwd.right(n * (j - 1) + c, n * (j - 2) + c, t);
    for (int j = 2; j <= d; ++j) {
        // P_j = sum_{i >= j} t^(i-j+1) A_i, read off the current top block row
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                GRPoly r = -fwd.state()(p, n * (j - 1) + q);
                fwd.left(p, n * (j - 1) + q, r);
            }
    }
    if (!equal_up_to_padding(fwd.state(), one_minus(a))) throw Error("box chain does not reach I - A");
    MoveChain forward = fwd.finish(one_minus(a));
    out.chain = reverse_chain(forward);
    return out;
}

// ---- A^diamond ----

struct DiamondResult {
    MatGR diamond;      // I - A is positive equivalent to I - t*diamond
    MoveChain chain;    // I - A  ->  I - t*diamond
    MatGRPoly cleared;  // the matrix over tZ+G[t] reached before linearizing
    std::vector<std::size_t> measure_trace;  // measure of the cleared row before and after each pass
    MatGR core;
    bool used_core = false;
};

/// Longest path length from i in the constant-term digraph (max k with row i of A(0)^k nonzero).
inline std::size_t constant_depth(const MatGRPoly& a, std::size_t i) {
    MatGR c = eval_at_zero(a);
    const std::size_t n = a.rows();
    std::vector<std::size_t> memo(n, 0);
    std::vector<bool> done(n, false);
    auto depth = [&](auto&& self, std::size_t v) -> std::size_t {
        if (done[v]) return memo[v];
        std::size_t best = 0;
        for (std::size_t w = 0; w < n; ++w)
            if (!c(v, w).is_zero()) best = std::max(best, 1 + self(self, w));
        done[v] = true;
        return memo[v] = best;
    };
    return depth(depth, i);
}

inline MatGR core(const MatGR& a);

inline DiamondResult diamond_normalize(const MatGRPoly& a, bool want_core = true) {
    if (!nzc_check(a)) throw PreconditionFailed("diamond normalization needs an NZC matrix");
    const GroupPtr g = group_of(a);
    const std::size_t n = a.rows();
    DiamondResult out;
    ChainBuilder clear(one_minus(a), ChainMode::positive);
    for (;;) {
        MatGRPoly c = one_minus(clear.state());
        std::optional<std::size_t> row;
        for (std::size_t i = 0; i < n && !row; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!c(i, j).constant_term().is_zero()) {
                    row = i;
                    break;
                }
        if (!row) break;
        const std::size_t before = constant_depth(c, *row);
        std::vector<std::pair<std::size_t, GRElem>> consts;
        for (std::size_t j = 0; j < n; ++j)
            if (!c(*row, j).constant_term().is_zero()) consts.emplace_back(j, c(*row, j).constant_term());
        for (const auto& [j, cij] : consts) clear.left(*row, j, gr_poly(cij));
        const std::size_t after = constant_depth(one_minus(clear.state()), *row);
        out.measure_trace.push_back(before);
        out.measure_trace.push_back(after);
        if (after >= before) throw Error("constant-term clearing failed to decrease the row measure");
    }
    out.cleared = one_minus(clear.state());
    MoveChain first = clear.finish();
    if (out.cleared.is_zero()) {
        out.diamond = MatGR(1, 1, GRElem(g));
        MoveChain tail;
        tail.start = first.end;
        tail.end = identity_poly_matrix(1, g);
        tail.mode = ChainMode::positive;
        out.chain = first;
        out.chain.end = tail.end;
    } else {
        auto box = box_construct(out.cleared);
        out.diamond = box.box;
        out.chain = compose_chains(first, box.chain);
    }
    if (want_core) {
        out.core = core(out.diamond);
        out.used_core = out.core.rows() != out.diamond.rows() || out.core != out.diamond;
    }
    return out;
}

/// Iterated deletion of zero rows and columns; (0) when everything is removable.
inline MatGR core(const MatGR& a) {
    if (!a.is_square()) throw InvalidArgument("core of a non-square matrix");
    std::vector<std::size_t> keep(a.rows());
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
    for (;;) {
        std::vector<std::size_t> next;
        for (auto i : keep) {
            bool row = false, col = false;
            for (auto j : keep) {
                row = row || !a(i, j).is_zero();
                col = col || !a(j, i).is_zero();
            }
            if (row && col) next.push_back(i);
        }
        if (next.size() == keep.size()) break;
        keep = std::move(next);
        if (keep.empty()) return MatGR(1, 1, a.zero());
    }
    MatGR out(keep.size(), keep.size(), a.zero());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) out(i, j) = a(keep[i], keep[j]);
    return out;
}

// ---- SSE and SE witnesses ----

enum class Semiring { zplus_g, z_g, zplus_g_t, z_g_t };

inline std::string to_string(Semiring s) {
    switch (s) {
        case Semiring::zplus_g: return "Z+G";
        case Semiring::z_g: return "ZG";
        case Semiring::zplus_g_t: return "Z+G[t]";
        default: return "ZG[t]";
    }
}

inline bool in_semiring(const MatGRPoly& m, Semiring s) {
    const bool constant = degree(m) <= 0;
    const bool positive = is_nonnegative(m);
    switch (s) {
        case Semiring::zplus_g: return constant && positive;
        case Semiring::z_g: return constant;
        case Semiring::zplus_g_t: return positive;
        default: return true;
    }
}

struct SSEWitness {
    Semiring semiring = Semiring::zplus_g;
    std::vector<std::pair<MatGRPoly, MatGRPoly>> steps;  // (R_i, S_i)
};

struct SEWitness {
    Semiring semiring = Semiring::zplus_g;
    unsigned long lag = 1;
    MatGRPoly r, s;
};

struct WitnessReport {
    bool valid = true;
    std::string message;
};

inline WitnessReport verify_sse(const MatGRPoly& a, const MatGRPoly& b, const SSEWitness& w) {
    MatGRPoly cur = a;
    for (std::size_t k = 0; k < w.steps.size(); ++k) {
        const auto& [r, s] = w.steps[k];
        const std::string at = "step " + std::to_string(k + 1);
        if (!in_semiring(r, w.semiring) || !in_semiring(s, w.semiring)) return {false, at + ": entries outside " + to_string(w.semiring)};
        if (r.cols() != s.rows() || s.cols() != r.rows()) return {false, at + ": R and S shapes do not match"};
        if (r.rows() != cur.rows() || r * s != cur) return {false, at + ": R*S differs from the current matrix"};
        cur = s * r;
    }
    if (cur != b) return {false, "final S*R differs from the target matrix"};
    return {true, ""};
}

inline WitnessReport verify_se(const MatGRPoly& a, const MatGRPoly& b, const SEWitness& w) {
    if (w.lag == 0) return {false, "lag must be positive"};
    if (!in_semiring(w.r, w.semiring) || !in_semiring(w.s, w.semiring)) return {false, "entries outside " + to_string(w.semiring)};
    if (w.r.rows() != a.rows() || w.r.cols() != b.rows() || w.s.rows() != b.rows() || w.s.cols() != a.rows())
        return {false, "R and S have the wrong shapes"};
    if (mat_pow(a, w.lag) != w.r * w.s) return {false, "A^lag != R*S"};
    if (mat_pow(b, w.lag) != w.s * w.r) return {false, "B^lag != S*R"};
    if (a * w.r != w.r * b) return {false, "A*R != R*B"};
    if (w.s * a != b * w.s) return {false, "S*A != B*S"};
    return {true, ""};
}

/// Lift a shift equivalence of the augmented matrices to ZG when A^p and B^p have entries in uZ.
inline SEWitness forced_se_lift(const MatGR& a, const MatGR& b, unsigned long p, const SEWitness& zw) {
    const GroupPtr g = group_of(a);
    if (group_of(b) != g) throw InvalidArgument("matrices over different groups");
    const Integer m = static_cast<unsigned long>(g->order());
    const MatGR ap = mat_pow(a, p), bp = mat_pow(b, p);
    for (const auto* pw : {&ap, &bp})
        for (std::size_t i = 0; i < pw->rows(); ++i)
            for (std::size_t j = 0; j < pw->cols(); ++j)
                if (!(*pw)(i, j).is_multiple_of_u())
                    throw PreconditionFailed(std::string(pw == &ap ? "A" : "B") + "^" + std::to_string(p) + " entry (" +
                                             std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not in uZ");
    const IntMatrix abar = bar_matrix(a), bbar = bar_matrix(b);
    const IntMatrix zr = bar_matrix(eval_at_zero(zw.r)), zs = bar_matrix(eval_at_zero(zw.s));
    {
        const GroupPtr tg = trivial_group();
        SEWitness check{Semiring::z_g, zw.lag, constant_poly_matrix(lift_integer(zr, tg)), constant_poly_matrix(lift_integer(zs, tg))};
        auto rep = verify_se(constant_poly_matrix(lift_integer(abar, tg)), constant_poly_matrix(lift_integer(bbar, tg)), check);
        if (!rep.valid) throw PreconditionFailed("integer witness does not verify: " + rep.message);
    }
    // u * (1/m) * bar(A)^p * R, with the division checked exactly
    auto lift = [&](const IntMatrix& base, const IntMatrix& w) {
        IntMatrix prod = mat_pow(base, p) * w;
        MatGR out(prod.rows(), prod.cols(), GRElem(g));
        for (std::size_t i = 0; i < prod.rows(); ++i)
            for (std::size_t j = 0; j < prod.cols(); ++j) {
                if (!divides(m, prod(i, j)))
                    throw PreconditionFailed("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not divisible by |G|");
                out(i, j) = GRElem::sum_of_group(g);
                out(i, j) *= Integer(prod(i, j) / m);
            }
        return out;
    };
    MatGR rt = lift(abar, zr), st = lift(bbar, zs);
    if (rt != ap * lift_integer(zr, g) || st != bp * lift_integer(zs, g))
        throw Error("lifted witness disagrees with the direct products A^p R, B^p S");
    SEWitness out;
    out.semiring = is_nonnegative(rt) && is_nonnegative(st) ? Semiring::zplus_g : Semiring::z_g;
    out.lag = 2 * p + zw.lag;
    out.r = constant_poly_matrix(rt);
    out.s = constant_poly_matrix(st);
    return out;
}

// ---- nilpotent matrices over ZG ----

inline void require_nilpotent(const MatGR& n) {
    if (!n.is_square()) throw InvalidArgument("nilpotency of a non-square matrix");
    if (!mat_pow(n, n.rows() * group_of(n)->order()).is_zero()) {
        try {
            require_nilpotent(tilde_lift(n));
        } catch (const PreconditionFailed& e) {
            throw PreconditionFailed(std::string("N is not nilpotent (regular-representation lift: ") + e.what() + ")");
        }
        throw PreconditionFailed("N is not nilpotent");
    }
}

/// Truncated geometric series sum_{k>=0} X^k for nilpotent X.
template <class T>
Matrix<T> nilpotent_inverse_series(const Matrix<T>& x) {
    auto sum = Matrix<T>::identity(x.rows(), x.zero());
    auto p = x;
    for (std::size_t k = 0; k <= x.rows() * 64 && !p.is_zero(); ++k) {
        sum = sum + p;
        p = p * x;
    }
    if (!p.is_zero()) throw PreconditionFailed("geometric series did not terminate");
    return sum;
}

struct AmalgResult {
    MatGRPoly m;          // bar(m) = 0
    MoveChain chain;      // I - t^r N  ->  I - m, el_only
    IntMatrix u;          // unimodular, u^-1 bar(N) u strictly upper triangular
    IntPolyMatrix w;      // (I - t^r N1)^-1 for the triangular integer part N1
};

inline AmalgResult amalg_nilpotent(const MatGR& n, int r) {
    if (r < 1) throw InvalidArgument("r must be positive");
    require_nilpotent(n);
    const GroupPtr g = group_of(n);
    const std::size_t sz = n.rows();
    auto tri = nilpotent_triangularize(bar_matrix(n));
    const MatGR n1 = lift_integer(tri.u_inv, g) * n * lift_integer(tri.u, g);
    const IntPolyMatrix tn1 = t_times(tri.conjugate, r);
    AmalgResult out;
    out.u = tri.u;
    out.w = nilpotent_inverse_series(tn1);
    const MatGRPoly wg = lift_integer(out.w, g);
    const MatGRPoly one = identity_poly_matrix(sz, g);
    out.m = one - wg * (one - t_times(n1, r));
    if (!bar_matrix(out.m).is_zero()) throw Error("amalgamation left a nonzero augmentation");

    ChainBuilder b(one - t_times(n, r), ChainMode::el_only);
    auto as_poly = [&g](const Integer& q) { return gr_poly(GRElem::scalar(g, q)); };
    auto uinv_f = elementary_factorization(tri.u_inv);
    for (auto it = uinv_f.rbegin(); it != uinv_f.rend(); ++it) b.left(it->i, it->j, as_poly(it->q));
    for (const auto& f : elementary_factorization(tri.u)) b.right(f.i, f.j, as_poly(f.q));
    auto wf = unitriangular_factorization(out.w);
    for (auto it = wf.rbegin(); it != wf.rend(); ++it)
        b.left(it->i, it->j, it->q.map_coeffs([&g](const Integer& x) { return GRElem::scalar(g, x); }));
    out.chain = b.finish(one - out.m);
    if (b.state() != one - out.m) throw Error("amalgamation chain does not reach I - M_r");
    return out;
}

struct VFReps {
    MatGRPoly v, v_inv;  // I - t^r N and its inverse
    MatGRPoly f, f_inv;  // I - t N^r and its inverse
};

inline VFReps vf_reps(const MatGR& n, int r) {
    if (r < 1) throw InvalidArgument("r must be positive");
    require_nilpotent(n);
    const GroupPtr g = group_of(n);
    const MatGRPoly one = identity_poly_matrix(n.rows(), g);
    VFReps out;
    const MatGRPoly tv = t_times(n, r), tf = t_times(mat_pow(n, static_cast<unsigned long>(r)), 1);
    out.v = one - tv;
    out.v_inv = nilpotent_inverse_series(tv);
    out.f = one - tf;
    out.f_inv = nilpotent_inverse_series(tf);
    if (out.v * out.v_inv != one || out.f * out.f_inv != one) throw Error("inverse check failed");
    return out;
}

// ---- absorption steps ----

/// Which row absorbs the others: the last row (row form) or the first row (column form).
enum class AbsorbDirection { row, column };

struct AbsorbResult {
    MatGRPoly state;                    // I - B_{k+1}
    std::vector<ElementaryMove> moves;  // positive moves taking I - B_k to I - B_{k+1}
};

/// One recursion step: row form adds v_j * row_j to the last row (corner f + v u);
/// column form adds w_j * row_j to the first row (corner s + w x).
inline AbsorbResult absorb_step(const MatGRPoly& state, AbsorbDirection dir) {
    const std::size_t n = state.rows();
    if (n < 2) throw InvalidArgument("absorption needs at least a 2x2 matrix");
    require_positive_state(state, "absorption source");
    const std::size_t target = dir == AbsorbDirection::row ? n - 1 : 0;
    const MatGRPoly c = one_minus(state);
    ChainBuilder b(state, ChainMode::positive);
    for (std::size_t j = 0; j < n; ++j)
        if (j != target && !c(target, j).is_zero()) b.left(target, j, c(target, j));
    AbsorbResult out;
    out.state = b.state();
    out.moves = b.finish().moves;
    return out;
}

}  // namespace gext
