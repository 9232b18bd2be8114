#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"
#include "groupring.hpp"
#include "intlinalg.hpp"
#include "polymat.hpp"

namespace gext {

/// tr(A^k) for k = 1..count (index 0 holds k = 1).
inline std::vector<GRElem> trace_series(const MatGR& a, std::size_t count) {
    if (!a.is_square()) throw InvalidArgument("trace series of a non-square matrix");
    std::vector<GRElem> out;
    out.reserve(count);
    MatGR p = a;
    for (std::size_t k = 1; k <= count; ++k) {
        out.push_back(trace(p));
        if (k < count) p = p * a;
    }
    return out;
}

/// First mn traces together with the integer recursion they satisfy.
struct TraceData {
    GroupPtr group;
    std::size_t n = 0;
    std::vector<GRElem> initial;     // tr(A^k), k = 1..mn
    std::vector<Integer> recursion;  // c_1..c_mn: tr(A^k) = sum_i c_i tr(A^(k-i))

    std::size_t length() const { return initial.size(); }
};

inline TraceData trace_data(const MatGR& a) {
    TraceData td;
    td.group = a.zero().group();
    td.n = a.rows();
    const std::size_t len = td.group->order() * td.n;
    td.initial = trace_series(a, len);
    auto p = charpoly(tilde_lift(a));
    for (std::size_t i = 1; i < p.size(); ++i) td.recursion.push_back(-p[i]);
    return td;
}

/// Traces up to K, continuing the initial segment by the integer recursion.
inline std::vector<GRElem> extend_traces(const TraceData& td, std::size_t count) {
    std::vector<GRElem> out(td.initial.begin(), td.initial.begin() + std::min(count, td.initial.size()));
    const std::size_t len = td.recursion.size();
    while (out.size() < count) {
        const std::size_t k = out.size() + 1;
        GRElem s(td.group);
        for (std::size_t i = 1; i <= len && i < k; ++i)
            if (sgn(td.recursion[i - 1]) != 0) s += td.recursion[i - 1] * out[k - i - 1];
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<ConjElem> kappa_series(const std::vector<GRElem>& traces) {
    std::vector<ConjElem> out;
    for (const auto& x : traces) out.push_back(kappa_project(x));
    return out;
}

struct KappaComparison {
    bool equal = true;
    std::size_t compared = 0;
    std::optional<std::size_t> first_difference;  // power k where the series first differ
    std::optional<ConjElem> left, right;          // the differing terms
    bool recursion_agrees = true;                 // both recursions extended to compared_extended agree
    std::size_t compared_extended = 0;
};

/// Equality of the full conjugacy-class trace series; agreement up to max(m n_A, m n_B)
/// decides it, and both recursions are additionally run out to m(n_A + n_B).
inline KappaComparison kappa_series_equal(const MatGR& a, const MatGR& b) {
    if (a.zero().group() != b.zero().group()) throw InvalidArgument("kappa comparison across different groups");
    const std::size_t m = a.zero().group()->order();
    KappaComparison out;
    const std::size_t na = m * a.rows(), nb = m * b.rows();
    out.compared = std::max(na, nb);
    auto ta = trace_series(a, out.compared);
    auto tb = trace_series(b, out.compared);
    for (std::size_t k = 0; k < out.compared; ++k) {
        auto ka = kappa_project(ta[k]), kb = kappa_project(tb[k]);
        if (ka != kb) {
            out.equal = false;
            out.first_difference = k + 1;
            out.left = ka;
            out.right = kb;
            break;
        }
    }
    out.compared_extended = na + nb;
    TraceData da{a.zero().group(), a.rows(), std::vector<GRElem>(ta.begin(), ta.begin() + na), {}};
    TraceData db{b.zero().group(), b.rows(), std::vector<GRElem>(tb.begin(), tb.begin() + nb), {}};
    for (auto [td, mat] : {std::pair{&da, &a}, std::pair{&db, &b}}) {
        auto p = charpoly(tilde_lift(*mat));
        for (std::size_t i = 1; i < p.size(); ++i) td->recursion.push_back(-p[i]);
    }
    auto ea = extend_traces(da, out.compared_extended);
    auto eb = extend_traces(db, out.compared_extended);
    bool ext_equal = true;
    for (std::size_t k = 0; k < out.compared_extended; ++k)
        if (kappa_project(ea[k]) != kappa_project(eb[k])) {
            ext_equal = false;
            break;
        }
    out.recursion_agrees = ext_equal == out.equal;
    return out;
}

// ---- determinants and zeta functions (abelian groups) ----

/// det(I - tA) as a polynomial over ZG.
inline GRPoly det_poly(const MatGR& a) {
    if (!a.zero().group()->is_abelian()) throw PreconditionFailed("det not well defined for a nonabelian group");
    auto p = charpoly_coefficients(a);
    GRPoly out(a.zero());
    for (std::size_t k = 0; k < p.size(); ++k) out.add_term(static_cast<int>(k), p[k]);
    return out;
}

/// det(I - A) for A over ZG[t].
inline GRPoly det_poly(const MatGRPoly& a) {
    if (!a.zero().zero().group()->is_abelian()) throw PreconditionFailed("det not well defined for a nonabelian group");
    return det_one_minus(a);
}

/// Power series inverse of a polynomial with constant term e, to order count.
inline std::vector<GRElem> zeta_series(const GRPoly& det, std::size_t count) {
    const GRElem zero = det.zero();
    if (det.constant_term() != one_like(zero)) throw PreconditionFailed("zeta expansion needs constant term e");
    std::vector<GRElem> z{one_like(zero)};
    for (std::size_t k = 1; k <= count; ++k) {
        GRElem s = zero;
        for (const auto& [i, d] : det.terms())
            if (i >= 1 && static_cast<std::size_t>(i) <= k) s += d * z[k - i];
        z.push_back(-s);
    }
    return z;
}

// ---- G-primitivity ----

/// Return-weight sets H_i for every vertex, from covering-graph reachability.
struct WeightGroups {
    std::vector<std::vector<std::size_t>> by_vertex;  // sorted element indices
    bool pairwise_conjugate = true;
};

namespace detail {
inline void require_nonnegative(const MatGR& a) {
    if (!a.is_square()) throw InvalidArgument("expected a square matrix");
    if (!is_nonnegative(a)) throw PreconditionFailed("matrix has a negative coefficient; entries must lie in Z+G");
}

/// (vertex, element) -> index vertex*m + element; edge (i,h) -> (j, h g) for each g in the support of A(i,j).
inline std::vector<std::vector<std::size_t>> covering_graph(const MatGR& a) {
    const auto& g = *a.zero().group();
    const std::size_t m = g.order(), n = a.rows();
    std::vector<std::vector<std::size_t>> adj(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t x = 0; x < m; ++x) {
                if (sgn(a(i, j)[x]) == 0) continue;
                for (std::size_t h = 0; h < m; ++h) adj[i * m + h].push_back(j * m + g.mul(h, x));
            }
    return adj;
}
}  // namespace detail

inline WeightGroups weight_subgroups(const MatGR& a) {
    detail::require_nonnegative(a);
    if (!primitive_test_int(bar_matrix(a)).irreducible())
        throw PreconditionFailed("augmented matrix is reducible");
    const auto& g = *a.zero().group();
    const std::size_t m = g.order(), n = a.rows();
    auto adj = detail::covering_graph(a);
    WeightGroups out;
    for (std::size_t i = 0; i < n; ++i) {
        // states reachable by walks of length >= 1 from (i, e)
        std::vector<bool> seen(n * m, false);
        std::vector<std::size_t> stack(adj[i * m].begin(), adj[i * m].end());
        for (auto s : stack) seen[s] = true;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto w : adj[v])
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        std::vector<std::size_t> h;
        for (std::size_t x = 0; x < m; ++x)
            if (seen[i * m + x]) h.push_back(x);
        out.by_vertex.push_back(std::move(h));
    }
    const auto& h0 = out.by_vertex.front();
    for (std::size_t i = 1; i < n && out.pairwise_conjugate; ++i) {
        bool found = false;
        for (std::size_t c = 0; c < m && !found; ++c) {
            std::set<std::size_t> conj;
            for (auto x : h0) conj.insert(g.conj(c, x));
            found = std::equal(conj.begin(), conj.end(), out.by_vertex[i].begin(), out.by_vertex[i].end());
        }
        out.pairwise_conjugate = found;
    }
    return out;
}

inline std::vector<std::size_t> weight_subgroup(const MatGR& a, std::size_t i) {
    auto w = weight_subgroups(a);
    if (i >= w.by_vertex.size()) throw InvalidArgument("vertex index out of range");
    if (!w.pairwise_conjugate) throw Error("weight subgroups are not pairwise conjugate");
    return w.by_vertex[i];
}

inline std::string element_set_text(const FiniteGroup& g, const std::vector<std::size_t>& s) {
    std::string out = "{";
    for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + g.name(s[k]);
    return out + "}";
}

struct GPrimitivity {
    bool g_primitive = false;
    std::string reason;                    // empty when G-primitive
    IntPrimitivity lift;                   // verdict on the regular-representation lift
    std::optional<std::vector<std::size_t>> h1;
    bool criteria_agree = true;            // trace/weight-group criterion gives the same verdict
};

inline GPrimitivity g_primitive_test(const MatGR& a) {
    detail::require_nonnegative(a);
    const auto& g = *a.zero().group();
    GPrimitivity out;
    out.lift = primitive_test_int(tilde_lift(a));
    out.g_primitive = out.lift.primitive();
    const auto bar_verdict = primitive_test_int(bar_matrix(a));
    bool criterion = false;
    if (!bar_verdict.irreducible()) {
        out.reason = "augmentation reducible";
    } else {
        auto w = weight_subgroups(a);
        out.h1 = w.by_vertex.front();
        const bool full = out.h1->size() == g.order();
        std::size_t period = 0;
        if (full) {
            // gcd of k <= mn with a positive identity coefficient in tr(A^k)
            auto tr = trace_series(a, g.order() * a.rows());
            for (std::size_t k = 0; k < tr.size(); ++k)
                if (sgn(tr[k][0]) > 0) period = gcd_size(period, k + 1);
            criterion = period == 1;
        }
        if (!full) out.reason = "H_1=" + element_set_text(g, *out.h1) + " != G";
        else if (!out.g_primitive) out.reason = "period " + std::to_string(out.lift.period);
    }
    out.criteria_agree = criterion == out.g_primitive;
    return out;
}

// ---- u-power test ----

struct UPowerReport {
    bool holds = true;
    std::optional<std::size_t> first_failure;  // power k with m*tau_{k,e} != aug(tau_k)
};

inline UPowerReport u_power_test(const MatGR& a) {
    const std::size_t m = a.zero().group()->order();
    auto tr = trace_series(a, m * a.rows());
    UPowerReport out;
    for (std::size_t k = 0; k < tr.size(); ++k)
        if (Integer(static_cast<unsigned long>(m)) * tr[k][0] != augment(tr[k])) {
            out.holds = false;
            out.first_failure = k + 1;
            break;
        }
    return out;
}

/// True when every entry of A^p is an integer multiple of u.
inline bool power_in_u(const MatGR& a, unsigned long p) {
    auto q = mat_pow(a, p);
    for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t j = 0; j < q.cols(); ++j)
            if (!q(i, j).is_multiple_of_u()) return false;
    return true;
}

// ---- Perron limit ----

struct PerronLimitReport {
    double lambda = 0;
    double deviation = 0;
    bool pass = false;
    std::vector<double> left_vec, right_vec;
};

inline PerronLimitReport perron_limit_check(const MatGR& a, std::size_t k, double tol) {
    auto gp = g_primitive_test(a);
    if (!gp.g_primitive) throw PreconditionFailed("Perron limit needs a G-primitive matrix: " + gp.reason);
    const std::size_t m = a.zero().group()->order(), n = a.rows(), big = m * n;
    auto pd = perron_eigendata(bar_matrix(a), 1e-13);
    auto lifted = tilde_lift(a);
    std::vector<double> base(big * big), acc(big * big, 0.0);
    for (std::size_t i = 0; i < big; ++i) {
        acc[i * big + i] = 1.0;
        for (std::size_t j = 0; j < big; ++j) base[i * big + j] = lifted(i, j).get_d() / pd.lambda;
    }
    for (std::size_t s = 0; s < k; ++s) {
        std::vector<double> next(big * big, 0.0);
        for (std::size_t i = 0; i < big; ++i)
            for (std::size_t l = 0; l < big; ++l) {
                const double x = acc[i * big + l];
                if (x == 0.0) continue;
                for (std::size_t j = 0; j < big; ++j) next[i * big + j] += x * base[l * big + j];
            }
        acc = std::move(next);
    }
    PerronLimitReport out;
    out.lambda = pd.lambda;
    out.left_vec = pd.left_vec;
    out.right_vec = pd.right_vec;
    // coefficient of g in (A/lambda)^k (i,j) sits in column e of block (i,j)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double target = pd.right_vec[i] * pd.left_vec[j] / static_cast<double>(m);
            for (std::size_t g = 0; g < m; ++g)
                out.deviation = std::max(out.deviation, std::fabs(acc[(i * m + g) * big + j * m] - target));
        }
    out.pass = out.deviation <= tol;
    return out;
}

}  // namespace gext
