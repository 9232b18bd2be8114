#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "core.hpp"
#include "groupring.hpp"
#include "polymat.hpp"

namespace gext {

/// Edge graph with group labels; A(i,j) = sum n_g g becomes n_g parallel g-labeled edges i -> j.
struct LabeledGraph {
    struct Edge {
        std::size_t source, target, label;
    };
    GroupPtr group;
    std::size_t vertices = 0;
    std::vector<Edge> edges;
};

inline LabeledGraph labeled_graph(const MatGR& a) {
    if (!a.is_square()) throw InvalidArgument("labeled graph needs a square matrix");
    LabeledGraph out;
    out.group = a.zero().group();
    out.vertices = a.rows();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t g = 0; g < out.group->order(); ++g) {
                const Integer& c = a(i, j)[g];
                if (sgn(c) < 0) throw PreconditionFailed("labeled graph needs nonnegative coefficients");
                if (!c.fits_ulong_p()) throw PreconditionFailed("edge multiplicity too large to expand");
                for (unsigned long k = 0; k < c.get_ui(); ++k) out.edges.push_back({i, j, g});
            }
    return out;
}

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

namespace detail {
inline std::vector<std::vector<const LabeledGraph::Edge*>> out_edges(const LabeledGraph& g) {
    std::vector<std::vector<const LabeledGraph::Edge*>> adj(g.vertices);
    for (const auto& e : g.edges) adj[e.source].push_back(&e);
    return adj;
}
}  // namespace detail

/// Sum over closed edge paths of length n (every starting edge) of the ordered label product.
inline GRElem periodic_weights(const LabeledGraph& g, std::size_t n, const Integer& budget = Integer(10000000)) {
    if (n == 0) throw InvalidArgument("period must be positive");
    const auto& grp = *g.group;
    auto adj = detail::out_edges(g);
    std::vector<Integer> weight_count(grp.order());
    Integer closed = 0;
    for (std::size_t start = 0; start < g.vertices; ++start) {
        // paths from start, keyed by (current vertex, partial weight)
        std::map<std::pair<std::size_t, std::size_t>, Integer> layer{{{start, 0}, Integer(1)}};
        for (std::size_t step = 0; step < n; ++step) {
            std::map<std::pair<std::size_t, std::size_t>, Integer> next;
            for (const auto& [key, count] : layer)
                for (const auto* e : adj[key.first]) next[{e->target, grp.mul(key.second, e->label)}] += count;
            layer = std::move(next);
        }
        for (const auto& [key, count] : layer)
            if (key.first == start) {
                weight_count[key.second] += count;
                closed += count;
            }
        if (closed > budget) throw BudgetExceeded("closed path count exceeds the budget of " + budget.get_str());
    }
    return GRElem(g.group, weight_count);
}

/// Fixed points of the n-th power of the left skew product (x, h) -> (Sx, h * label(x_0)).
inline Integer skew_fixed_count(const LabeledGraph& g, std::size_t n, const Integer& budget = Integer(10000000)) {
    if (n == 0) throw InvalidArgument("period must be positive");
    const auto& grp = *g.group;
    auto adj = detail::out_edges(g);
    Integer fixed = 0, closed = 0;
    for (std::size_t start = 0; start < g.vertices; ++start)
        for (std::size_t h = 0; h < grp.order(); ++h) {
            std::map<std::pair<std::size_t, std::size_t>, Integer> layer{{{start, h}, Integer(1)}};
            for (std::size_t step = 0; step < n; ++step) {
                std::map<std::pair<std::size_t, std::size_t>, Integer> next;
                for (const auto& [key, count] : layer)
                    for (const auto* e : adj[key.first]) next[{e->target, grp.mul(key.second, e->label)}] += count;
                layer = std::move(next);
            }
            for (const auto& [key, count] : layer)
                if (key.first == start) {
                    closed += count;
                    if (key.second == h) fixed += count;
                }
            if (closed > budget * Integer(static_cast<unsigned long>(grp.order())))
                throw BudgetExceeded("closed path count exceeds the budget of " + budget.get_str());
        }
    return fixed;
}

}  // namespace gext
