#pragma once

#include <random>
#include <vector>

#include "gext/equivalence.hpp"
#include "gext/groups.hpp"
#include "gext/polymat.hpp"

namespace gext::test {

inline GRElem random_elem(const GroupPtr& g, std::mt19937_64& rng, int lo, int hi, double density = 0.5) {
    std::uniform_int_distribution<int> coef(lo, hi);
    std::bernoulli_distribution keep(density);
    GRElem x(g);
    for (std::size_t i = 0; i < g->order(); ++i)
        if (keep(rng)) x[i] = coef(rng);
    return x;
}

inline MatGR random_matrix(const GroupPtr& g, std::size_t n, std::mt19937_64& rng, int lo, int hi, double density = 0.5) {
    MatGR a(n, n, GRElem(g));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = random_elem(g, rng, lo, hi, density);
    return a;
}

/// Nonnegative entries over tZ+G[t] with at most the given degree.
inline MatGRPoly random_t_matrix(const GroupPtr& g, std::size_t n, int deg, std::mt19937_64& rng, int hi = 2,
                                 double density = 0.4) {
    MatGRPoly a(n, n, gr_poly_zero(g));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (int k = 1; k <= deg; ++k) a(i, j) += gr_poly(random_elem(g, rng, 0, hi, density), k);
    return a;
}

/// NZC matrix: nonnegative, constant term strictly upper triangular so A(0) is nilpotent.
inline MatGRPoly random_nzc(const GroupPtr& g, std::size_t n, int deg, std::mt19937_64& rng) {
    MatGRPoly a = random_t_matrix(g, n, deg, rng);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) += gr_poly(random_elem(g, rng, 0, 2, 0.3));
    return a;
}

inline std::vector<GroupPtr> small_groups() {
    return {make_group(GroupSpec::cyclic(1)), make_group(GroupSpec::cyclic(2)), make_group(GroupSpec::cyclic(3)),
            make_group(GroupSpec::cyclic(4)),
            make_group(GroupSpec::product({GroupSpec::cyclic(2), GroupSpec::cyclic(2)})),
            make_group(GroupSpec::symmetric(3))};
}

inline std::vector<GroupPtr> small_abelian_groups() {
    return {make_group(GroupSpec::cyclic(1)), make_group(GroupSpec::cyclic(2)), make_group(GroupSpec::cyclic(3)),
            make_group(GroupSpec::cyclic(4)),
            make_group(GroupSpec::product({GroupSpec::cyclic(2), GroupSpec::cyclic(2)}))};
}

/// Cofactor expansion along the first row; exponential, for small oracle checks only.
template <class T>
T laplace_det(const Matrix<T>& m) {
    const std::size_t n = m.rows();
    const T zero = m.zero();
    if (n == 0) return one_like(zero);
    if (n == 1) return m(0, 0);
    T s = zero;
    for (std::size_t j = 0; j < n; ++j) {
        Matrix<T> minor(n - 1, n - 1, zero);
        for (std::size_t a = 1; a < n; ++a)
            for (std::size_t b = 0, c = 0; b < n; ++b)
                if (b != j) minor(a - 1, c++) = m(a, b);
        T term = m(0, j) * laplace_det(minor);
        if (j % 2 == 0) s = s + term;
        else s = s - term;
    }
    return s;
}

}  // namespace gext::test
