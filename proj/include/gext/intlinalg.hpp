#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "polymat.hpp"

namespace gext {

// ---- characteristic polynomial ----

/// Coefficients p_0..p_n of det(xI - M) = sum_k p_k x^(n-k), p_0 = 1.
/// Berkowitz's division-free recursion; valid over any commutative ring.
template <class T>
std::vector<T> charpoly_coefficients(const Matrix<T>& m) {
    if (!m.is_square()) throw InvalidArgument("characteristic polynomial of a non-square matrix");
    const T zero = m.zero();
    if (!is_commutative(zero)) throw PreconditionFailed("det not well defined: coefficient ring is not commutative");
    const std::size_t n = m.rows();
    const T one = one_like(zero);
    if (n == 0) return {one};

    std::vector<T> p{one, -m(n - 1, n - 1)};
    for (std::size_t r = n - 1; r-- > 0;) {
        const std::size_t k = n - 1 - r;  // size of trailing block
        // q = (1, -a_rr, -R C, -R M C, ..., -R M^(k-1) C)
        std::vector<T> q(k + 2, zero);
        q[0] = one;
        q[1] = -m(r, r);
        std::vector<T> v(k, zero);  // v = M^j C, indexed by trailing row
        for (std::size_t i = 0; i < k; ++i) v[i] = m(r + 1 + i, r);
        for (std::size_t j = 0; j < k; ++j) {
            T s = zero;
            for (std::size_t i = 0; i < k; ++i) {
                const T& a = m(r, r + 1 + i);
                if (is_zero(a) || is_zero(v[i])) continue;
                s = s + a * v[i];
            }
            q[j + 2] = -s;
            if (j + 1 == k) break;
            std::vector<T> w(k, zero);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t l = 0; l < k; ++l) {
                    const T& a = m(r + 1 + i, r + 1 + l);
                    if (is_zero(a) || is_zero(v[l])) continue;
                    w[i] = w[i] + a * v[l];
                }
            v = std::move(w);
        }
        std::vector<T> next(k + 2, zero);
        for (std::size_t i = 0; i < k + 2; ++i)
            for (std::size_t j = 0; j <= std::min(i, k); ++j) {
                if (is_zero(q[i - j]) || is_zero(p[j])) continue;
                next[i] = next[i] + q[i - j] * p[j];
            }
        p = std::move(next);
    }
    return p;
}

/// Monic integer characteristic polynomial, highest degree first.
inline std::vector<Integer> charpoly(const IntMatrix& m) { return charpoly_coefficients(m); }

template <class T>
T determinant(const Matrix<T>& m) {
    auto p = charpoly_coefficients(m);
    T d = p.back();
    return m.rows() % 2 == 1 ? -d : d;
}

/// det(I - A), read off as det(xI - A) at x = 1.
template <class T>
T det_one_minus(const Matrix<T>& a) {
    auto p = charpoly_coefficients(a);
    T s = a.zero();
    for (const auto& c : p) s = s + c;
    return s;
}

/// Adjugate over a commutative ring, by cofactors.
template <class T>
Matrix<T> adjugate(const Matrix<T>& m) {
    if (!m.is_square()) throw InvalidArgument("adjugate of a non-square matrix");
    const std::size_t n = m.rows();
    Matrix<T> out(n, n, m.zero());
    if (n == 1) {
        out(0, 0) = one_like(m.zero());
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Matrix<T> minor(n - 1, n - 1, m.zero());
            for (std::size_t a = 0, ra = 0; a < n; ++a) {
                if (a == j) continue;
                for (std::size_t b = 0, cb = 0; b < n; ++b) {
                    if (b == i) continue;
                    minor(ra, cb++) = m(a, b);
                }
                ++ra;
            }
            T d = determinant(minor);
            out(i, j) = (i + j) % 2 == 0 ? d : -d;
        }
    return out;
}

/// Evaluate the polynomial with coefficients p (highest first) at the square matrix m.
inline IntMatrix eval_charpoly_at(const std::vector<Integer>& p, const IntMatrix& m) {
    IntMatrix acc(m.rows(), m.cols(), Integer(0));
    for (const auto& c : p) {
        acc = acc * m;
        for (std::size_t i = 0; i < m.rows(); ++i) acc(i, i) += c;
    }
    return acc;
}

// ---- Smith normal form ----

struct SNFResult {
    std::vector<Integer> diagonal;  // length min(rows, cols)
    IntMatrix left, right;          // left * A * right = diag
    IntMatrix left_inv, right_inv;

    std::size_t rank() const {
        std::size_t r = 0;
        for (const auto& d : diagonal)
            if (sgn(d) != 0) ++r;
        return r;
    }
};

/// Cokernel Z^rows / A Z^cols as nontrivial torsion orders plus free rank.
struct Cokernel {
    std::vector<Integer> torsion;
    std::size_t free_rank = 0;
    friend bool operator==(const Cokernel& a, const Cokernel& b) {
        return a.torsion == b.torsion && a.free_rank == b.free_rank;
    }
    std::string to_string() const {
        std::string s;
        for (const auto& d : torsion) s += (s.empty() ? "" : " + ") + ("Z/" + d.get_str());
        if (free_rank > 0) s += (s.empty() ? "" : " + ") + (free_rank == 1 ? std::string("Z") : "Z^" + std::to_string(free_rank));
        return s.empty() ? "0" : s;
    }
};

inline SNFResult smith_normal_form(const IntMatrix& m) {
    const std::size_t r = m.rows(), c = m.cols();
    IntMatrix a = m;
    IntMatrix L = IntMatrix::identity(r, Integer(0)), Li = L;
    IntMatrix R = IntMatrix::identity(c, Integer(0)), Ri = R;

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < c; ++k) std::swap(a(i, k), a(j, k));
        for (std::size_t k = 0; k < r; ++k) std::swap(L(i, k), L(j, k));
        for (std::size_t k = 0; k < r; ++k) std::swap(Li(k, i), Li(k, j));
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < r; ++k) std::swap(a(k, i), a(k, j));
        for (std::size_t k = 0; k < c; ++k) std::swap(R(k, i), R(k, j));
        for (std::size_t k = 0; k < c; ++k) std::swap(Ri(i, k), Ri(j, k));
    };
    // row_i += q * row_j
    auto add_row = [&](std::size_t i, std::size_t j, const Integer& q) {
        for (std::size_t k = 0; k < c; ++k) a(i, k) += q * a(j, k);
        for (std::size_t k = 0; k < r; ++k) L(i, k) += q * L(j, k);
        for (std::size_t k = 0; k < r; ++k) Li(k, j) -= q * Li(k, i);
    };
    // col_i += q * col_j
    auto add_col = [&](std::size_t i, std::size_t j, const Integer& q) {
        for (std::size_t k = 0; k < r; ++k) a(k, i) += q * a(k, j);
        for (std::size_t k = 0; k < c; ++k) R(k, i) += q * R(k, j);
        for (std::size_t k = 0; k < c; ++k) Ri(j, k) -= q * Ri(i, k);
    };

    const std::size_t steps = std::min(r, c);
    for (std::size_t t = 0; t < steps; ++t) {
        for (;;) {
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j)
                    if (sgn(a(i, j)) != 0 && (!best || cmpabs(a(i, j), a(best->first, best->second)) < 0))
                        best = std::make_pair(i, j);
            if (!best) break;
            swap_rows(t, best->first);
            swap_cols(t, best->second);
            bool clean = true;
            for (std::size_t i = t + 1; i < r; ++i)
                if (sgn(a(i, t)) != 0) {
                    add_row(i, t, -trunc_div(a(i, t), a(t, t)));
                    if (sgn(a(i, t)) != 0) clean = false;
                }
            for (std::size_t j = t + 1; j < c; ++j)
                if (sgn(a(t, j)) != 0) {
                    add_col(j, t, -trunc_div(a(t, j), a(t, t)));
                    if (sgn(a(t, j)) != 0) clean = false;
                }
            if (!clean) continue;
            std::optional<std::size_t> bad_row;
            for (std::size_t i = t + 1; i < r && !bad_row; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (!divides(a(t, t), a(i, j))) {
                        bad_row = i;
                        break;
                    }
            if (!bad_row) break;
            add_row(t, *bad_row, Integer(1));
        }
        if (sgn(a(t, t)) < 0) {
            for (std::size_t k = 0; k < c; ++k) a(t, k) = -a(t, k);
            for (std::size_t k = 0; k < r; ++k) L(t, k) = -L(t, k);
            for (std::size_t k = 0; k < r; ++k) Li(k, t) = -Li(k, t);
        }
    }
    SNFResult out;
    for (std::size_t t = 0; t < steps; ++t) out.diagonal.push_back(a(t, t));
    out.left = std::move(L);
    out.right = std::move(R);
    out.left_inv = std::move(Li);
    out.right_inv = std::move(Ri);
    return out;
}

inline Cokernel cokernel(const IntMatrix& m) {
    auto snf = smith_normal_form(m);
    Cokernel ck;
    for (const auto& d : snf.diagonal)
        if (d > 1) ck.torsion.push_back(d);
    ck.free_rank = m.rows() - snf.rank();
    return ck;
}

inline std::size_t rank(const IntMatrix& m) { return smith_normal_form(m).rank(); }

/// Inverse of a unimodular integer matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& u) {
    if (!u.is_square()) throw InvalidArgument("inverse of a non-square matrix");
    auto snf = smith_normal_form(u);
    for (const auto& d : snf.diagonal)
        if (d != 1) throw PreconditionFailed("matrix is not unimodular");
    return snf.right * snf.left;
}

// ---- primitivity of nonnegative matrices ----

struct IntPrimitivity {
    enum class Kind { primitive, periodic, reducible };
    Kind kind = Kind::reducible;
    std::size_t period = 0;  // meaningful when irreducible

    bool primitive() const { return kind == Kind::primitive; }
    bool irreducible() const { return kind != Kind::reducible; }
    std::string to_string() const {
        switch (kind) {
            case Kind::primitive: return "primitive";
            case Kind::periodic: return "irreducible-periodic " + std::to_string(period);
            default: return "reducible";
        }
    }
};

/// Adjacency lists of the support digraph.
template <class T>
std::vector<std::vector<std::size_t>> support_graph(const Matrix<T>& m) {
    std::vector<std::vector<std::size_t>> adj(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!is_zero(m(i, j))) adj[i].push_back(j);
    return adj;
}

namespace detail {
inline std::vector<long> bfs_levels(const std::vector<std::vector<std::size_t>>& adj, std::size_t start) {
    std::vector<long> level(adj.size(), -1);
    std::queue<std::size_t> q;
    level[start] = 0;
    q.push(start);
    while (!q.empty()) {
        auto v = q.front();
        q.pop();
        for (auto w : adj[v])
            if (level[w] < 0) {
                level[w] = level[v] + 1;
                q.push(w);
            }
    }
    return level;
}
}  // namespace detail

/// Strong connectivity plus period (gcd of cycle lengths, via BFS level differences).
inline IntPrimitivity primitive_test_int(const IntMatrix& m) {
    if (!m.is_square()) throw InvalidArgument("primitivity test of a non-square matrix");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (sgn(m(i, j)) < 0) throw PreconditionFailed("primitivity test needs a nonnegative matrix");
    IntPrimitivity out;
    const std::size_t n = m.rows();
    if (n == 0) return out;
    auto adj = support_graph(m);
    std::vector<std::vector<std::size_t>> radj(n);
    for (std::size_t v = 0; v < n; ++v)
        for (auto w : adj[v]) radj[w].push_back(v);
    auto fwd = detail::bfs_levels(adj, 0);
    auto back = detail::bfs_levels(radj, 0);
    for (std::size_t v = 0; v < n; ++v)
        if (fwd[v] < 0 || back[v] < 0) return out;
    std::size_t g = 0;
    for (std::size_t v = 0; v < n; ++v)
        for (auto w : adj[v]) {
            long d = fwd[v] + 1 - fwd[w];
            g = gcd_size(g, static_cast<std::size_t>(d < 0 ? -d : d));
        }
    if (g == 0) return out;  // no edges at all: the 1x1 zero matrix
    out.period = g;
    out.kind = g == 1 ? IntPrimitivity::Kind::primitive : IntPrimitivity::Kind::periodic;
    return out;
}

// ---- elementary factorizations ----

/// Basic elementary matrix I + q*e_ij.
template <class T>
struct ElementaryFactor {
    std::size_t i = 0, j = 0;
    T q;
};

template <class T>
Matrix<T> elementary_matrix(std::size_t n, const ElementaryFactor<T>& f, const T& proto) {
    auto e = Matrix<T>::identity(n, proto);
    e(f.i, f.j) = e(f.i, f.j) + f.q;
    return e;
}

/// Factors F_1..F_k with U = F_1 F_2 ... F_k, for U in SL_n(Z).
inline std::vector<ElementaryFactor<Integer>> elementary_factorization(const IntMatrix& u) {
    if (!u.is_square()) throw InvalidArgument("factorization of a non-square matrix");
    const std::size_t n = u.rows();
    IntMatrix a = u;
    std::vector<ElementaryFactor<Integer>> ops;  // E_k ... E_1 U = I
    auto add_row = [&](std::size_t i, std::size_t j, const Integer& q) {
        if (sgn(q) == 0) return;
        for (std::size_t k = 0; k < n; ++k) a(i, k) += q * a(j, k);
        ops.push_back({i, j, q});
    };
    for (std::size_t c = 0; c < n; ++c) {
        for (;;) {
            std::optional<std::size_t> p;
            std::size_t nonzero = 0;
            for (std::size_t i = c; i < n; ++i)
                if (sgn(a(i, c)) != 0) {
                    ++nonzero;
                    if (!p || cmpabs(a(i, c), a(*p, c)) < 0) p = i;
                }
            if (!p) throw PreconditionFailed("matrix is singular");
            if (nonzero == 1) {
                if (*p != c) {
                    add_row(c, *p, Integer(1));
                    add_row(*p, c, -a(*p, c) * a(c, c));
                }
                break;
            }
            for (std::size_t i = c; i < n; ++i)
                if (i != *p && sgn(a(i, c)) != 0) add_row(i, *p, -trunc_div(a(i, c), a(*p, c)));
        }
        if (a(c, c) != 1 && a(c, c) != -1) throw PreconditionFailed("matrix is not unimodular");
        if (a(c, c) == -1) {
            if (c + 1 == n) throw PreconditionFailed("determinant is -1, not in SL_n");
            add_row(c + 1, c, Integer(-1));
            add_row(c, c + 1, Integer(2));
            add_row(c + 1, c, Integer(-1));
        }
        for (std::size_t i = 0; i < n; ++i)
            if (i != c && sgn(a(i, c)) != 0) add_row(i, c, -a(i, c));
    }
    if (!a.is_identity()) throw PreconditionFailed("elementary reduction did not reach the identity");
    std::vector<ElementaryFactor<Integer>> out;
    for (const auto& op : ops) out.push_back({op.i, op.j, -op.q});
    return out;
}

/// Factors with W = F_1 ... F_k for W upper unitriangular over any ring.
template <class T>
std::vector<ElementaryFactor<T>> unitriangular_factorization(const Matrix<T>& w) {
    const std::size_t n = w.rows();
    const T one = one_like(w.zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i && j < w.cols(); ++j)
            if (w(i, j) != (i == j ? one : w.zero())) throw PreconditionFailed("matrix is not upper unitriangular");
    // Clearing columns right to left with row_i -= w_ij row_j; row j is already e_j.
    std::vector<ElementaryFactor<T>> out;
    for (std::size_t j = n; j-- > 1;)
        for (std::size_t i = 0; i < j; ++i)
            if (!is_zero(w(i, j))) out.push_back({i, j, w(i, j)});
    return out;
}

template <class T>
Matrix<T> product_of_factors(std::size_t n, const std::vector<ElementaryFactor<T>>& fs, const T& proto) {
    auto m = Matrix<T>::identity(n, proto);
    for (const auto& f : fs) m = m * elementary_matrix(n, f, proto);
    return m;
}

// ---- nilpotent triangularization ----

struct Triangularization {
    IntMatrix u, u_inv, conjugate;  // conjugate = u_inv * N * u, strictly upper triangular
};

inline bool is_strictly_upper(const IntMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j <= i && j < m.cols(); ++j)
            if (sgn(m(i, j)) != 0) return false;
    return true;
}

/// Raises with the power where the rank stops dropping when N is not nilpotent.
inline void require_nilpotent(const IntMatrix& n) {
    if (!n.is_square()) throw InvalidArgument("nilpotency of a non-square matrix");
    IntMatrix p = n;
    std::size_t prev = n.rows() + 1;
    for (std::size_t k = 1;; ++k) {
        std::size_t rk = rank(p);
        if (rk == 0) return;
        if (rk == prev) throw PreconditionFailed("matrix is not nilpotent: rank of N^k stabilizes at " + std::to_string(rk) + " from k=" + std::to_string(k - 1));
        prev = rk;
        p = p * n;
    }
}

inline Triangularization nilpotent_triangularize(const IntMatrix& n) {
    require_nilpotent(n);
    const std::size_t sz = n.rows();
    Triangularization out;
    if (sz == 0 || n.is_zero() || is_strictly_upper(n)) {
        out.u = IntMatrix::identity(sz, Integer(0));
        out.u_inv = out.u;
        out.conjugate = n;
        return out;
    }
    auto snf = smith_normal_form(n);
    const std::size_t rk = snf.rank();
    const std::size_t kdim = sz - rk;
    // Columns rk.. of the right transform span ker N; put them first.
    IntMatrix u1(sz, sz, Integer(0)), u1_inv(sz, sz, Integer(0));
    for (std::size_t j = 0; j < sz; ++j) {
        std::size_t src = j < kdim ? rk + j : j - kdim;
        for (std::size_t i = 0; i < sz; ++i) {
            u1(i, j) = snf.right(i, src);
            u1_inv(j, i) = snf.right_inv(src, i);
        }
    }
    IntMatrix c1 = u1_inv * n * u1;
    IntMatrix lower = c1.block(kdim, kdim, rk, rk);
    auto sub = nilpotent_triangularize(lower);
    IntMatrix u2 = direct_sum(IntMatrix::identity(kdim, Integer(0)), sub.u);
    IntMatrix u2_inv = direct_sum(IntMatrix::identity(kdim, Integer(0)), sub.u_inv);
    out.u = u1 * u2;
    out.u_inv = u2_inv * u1_inv;
    if (determinant(out.u) < 0) {
        for (std::size_t i = 0; i < sz; ++i) out.u(i, 0) = -out.u(i, 0);
        for (std::size_t j = 0; j < sz; ++j) out.u_inv(0, j) = -out.u_inv(0, j);
    }
    out.conjugate = out.u_inv * n * out.u;
    if (!is_strictly_upper(out.conjugate)) throw Error("triangularization failed to produce a strictly upper triangular matrix");
    return out;
}

// ---- Perron data ----

struct PerronData {
    double lambda = 0;
    std::vector<double> left_vec, right_vec;
    double residual = 0;
};

namespace detail {
inline std::vector<double> power_iterate(const std::vector<std::vector<double>>& a, double tol) {
    const std::size_t n = a.size();
    std::vector<double> v(n, 1.0);
    for (int it = 0; it < 200000; ++it) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = v[i];  // shift by I keeps the iteration aperiodic
            for (std::size_t j = 0; j < n; ++j) w[i] += a[i][j] * v[j];
        }
        double s = 0;
        for (double x : w) s += x;
        double diff = 0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] /= s;
            diff = std::max(diff, std::fabs(w[i] - v[i]));
        }
        v = std::move(w);
        if (diff < tol * 1e-3) break;
    }
    return v;
}
}  // namespace detail

inline PerronData perron_eigendata(const IntMatrix& m, double tol = 1e-12) {
    auto verdict = primitive_test_int(m);
    if (!verdict.irreducible()) throw PreconditionFailed("Perron data needs an irreducible matrix");
    const std::size_t n = m.rows();
    std::vector<std::vector<double>> a(n, std::vector<double>(n)), at(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) at[j][i] = a[i][j] = m(i, j).get_d();
    PerronData out;
    out.right_vec = detail::power_iterate(a, tol);
    out.left_vec = detail::power_iterate(at, tol);
    std::vector<double> mr(n, 0.0);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) mr[i] += a[i][j] * out.right_vec[j];
        num += mr[i];
        den += out.right_vec[i];
    }
    out.lambda = num / den;
    double dot = 0;
    for (std::size_t i = 0; i < n; ++i) dot += out.left_vec[i] * out.right_vec[i];
    for (auto& x : out.left_vec) x /= dot;
    double rmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.residual = std::max(out.residual, std::fabs(mr[i] - out.lambda * out.right_vec[i]));
        rmax = std::max(rmax, std::fabs(out.right_vec[i]));
    }
    out.residual /= rmax;
    if (out.residual > tol * std::max(1.0, out.lambda)) throw Error("power iteration did not converge to the requested tolerance");
    return out;
}

}  // namespace gext
