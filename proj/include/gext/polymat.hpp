#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "groupring.hpp"

namespace gext {

/// Polynomial in one commuting variable t with coefficients in a (possibly
/// noncommutative) ring T. Zero coefficients are never stored.
template <class T>
class Poly {
public:
    Poly() : zero_(T()) {}
    explicit Poly(T zero) : zero_(zero_like(zero)) {}

    static Poly monomial(const T& c, int degree) {
        Poly p(c);
        if (!gext::is_zero(c)) p.terms_.emplace(degree, c);
        return p;
    }
    static Poly constant(const T& c) { return monomial(c, 0); }
    /// t^k with coefficient one.
    static Poly t_power(const T& proto, int k) { return monomial(one_like(proto), k); }

    const T& zero() const { return zero_; }
    const std::map<int, T>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first; }
    int low_degree() const { return terms_.empty() ? -1 : terms_.begin()->first; }

    T coeff(int k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? zero_ : it->second;
    }
    T constant_term() const { return coeff(0); }
    /// Value at t = 1.
    T at_one() const {
        T s = zero_;
        for (const auto& [k, c] : terms_) s = s + c;
        return s;
    }

    void add_term(int k, const T& c) {
        if (gext::is_zero(c)) return;
        auto [it, fresh] = terms_.emplace(k, c);
        if (!fresh) {
            it->second = it->second + c;
            if (gext::is_zero(it->second)) terms_.erase(it);
        }
    }

    /// Multiply by t^k.
    Poly shifted(int k) const {
        Poly out(zero_);
        for (const auto& [d, c] : terms_) out.terms_.emplace(d + k, c);
        return out;
    }
    /// Terms of degree < k.
    Poly truncated(int k) const {
        Poly out(zero_);
        for (const auto& [d, c] : terms_)
            if (d < k) out.terms_.emplace(d, c);
        return out;
    }

    template <class F>
    auto map_coeffs(F f) const {
        using U = decltype(f(zero_));
        Poly<U> out(f(zero_));
        for (const auto& [d, c] : terms_) out.add_term(d, f(c));
        return out;
    }

    Poly& operator+=(const Poly& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(const Poly& a) {
        Poly out(a.zero_);
        for (const auto& [k, c] : a.terms_) out.terms_.emplace(k, -c);
        return out;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly out(a.zero_);
        for (const auto& [i, x] : a.terms_)
            for (const auto& [j, y] : b.terms_) out.add_term(i + j, x * y);
        return out;
    }
    friend Poly operator*(const Integer& c, const Poly& a) {
        Poly out(a.zero_);
        for (const auto& [k, x] : a.terms_) out.add_term(k, c * x);
        return out;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
    std::map<int, T> terms_;
    T zero_;
};

using IntPoly = Poly<Integer>;
using GRPoly = Poly<GRElem>;

template <class T>
bool is_zero(const Poly<T>& p) { return p.is_zero(); }
template <class T>
Poly<T> zero_like(const Poly<T>& p) { return Poly<T>(p.zero()); }
template <class T>
Poly<T> one_like(const Poly<T>& p) { return Poly<T>::constant(one_like(p.zero())); }
template <class T>
bool is_nonnegative(const Poly<T>& p) {
    for (const auto& [k, c] : p.terms())
        if (!is_nonnegative(c)) return false;
    return true;
}

inline bool is_commutative(const Integer&) { return true; }
inline bool is_commutative(const GRElem& x) { return x.group()->is_abelian(); }
template <class T>
bool is_commutative(const Poly<T>& p) { return is_commutative(p.zero()); }

inline GRPoly gr_poly(const GRElem& c, int degree = 0) { return GRPoly::monomial(c, degree); }
inline GRPoly gr_poly_zero(const GroupPtr& g) { return GRPoly(GRElem(g)); }

/// Dense rectangular matrix over a ring T; the stored zero fixes the ring
/// (for group rings it carries the group).
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& zero)
        : rows_(rows), cols_(cols), zero_(zero_like(zero)), data_(rows * cols, zero_) {}

    static Matrix identity(std::size_t n, const T& proto) {
        Matrix m(n, n, proto);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one_like(proto);
        return m;
    }
    static Matrix from_rows(const std::vector<std::vector<T>>& rows, const T& proto) {
        const std::size_t c = rows.empty() ? 0 : rows.front().size();
        Matrix m(rows.size(), c, proto);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) throw InvalidArgument("matrix rows have different lengths");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    const T& zero() const { return zero_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    T& at(std::size_t i, std::size_t j) {
        if (i >= rows_ || j >= cols_) throw InvalidArgument("matrix index out of range");
        return (*this)(i, j);
    }
    const T& at(std::size_t i, std::size_t j) const {
        if (i >= rows_ || j >= cols_) throw InvalidArgument("matrix index out of range");
        return (*this)(i, j);
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!gext::is_zero(x)) return false;
        return true;
    }
    bool is_identity() const { return is_square() && *this == identity(rows_, zero_); }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw InvalidArgument("block out of range");
        Matrix out(nr, nc, zero_);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw InvalidArgument("block out of range");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    Matrix transpose() const {
        Matrix out(cols_, rows_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    template <class F>
    auto map(F f) const {
        using U = decltype(f(zero_));
        Matrix<U> out(rows_, cols_, f(zero_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
        return out;
    }

    Matrix& operator+=(const Matrix& o) {
        check_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] = data_[k] + o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] = data_[k] - o.data_[k];
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a) {
        for (auto& x : a.data_) x = -x;
        return a;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw InvalidArgument("matrix product: inner dimensions differ");
        Matrix out(a.rows_, b.cols_, a.zero_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& x = a(i, k);
                if (gext::is_zero(x)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const T& y = b(k, j);
                    if (gext::is_zero(y)) continue;
                    out(i, j) = out(i, j) + x * y;
                }
            }
        return out;
    }
    /// Entrywise left scaling c*A.
    friend Matrix operator*(const T& c, const Matrix& a) {
        Matrix out(a.rows_, a.cols_, a.zero_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) out.data_[k] = c * a.data_[k];
        return out;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    void check_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("matrix shapes differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    T zero_{};
    std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using IntPolyMatrix = Matrix<IntPoly>;
using MatGR = Matrix<GRElem>;
using MatGRPoly = Matrix<GRPoly>;

template <class T>
bool is_zero(const Matrix<T>& m) { return m.is_zero(); }

inline IntMatrix int_matrix(const std::vector<std::vector<long>>& rows) {
    std::vector<std::vector<Integer>> r;
    for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
    return IntMatrix::from_rows(r, Integer(0));
}

template <class T>
Matrix<T> mat_pow(const Matrix<T>& a, unsigned long k) {
    if (!a.is_square()) throw InvalidArgument("matrix power of a non-square matrix");
    Matrix<T> result = Matrix<T>::identity(a.rows(), a.zero());
    Matrix<T> base = a;
    while (k > 0) {
        if (k & 1U) result = result * base;
        k >>= 1U;
        if (k > 0) base = base * base;
    }
    return result;
}

template <class T>
Matrix<T> direct_sum(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> out(a.rows() + b.rows(), a.cols() + b.cols(), a.zero());
    out.set_block(0, 0, a);
    out.set_block(a.rows(), a.cols(), b);
    return out;
}

/// A ⊕ I_k.
template <class T>
Matrix<T> pad_identity(const Matrix<T>& a, std::size_t k) {
    return k == 0 ? a : direct_sum(a, Matrix<T>::identity(k, a.zero()));
}

/// Assemble a block matrix; each block row shares a height and each block column a width.
template <class T>
Matrix<T> block_matrix(const std::vector<std::vector<Matrix<T>>>& blocks) {
    if (blocks.empty() || blocks.front().empty()) throw InvalidArgument("empty block matrix");
    std::size_t rows = 0, cols = 0;
    for (const auto& b : blocks.front()) cols += b.cols();
    for (const auto& row : blocks) {
        if (row.size() != blocks.front().size()) throw InvalidArgument("ragged block matrix");
        rows += row.front().rows();
    }
    Matrix<T> out(rows, cols, blocks.front().front().zero());
    std::size_t r0 = 0;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        std::size_t c0 = 0;
        for (std::size_t bj = 0; bj < blocks[bi].size(); ++bj) {
            const auto& b = blocks[bi][bj];
            if (b.rows() != blocks[bi].front().rows() || b.cols() != blocks.front()[bj].cols())
                throw InvalidArgument("block sizes do not line up");
            out.set_block(r0, c0, b);
            c0 += b.cols();
        }
        r0 += blocks[bi].front().rows();
    }
    return out;
}

template <class T>
T trace(const Matrix<T>& m) {
    if (!m.is_square()) throw InvalidArgument("trace of a non-square matrix");
    T s = m.zero();
    for (std::size_t i = 0; i < m.rows(); ++i) s = s + m(i, i);
    return s;
}

/// Matrix of polynomials of degree zero.
template <class T>
Matrix<Poly<T>> constant_poly_matrix(const Matrix<T>& a) {
    return a.map([](const T& x) { return Poly<T>::constant(x); });
}

/// t^k * A for a constant matrix A.
template <class T>
Matrix<Poly<T>> t_times(const Matrix<T>& a, int k = 1) {
    return a.map([k](const T& x) { return Poly<T>::monomial(x, k); });
}

template <class T>
int degree(const Matrix<Poly<T>>& a) {
    int d = -1;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, a(i, j).degree());
    return d;
}

/// Coefficient matrix of t^k.
template <class T>
Matrix<T> coefficient_matrix(const Matrix<Poly<T>>& a, int k) {
    return a.map([k](const Poly<T>& p) { return p.coeff(k); });
}

template <class T>
bool is_nonnegative(const Matrix<T>& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!is_nonnegative(a(i, j))) return false;
    return true;
}

// ---- augmentation ----

inline Integer bar(const GRElem& x) { return augment(x); }
inline IntPoly bar(const GRPoly& p) { return p.map_coeffs([](const GRElem& x) { return augment(x); }); }
inline IntMatrix bar_matrix(const MatGR& a) { return a.map([](const GRElem& x) { return augment(x); }); }
inline IntPolyMatrix bar_matrix(const MatGRPoly& a) { return a.map([](const GRPoly& p) { return bar(p); }); }

// ---- evaluation ----

template <class T>
Matrix<T> eval_at_zero(const Matrix<Poly<T>>& a) {
    return a.map([](const Poly<T>& p) { return p.constant_term(); });
}
template <class T>
Matrix<T> eval_at_one(const Matrix<Poly<T>>& a) {
    return a.map([](const Poly<T>& p) { return p.at_one(); });
}

// ---- regular representation ----

/// Left regular representation of x: column j holds the coefficients of x*g_j.
inline IntMatrix regular_rep(const GRElem& x) {
    const auto& g = *x.group();
    const std::size_t m = g.order();
    IntMatrix out(m, m, Integer(0));
    for (std::size_t a = 0; a < m; ++a) {
        if (sgn(x[a]) == 0) continue;
        for (std::size_t j = 0; j < m; ++j) out(g.mul(a, j), j) += x[a];
    }
    return out;
}

/// Block matrix whose (i,j) block is the regular representation of A(i,j).
inline IntMatrix tilde_lift(const MatGR& a) {
    const std::size_t m = a.zero().group()->order();
    IntMatrix out(a.rows() * m, a.cols() * m, Integer(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) out.set_block(i * m, j * m, regular_rep(a(i, j)));
    return out;
}

// ---- transpose and opposite ----

inline GRPoly opposite(const GRPoly& p) { return p.map_coeffs([](const GRElem& x) { return opposite(x); }); }

inline MatGR opposite_entries(const MatGR& a) { return a.map([](const GRElem& x) { return opposite(x); }); }
inline MatGRPoly opposite_entries(const MatGRPoly& a) { return a.map([](const GRPoly& x) { return opposite(x); }); }

/// (A')^o: transpose, then opposite in every entry.
inline MatGR transpose_opposite(const MatGR& a) { return opposite_entries(a.transpose()); }
inline MatGRPoly transpose_opposite(const MatGRPoly& a) { return opposite_entries(a.transpose()); }

// ---- text ----

inline std::string term_text(const Integer& c, const std::string& word, bool first) {
    std::string s;
    Integer mag = abs_value(c);
    if (sgn(c) < 0) s = first ? "-" : " - ";
    else if (!first) s = " + ";
    if (word.empty()) return s + mag.get_str();
    if (mag != 1) s += mag.get_str() + "*";
    return s + word;
}

/// Element names that contain spaces (cycle notation) are compacted for the parser.
inline std::string element_word(const FiniteGroup& g, std::size_t x) {
    std::string n = g.name(x);
    if (g.permutation_degree() > 0 && x != 0) n.erase(std::remove(n.begin(), n.end(), ' '), n.end());
    return n;
}

inline std::string to_string(const GRElem& x, const std::string& suffix = "", bool* first_flag = nullptr) {
    bool local = true;
    bool& first = first_flag ? *first_flag : local;
    std::string s;
    const auto& g = *x.group();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (sgn(x[i]) == 0) continue;
        std::string word = i == 0 ? std::string() : element_word(g, i);
        if (!suffix.empty()) word = word.empty() ? suffix : word + "*" + suffix;
        s += term_text(x[i], word, first);
        first = false;
    }
    if (first_flag == nullptr && s.empty()) return "0";
    return s;
}

inline std::string to_string(const IntPoly& p) {
    std::string s;
    bool first = true;
    for (const auto& [k, c] : p.terms()) {
        std::string word = k == 0 ? "" : (k == 1 ? "t" : "t^" + std::to_string(k));
        s += term_text(c, word, first);
        first = false;
    }
    return s.empty() ? "0" : s;
}

inline std::string to_string(const GRPoly& p) {
    std::string s;
    bool first = true;
    for (const auto& [k, c] : p.terms()) {
        std::string var = k == 0 ? "" : (k == 1 ? "t" : "t^" + std::to_string(k));
        s += to_string(c, var, &first);
    }
    return s.empty() ? "0" : s;
}

template <class T>
std::string to_string(const Matrix<T>& a) {
    std::string s = "[";
    for (std::size_t i = 0; i < a.rows(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j) s += ", ";
            s += to_string(a(i, j));
        }
        s += "]";
    }
    return s + "]";
}

}  // namespace gext
