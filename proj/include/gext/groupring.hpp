#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "core.hpp"
#include "groups.hpp"

namespace gext {

/// Element of the integral group ring ZG, stored densely by element index.
class GroupRingElement {
public:
    GroupRingElement() = default;
    explicit GroupRingElement(GroupPtr g) : group_(std::move(g)), coeffs_(group_->order()) {}
    GroupRingElement(GroupPtr g, std::vector<Integer> coeffs) : group_(std::move(g)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != group_->order()) throw InvalidArgument("group ring element: coefficient count != |G|");
    }

    /// c * g for a single group element.
    static GroupRingElement term(GroupPtr g, std::size_t element, Integer c = 1) {
        GroupRingElement x(std::move(g));
        x.coeffs_.at(element) = std::move(c);
        return x;
    }
    static GroupRingElement scalar(GroupPtr g, Integer c) { return term(std::move(g), 0, std::move(c)); }
    /// u = sum of all group elements.
    static GroupRingElement sum_of_group(GroupPtr g) {
        GroupRingElement x(std::move(g));
        for (auto& c : x.coeffs_) c = 1;
        return x;
    }

    const GroupPtr& group() const { return group_; }
    std::size_t size() const { return coeffs_.size(); }
    const Integer& operator[](std::size_t i) const { return coeffs_[i]; }
    Integer& operator[](std::size_t i) { return coeffs_[i]; }
    const std::vector<Integer>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (sgn(c) != 0) return false;
        return true;
    }
    bool is_nonnegative() const {
        for (const auto& c : coeffs_)
            if (sgn(c) < 0) return false;
        return true;
    }
    /// x >> 0: every coefficient strictly positive.
    bool is_strictly_positive() const {
        for (const auto& c : coeffs_)
            if (sgn(c) <= 0) return false;
        return true;
    }
    /// True when x = c*u for an integer c.
    bool is_multiple_of_u() const {
        for (const auto& c : coeffs_)
            if (c != coeffs_.front()) return false;
        return true;
    }

    GroupRingElement& operator+=(const GroupRingElement& o) {
        check_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    GroupRingElement& operator-=(const GroupRingElement& o) {
        check_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    GroupRingElement& operator*=(const Integer& c) {
        for (auto& x : coeffs_) x *= c;
        return *this;
    }

    friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
    friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
    friend GroupRingElement operator-(GroupRingElement a) {
        for (auto& c : a.coeffs_) c = -c;
        return a;
    }
    friend GroupRingElement operator*(const Integer& c, GroupRingElement a) { return a *= c; }

    /// Convolution product: coefficient at h is the sum of x_a y_b over ab = h.
    friend GroupRingElement operator*(const GroupRingElement& x, const GroupRingElement& y) {
        x.check_same(y);
        const FiniteGroup& g = *x.group_;
        const std::size_t m = g.order();
        GroupRingElement out(x.group_);
        for (std::size_t a = 0; a < m; ++a) {
            if (sgn(x.coeffs_[a]) == 0) continue;
            for (std::size_t b = 0; b < m; ++b) {
                if (sgn(y.coeffs_[b]) == 0) continue;
                mpz_addmul(out.coeffs_[g.mul(a, b)].get_mpz_t(), x.coeffs_[a].get_mpz_t(), y.coeffs_[b].get_mpz_t());
            }
        }
        return out;
    }

    friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
        return a.group_ == b.group_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const GroupRingElement& a, const GroupRingElement& b) { return !(a == b); }

    void check_same(const GroupRingElement& o) const {
        if (group_ != o.group_) throw InvalidArgument("group ring: operands live over different groups");
    }

private:
    GroupPtr group_;
    std::vector<Integer> coeffs_;
};

using GRElem = GroupRingElement;

inline bool is_zero(const GRElem& x) { return x.is_zero(); }
inline GRElem zero_like(const GRElem& x) { return GRElem(x.group()); }
inline GRElem one_like(const GRElem& x) { return GRElem::scalar(x.group(), 1); }
inline bool is_nonnegative(const GRElem& x) { return x.is_nonnegative(); }

/// Augmentation ZG -> Z.
inline Integer augment(const GRElem& x) {
    Integer s = 0;
    for (const auto& c : x.coeffs()) s += c;
    return s;
}

/// Sum_g n_g g^{-1}; an anti-automorphism of ZG.
inline GRElem opposite(const GRElem& x) {
    GRElem out(x.group());
    for (std::size_t i = 0; i < x.size(); ++i) out[x.group()->inv(i)] = x[i];
    return out;
}

/// Element of the free abelian group on conjugacy classes.
class ConjElem {
public:
    ConjElem() = default;
    explicit ConjElem(GroupPtr g) : group_(std::move(g)), coeffs_(group_->class_count()) {}

    const GroupPtr& group() const { return group_; }
    const std::vector<Integer>& coeffs() const { return coeffs_; }
    Integer& operator[](std::size_t c) { return coeffs_[c]; }
    const Integer& operator[](std::size_t c) const { return coeffs_[c]; }
    std::size_t size() const { return coeffs_.size(); }

    friend bool operator==(const ConjElem& a, const ConjElem& b) {
        return a.group_ == b.group_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const ConjElem& a, const ConjElem& b) { return !(a == b); }
    friend ConjElem operator+(ConjElem a, const ConjElem& b) {
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] += b.coeffs_[i];
        return a;
    }

private:
    GroupPtr group_;
    std::vector<Integer> coeffs_;
};

/// kappa: sum n_g g -> sum n_g kappa(g).
inline ConjElem kappa_project(const GRElem& x) {
    ConjElem out(x.group());
    for (std::size_t i = 0; i < x.size(); ++i) out[x.group()->class_of(i)] += x[i];
    return out;
}

inline std::string to_string(const ConjElem& k) {
    std::string s;
    const auto& g = *k.group();
    for (std::size_t c = 0; c < k.size(); ++c) {
        if (sgn(k[c]) == 0) continue;
        if (!s.empty()) s += " + ";
        s += k[c].get_str() + "*[" + g.name(g.classes()[c].front()) + "]";
    }
    return s.empty() ? "0" : s;
}

}  // namespace gext
