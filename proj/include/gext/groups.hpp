#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "core.hpp"

namespace gext {

/// Description of a finite group to build; see make_group().
struct GroupSpec {
    enum class Kind { cyclic, product, dihedral, symmetric, explicit_table };

    Kind kind = Kind::cyclic;
    std::size_t n = 1;
    std::vector<GroupSpec> factors;
    std::vector<std::vector<std::size_t>> table;
    std::vector<std::string> names;
    std::string generator = "g";

    static GroupSpec cyclic(std::size_t order, std::string gen = "g") {
        GroupSpec s;
        s.kind = Kind::cyclic;
        s.n = order;
        s.generator = std::move(gen);
        return s;
    }
    static GroupSpec product(std::vector<GroupSpec> parts) {
        GroupSpec s;
        s.kind = Kind::product;
        s.factors = std::move(parts);
        return s;
    }
    static GroupSpec dihedral(std::size_t sides) {
        GroupSpec s;
        s.kind = Kind::dihedral;
        s.n = sides;
        return s;
    }
    static GroupSpec symmetric(std::size_t degree) {
        GroupSpec s;
        s.kind = Kind::symmetric;
        s.n = degree;
        return s;
    }
    static GroupSpec explicit_table(std::vector<std::vector<std::size_t>> t,
                                    std::vector<std::string> element_names = {}) {
        GroupSpec s;
        s.kind = Kind::explicit_table;
        s.table = std::move(t);
        s.names = std::move(element_names);
        return s;
    }
};

class FiniteGroup;
namespace detail {
inline std::shared_ptr<const FiniteGroup> build_group(const GroupSpec& spec);
}

/// A finite group with dense element indices; index 0 is always the identity.
/// Immutable once built. Symmetric groups compose permutations as (gh)(x) = g(h(x)).
class FiniteGroup {
public:
    std::size_t order() const { return order_; }
    std::size_t identity() const { return 0; }

    std::size_t mul(std::size_t x, std::size_t y) const { return mul_[x * order_ + y]; }
    std::size_t inv(std::size_t x) const { return inv_[x]; }
    std::size_t conj(std::size_t h, std::size_t x) const { return mul(mul(h, x), inv(h)); }

    const std::vector<std::vector<std::size_t>>& classes() const { return classes_; }
    std::size_t class_of(std::size_t x) const { return class_of_[x]; }
    std::size_t class_count() const { return classes_.size(); }

    const std::string& name(std::size_t x) const { return names_[x]; }
    const std::vector<std::string>& names() const { return names_; }

    bool is_abelian() const { return abelian_; }

    /// Generator (or element) names accepted by the text parser.
    const std::map<std::string, std::size_t>& generators() const { return generators_; }

    std::optional<std::size_t> find_name(const std::string& s) const {
        if (s == "e") return 0;
        if (auto it = generators_.find(s); it != generators_.end()) return it->second;
        if (auto it = by_name_.find(s); it != by_name_.end()) return it->second;
        return std::nullopt;
    }

    /// Permutation degree when the group is a symmetric group, else 0.
    std::size_t permutation_degree() const { return perm_degree_; }

    /// Index of the permutation with the given 0-based images (symmetric groups only).
    std::optional<std::size_t> find_permutation(const std::vector<std::size_t>& images) const {
        if (auto it = perm_index_.find(images); it != perm_index_.end()) return it->second;
        return std::nullopt;
    }

    std::size_t element_order(std::size_t x) const {
        std::size_t k = 1;
        for (std::size_t y = x; y != 0; y = mul(y, x)) ++k;
        return k;
    }

    const GroupSpec& spec() const { return spec_; }

private:
    friend std::shared_ptr<const FiniteGroup> detail::build_group(const GroupSpec& spec);
    friend std::shared_ptr<const FiniteGroup> group_from_table(std::vector<std::size_t>, std::vector<std::string>,
                                                              std::map<std::string, std::size_t>, GroupSpec);

    std::size_t order_ = 0;
    std::vector<std::size_t> mul_;
    std::vector<std::size_t> inv_;
    std::vector<std::vector<std::size_t>> classes_;
    std::vector<std::size_t> class_of_;
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> by_name_;
    std::map<std::string, std::size_t> generators_;
    std::map<std::vector<std::size_t>, std::size_t> perm_index_;
    std::size_t perm_degree_ = 0;
    bool abelian_ = true;
    GroupSpec spec_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Partition of the group into conjugation orbits, ordered by (size, smallest member).
inline std::vector<std::vector<std::size_t>> conjugacy_classes(const FiniteGroup& g) {
    const std::size_t m = g.order();
    std::vector<bool> seen(m, false);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t x = 0; x < m; ++x) {
        if (seen[x]) continue;
        std::vector<std::size_t> orbit;
        for (std::size_t h = 0; h < m; ++h) {
            std::size_t y = g.conj(h, x);
            if (!seen[y]) {
                seen[y] = true;
                orbit.push_back(y);
            }
        }
        std::sort(orbit.begin(), orbit.end());
        out.push_back(std::move(orbit));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.front() < b.front();
    });
    return out;
}

namespace detail {

inline void validate_table(const std::vector<std::size_t>& mul, std::size_t m) {
    auto at = [&](std::size_t x, std::size_t y) { return mul[x * m + y]; };
    for (std::size_t v : mul)
        if (v >= m) throw InvalidArgument("group table: entry " + std::to_string(v) + " out of range");
    for (std::size_t x = 0; x < m; ++x) {
        if (at(0, x) != x || at(x, 0) != x)
            throw InvalidArgument("group table: identity axiom fails, index 0 is not a two-sided identity at x=" +
                                  std::to_string(x));
    }
    for (std::size_t x = 0; x < m; ++x) {
        bool found = false;
        for (std::size_t y = 0; y < m && !found; ++y) found = at(x, y) == 0 && at(y, x) == 0;
        if (!found) throw InvalidArgument("group table: inverse axiom fails, no inverse for x=" + std::to_string(x));
    }
    auto check = [&](std::size_t x, std::size_t y, std::size_t z) {
        if (at(at(x, y), z) != at(x, at(y, z)))
            throw InvalidArgument("group table: associativity fails at triple (" + std::to_string(x) + "," +
                                  std::to_string(y) + "," + std::to_string(z) + ")");
    };
    if (m <= 64) {
        for (std::size_t x = 0; x < m; ++x)
            for (std::size_t y = 0; y < m; ++y)
                for (std::size_t z = 0; z < m; ++z) check(x, y, z);
    } else {
        std::mt19937_64 rng(0x5eedULL);
        std::uniform_int_distribution<std::size_t> pick(0, m - 1);
        for (int s = 0; s < 200000; ++s) check(pick(rng), pick(rng), pick(rng));
    }
}

inline std::string power_name(const std::string& gen, std::size_t k) {
    if (k == 0) return "e";
    if (k == 1) return gen;
    return gen + "^" + std::to_string(k);
}

inline std::string cycle_name(const std::vector<std::size_t>& images) {
    const std::size_t n = images.size();
    std::vector<bool> seen(n, false);
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i] || images[i] == i) continue;
        out += "(";
        std::size_t j = i;
        bool first = true;
        while (!seen[j]) {
            seen[j] = true;
            if (!first) out += " ";
            out += std::to_string(j + 1);
            first = false;
            j = images[j];
        }
        out += ")";
    }
    return out.empty() ? "e" : out;
}

// Renames generator identifiers in a word by appending a suffix ("g^2*h" -> "g1^2*h1").
inline std::string suffix_identifiers(const std::string& word, const std::string& suffix) {
    if (word == "e") return word;
    std::string out;
    std::size_t i = 0;
    while (i < word.size()) {
        if (std::isalpha(static_cast<unsigned char>(word[i])) || word[i] == '_') {
            std::size_t j = i;
            while (j < word.size() && (std::isalnum(static_cast<unsigned char>(word[j])) || word[j] == '_')) ++j;
            out += word.substr(i, j - i) + suffix;
            i = j;
        } else {
            out += word[i++];
        }
    }
    return out;
}

}  // namespace detail

inline GroupPtr group_from_table(std::vector<std::size_t> mul, std::vector<std::string> names,
                                 std::map<std::string, std::size_t> gens, GroupSpec spec) {
    const std::size_t m = names.size();
    detail::validate_table(mul, m);
    auto g = std::make_shared<FiniteGroup>();
    g->order_ = m;
    g->mul_ = std::move(mul);
    g->inv_.assign(m, 0);
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y)
            if (g->mul(x, y) == 0) g->inv_[x] = y;
    g->names_ = std::move(names);
    for (std::size_t x = 0; x < m; ++x) g->by_name_.emplace(g->names_[x], x);
    g->generators_ = std::move(gens);
    for (std::size_t x = 0; x < m && g->abelian_; ++x)
        for (std::size_t y = 0; y < m; ++y)
            if (g->mul(x, y) != g->mul(y, x)) {
                g->abelian_ = false;
                break;
            }
    g->classes_ = conjugacy_classes(*g);
    g->class_of_.assign(m, 0);
    for (std::size_t c = 0; c < g->classes_.size(); ++c)
        for (std::size_t x : g->classes_[c]) g->class_of_[x] = c;
    g->spec_ = std::move(spec);
    return g;
}

namespace detail {

inline std::string spec_key(const GroupSpec& s) {
    std::string k = std::to_string(static_cast<int>(s.kind)) + ":" + std::to_string(s.n) + ":" + s.generator + "(";
    for (const auto& f : s.factors) k += spec_key(f) + ",";
    k += ")[";
    for (const auto& row : s.table) {
        for (auto x : row) k += std::to_string(x) + " ";
        k += ";";
    }
    k += "]";
    for (const auto& n : s.names) k += n + " ";
    return k;
}

}  // namespace detail

/// Builds a group from its description. Throws InvalidArgument for bad parameters
/// or explicit tables that violate a group axiom (the message names the witness).
/// Equal descriptions give the same shared group, so their ring elements combine.
inline GroupPtr make_group(const GroupSpec& spec) {
    static std::mutex mu;
    static std::map<std::string, GroupPtr> cache;
    const std::string key = detail::spec_key(spec);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    GroupPtr g = detail::build_group(spec);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, g).first->second;
}

inline GroupPtr detail::build_group(const GroupSpec& spec) {
    using Kind = GroupSpec::Kind;
    switch (spec.kind) {
        case Kind::cyclic: {
            if (spec.n < 1) throw InvalidArgument("cyclic group needs n >= 1");
            const std::size_t m = spec.n;
            std::vector<std::size_t> mul(m * m);
            std::vector<std::string> names(m);
            for (std::size_t x = 0; x < m; ++x) {
                names[x] = detail::power_name(spec.generator, x);
                for (std::size_t y = 0; y < m; ++y) mul[x * m + y] = (x + y) % m;
            }
            std::map<std::string, std::size_t> gens;
            if (m > 1) gens[spec.generator] = 1;
            return group_from_table(std::move(mul), std::move(names), std::move(gens), spec);
        }
        case Kind::dihedral: {
            if (spec.n < 1) throw InvalidArgument("dihedral group needs n >= 1");
            const std::size_t n = spec.n, m = 2 * n;
            // index i + n*j stands for r^i s^j, with s r s = r^{-1}
            std::vector<std::size_t> mul(m * m);
            std::vector<std::string> names(m);
            for (std::size_t x = 0; x < m; ++x) {
                std::size_t a = x % n, b = x / n;
                std::string rot = detail::power_name("r", a);
                names[x] = b == 0 ? rot : (a == 0 ? std::string("s") : rot + "*s");
                for (std::size_t y = 0; y < m; ++y) {
                    std::size_t c = y % n, d = y / n;
                    std::size_t rot_part = b == 0 ? (a + c) % n : (a + n - c) % n;
                    mul[x * m + y] = rot_part + n * ((b + d) % 2);
                }
            }
            std::map<std::string, std::size_t> gens{{"s", n}};
            if (n > 1) gens["r"] = 1;
            return group_from_table(std::move(mul), std::move(names), std::move(gens), spec);
        }
        case Kind::symmetric: {
            if (spec.n < 1 || spec.n > 7) throw InvalidArgument("symmetric group degree must be in 1..7");
            const std::size_t n = spec.n;
            std::vector<std::vector<std::size_t>> perms;
            std::vector<std::size_t> p(n);
            std::iota(p.begin(), p.end(), 0);
            do perms.push_back(p);
            while (std::next_permutation(p.begin(), p.end()));
            const std::size_t m = perms.size();
            std::map<std::vector<std::size_t>, std::size_t> index;
            for (std::size_t i = 0; i < m; ++i) index[perms[i]] = i;
            std::vector<std::size_t> mul(m * m);
            for (std::size_t x = 0; x < m; ++x)
                for (std::size_t y = 0; y < m; ++y) {
                    std::vector<std::size_t> c(n);
                    for (std::size_t k = 0; k < n; ++k) c[k] = perms[x][perms[y][k]];
                    mul[x * m + y] = index.at(c);
                }
            std::vector<std::string> names(m);
            for (std::size_t x = 0; x < m; ++x) names[x] = detail::cycle_name(perms[x]);
            std::map<std::string, std::size_t> gens;
            if (n >= 2) {
                std::vector<std::size_t> sw(n), cyc(n);
                std::iota(sw.begin(), sw.end(), 0);
                std::swap(sw[0], sw[1]);
                for (std::size_t k = 0; k < n; ++k) cyc[k] = (k + 1) % n;
                gens["s"] = index.at(sw);
                gens["c"] = index.at(cyc);
            }
            auto g = group_from_table(std::move(mul), std::move(names), std::move(gens), spec);
            auto mg = std::const_pointer_cast<FiniteGroup>(g);
            mg->perm_index_ = std::move(index);
            mg->perm_degree_ = n;
            return g;
        }
        case Kind::product: {
            if (spec.factors.empty()) throw InvalidArgument("product group needs at least one factor");
            std::vector<GroupPtr> parts;
            for (const auto& f : spec.factors) {
                if (f.kind == Kind::symmetric)
                    throw InvalidArgument("symmetric factors inside a product are not supported");
                parts.push_back(make_group(f));
            }
            std::size_t m = 1;
            for (const auto& p : parts) m *= p->order();
            auto split = [&](std::size_t x) {
                std::vector<std::size_t> c(parts.size());
                for (std::size_t f = 0; f < parts.size(); ++f) {
                    c[f] = x % parts[f]->order();
                    x /= parts[f]->order();
                }
                return c;
            };
            auto join = [&](const std::vector<std::size_t>& c) {
                std::size_t x = 0;
                for (std::size_t f = parts.size(); f-- > 0;) x = x * parts[f]->order() + c[f];
                return x;
            };
            std::vector<std::size_t> mul(m * m);
            std::vector<std::string> names(m);
            for (std::size_t x = 0; x < m; ++x) {
                auto cx = split(x);
                std::string nm;
                for (std::size_t f = 0; f < parts.size(); ++f) {
                    if (cx[f] == 0) continue;
                    if (!nm.empty()) nm += "*";
                    nm += detail::suffix_identifiers(parts[f]->name(cx[f]), std::to_string(f + 1));
                }
                names[x] = nm.empty() ? "e" : nm;
                for (std::size_t y = 0; y < m; ++y) {
                    auto cy = split(y);
                    std::vector<std::size_t> cz(parts.size());
                    for (std::size_t f = 0; f < parts.size(); ++f) cz[f] = parts[f]->mul(cx[f], cy[f]);
                    mul[x * m + y] = join(cz);
                }
            }
            std::map<std::string, std::size_t> gens;
            for (std::size_t f = 0; f < parts.size(); ++f)
                for (const auto& [gname, gidx] : parts[f]->generators()) {
                    std::vector<std::size_t> c(parts.size(), 0);
                    c[f] = gidx;
                    gens[gname + std::to_string(f + 1)] = join(c);
                }
            return group_from_table(std::move(mul), std::move(names), std::move(gens), spec);
        }
        case Kind::explicit_table: {
            const std::size_t m = spec.table.size();
            if (m == 0) throw InvalidArgument("explicit group table is empty");
            std::vector<std::size_t> mul;
            mul.reserve(m * m);
            for (const auto& row : spec.table) {
                if (row.size() != m) throw InvalidArgument("explicit group table is not square");
                mul.insert(mul.end(), row.begin(), row.end());
            }
            std::vector<std::string> names = spec.names;
            if (names.empty()) {
                names.push_back("e");
                for (std::size_t x = 1; x < m; ++x) names.push_back("x" + std::to_string(x));
            }
            if (names.size() != m) throw InvalidArgument("explicit group: name count differs from order");
            std::map<std::string, std::size_t> gens;
            for (std::size_t x = 1; x < m; ++x) gens[names[x]] = x;
            return group_from_table(std::move(mul), std::move(names), std::move(gens), spec);
        }
    }
    throw InvalidArgument("unknown group kind");
}

inline GroupPtr trivial_group() {
    static const GroupPtr g = make_group(GroupSpec::cyclic(1));
    return g;
}

}  // namespace gext
