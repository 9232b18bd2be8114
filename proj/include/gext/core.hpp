#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace gext {

/// Arbitrary-precision integer used for every exact coefficient.
using Integer = mpz_class;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Structural problems with inputs: mismatched groups, bad dimensions, bad tables.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Raised when a precondition that is mathematical rather than structural fails
/// (non-nilpotent input, negative coefficient where a positive cone is required, ...).
class PreconditionFailed : public Error {
public:
    using Error::Error;
};

inline bool is_zero(const Integer& x) { return sgn(x) == 0; }
inline Integer zero_like(const Integer&) { return Integer(0); }
inline Integer one_like(const Integer&) { return Integer(1); }
inline bool is_nonnegative(const Integer& x) { return sgn(x) >= 0; }

inline std::string to_string(const Integer& x) { return x.get_str(); }

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer abs_value(const Integer& a) {
    Integer r;
    mpz_abs(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

/// Quotient rounded toward zero; the remainder then has the sign of the dividend.
inline Integer trunc_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline bool divides(const Integer& d, const Integer& a) {
    if (is_zero(d)) return is_zero(a);
    return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

/// Compare absolute values; negative, zero or positive like strcmp.
inline int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

inline std::size_t gcd_size(std::size_t a, std::size_t b) {
    while (b != 0) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

}  // namespace gext
