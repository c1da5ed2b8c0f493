#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace signspan {

// Arbitrary-precision integers and rationals, GMP-backed.  mpq keeps values
// canonical (lowest terms, positive denominator), which is exactly the
// invariant the exact-arithmetic layer relies on.
using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline BigInt pow2(unsigned e) { return BigInt(1) << e; }

inline BigInt binomial(const BigInt& n, unsigned long k) {
    if (n < 0) throw std::invalid_argument("binomial: negative n");
    BigInt r;
    mpz_bin_ui(r.backend().data(), n.backend().data(), k);
    return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.backend().data(), n, k);
    return r;
}

inline BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.backend().data(), n);
    return r;
}

// n * (n-1) * ... * (n-k+1)
inline BigInt falling_factorial(const BigInt& n, unsigned long k) {
    BigInt r = 1;
    for (unsigned long i = 0; i < k; ++i) r *= n - BigInt(i);
    return r;
}

inline Rational pow_rational(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    Rational b = e > 0 ? base : Rational(1) / base;
    unsigned long k = e > 0 ? static_cast<unsigned long>(e)
                            : static_cast<unsigned long>(-e);
    Rational acc(1);
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

// GMP canonical form: "num/den", "/den" omitted when den == 1.
inline std::string to_fraction_string(const Rational& q) { return q.str(); }

inline Rational rational_from_string(const std::string& s) {
    try {
        Rational q(s);
        return q;
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
}

}  // namespace signspan
