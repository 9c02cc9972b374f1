#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "finsler/core/error.hpp"

namespace finsler {

// Exact arbitrary-precision rational. All exact-backend arithmetic runs on
// these; no floating point enters the ratfun module.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "p", "-p" or "p/q".
inline Rational rat_parse(const std::string& s) {
    if (s.empty()) throw ConfigError("empty rational literal");
    try {
        Rational q(s);
        q.canonicalize();
        if (q.get_den() == 0) throw ConfigError("zero denominator in '" + s + "'");
        return q;
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad rational literal '" + s + "'");
    }
}

inline bool rat_is_zero(const Rational& q) { return sgn(q) == 0; }

inline double rat_to_double(const Rational& q) { return q.get_d(); }

inline std::string rat_to_string(const Rational& q) { return q.get_str(); }

inline BigInt int_gcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInt int_lcm(const BigInt& a, const BigInt& b) {
    BigInt l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Rational rat_pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (rat_is_zero(base)) {
        if (e < 0) throw DivisionByZero("0 raised to a negative power");
        return Rational(0);
    }
    Rational acc(1), b = base;
    unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
    while (n) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    if (e < 0) acc = Rational(1) / acc;
    return acc;
}

// gcd over Q: the largest positive rational dividing both with integer
// quotients; gcd(a/b, c/d) = gcd(a*d, c*b)/(b*d).
inline Rational rat_gcd(const Rational& a, const Rational& b) {
    if (rat_is_zero(a)) return abs(b);
    if (rat_is_zero(b)) return abs(a);
    BigInt num = int_gcd(a.get_num() * b.get_den(), b.get_num() * a.get_den());
    Rational g(num, a.get_den() * b.get_den());
    g.canonicalize();
    return abs(g);
}

// Exact square root test for a rational; returns true and the root when the
// value is a perfect square of a rational.
inline bool rat_sqrt_exact(const Rational& q, Rational& root) {
    if (sgn(q) < 0) return false;
    if (sgn(q) == 0) {
        root = Rational(0);
        return true;
    }
    BigInt num = q.get_num(), den = q.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return false;
    if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return false;
    BigInt rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    root = Rational(rn, rd);
    root.canonicalize();
    return true;
}

} // namespace finsler
