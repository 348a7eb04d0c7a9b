// Exact scalar types: arbitrary-precision integers and reduced rationals,
// plus the "p/q" string form used by every JSON interface.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "torick/errors.hpp"

namespace torick {

using Int = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline Int num(const Rational& q) { return numerator(q); }
inline Int den(const Rational& q) { return denominator(q); }

inline int sign_of(const Rational& q) { return q.sign(); }

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

// Floor of a rational, as an integer.
inline Int rat_floor(const Rational& q) {
    Int n = num(q), d = den(q);
    Int quo = n / d, rem = n % d;
    if (rem != 0 && n < 0) --quo;
    return quo;
}

inline Int rat_ceil(const Rational& q) { return -rat_floor(-q); }

// Parses a reduced rational from "p" or "p/q". Rejects zero denominators.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw SchemaError("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int p(s.substr(0, slash));
        Int q(s.substr(slash + 1));
        if (q == 0) throw SchemaError("rational with zero denominator: " + s);
        return Rational(p, q);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception&) {
        throw SchemaError("malformed rational literal: " + s);
    }
}

// Emits "p" for integers and "p/q" otherwise; inverse of parse_rational.
inline std::string rational_to_string(const Rational& q) {
    std::string s = num(q).str();
    if (den(q) != 1) s += "/" + den(q).str();
    return s;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Factors n = s^q * r with s as large as possible (r is then free of
// q-th-power factors).  Trial division; inputs at desk scale.
inline std::pair<Int, Int> extract_qth_power(Int n, unsigned q) {
    if (n <= 0) throw PreconditionError("extract_qth_power: positive input required");
    if (q <= 1) return {n, Int(1)};
    Int s = 1, r = 1;
    auto take = [&](const Int& p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (unsigned i = 0; i < e / q; ++i) s *= p;
        for (unsigned i = 0; i < e % q; ++i) r *= p;
    };
    take(Int(2));
    for (Int p = 3; p * p <= n; p += 2) take(p);
    if (n > 1) r *= n;
    return {s, r};
}

// Largest k >= 1 with n == m^k for some integer m > 1; returns {m, k}.
// For n == 1 returns {1, 1}.  n must be positive.
inline std::pair<Int, unsigned> largest_perfect_power(const Int& n) {
    if (n <= 0) throw PreconditionError("largest_perfect_power: positive input required");
    if (n == 1) return {Int(1), 1};
    // k is bounded by log2(n).
    unsigned maxk = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
    for (unsigned k = maxk; k >= 2; --k) {
        // integer k-th root by bisection
        Int lo = 1, hi = n;
        while (lo < hi) {
            Int mid = (lo + hi + 1) / 2;
            Int p = 1;
            bool over = false;
            for (unsigned i = 0; i < k; ++i) {
                p *= mid;
                if (p > n) { over = true; break; }
            }
            if (over) hi = mid - 1; else lo = mid;
        }
        Int p = 1;
        for (unsigned i = 0; i < k; ++i) p *= lo;
        if (p == n && lo > 1) return {lo, k};
    }
    return {n, 1};
}

}  // namespace torick
