#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "bps/errors.hpp"

namespace bps {

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/** Renders "p" for integers and "p/q" otherwise; q is always positive. */
inline std::string to_string(const Rational& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/** Parses "p" or "p/q" with optional leading sign; rejects everything else. */
inline Rational parse_rational(const std::string& text) {
    auto fail = [&]() -> Rational {
        throw validation_error("not a rational literal: '" + text + "'");
    };
    if (text.empty()) return fail();
    std::size_t slash = text.find('/');
    auto is_int_literal = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    try {
        if (slash == std::string::npos) {
            if (!is_int_literal(text)) return fail();
            return Rational(Integer(text));
        }
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (!is_int_literal(num) || !is_int_literal(den)) return fail();
        Integer d(den);
        if (d == 0) return fail();
        return Rational(Integer(num), d);
    } catch (const std::exception&) {
        return fail();
    }
}

/** Exact binomial coefficient; zero for k < 0 or k > n when n >= 0. */
inline Integer binomial(std::int64_t n, std::int64_t k) {
    if (k < 0) return 0;
    if (n >= 0 && k > n) return 0;
    Integer acc = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        acc *= Integer(n - i + 1);
        acc /= i;
    }
    return acc;
}

/** Moebius function by trial division; n must be positive. */
inline int mobius(std::int64_t n) {
    if (n <= 0) throw validation_error("mobius: argument must be positive");
    int primes = 0;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        ++primes;
    }
    if (n > 1) ++primes;
    return (primes % 2 == 0) ? 1 : -1;
}

} // namespace bps
