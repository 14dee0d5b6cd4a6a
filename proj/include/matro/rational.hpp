#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "matro/errors.hpp"

namespace matro {

// Exact arithmetic everywhere; no floating point is used in any comparison.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline int sign_of(const Rational& r) {
    return r.sign();
}

inline int sign_of(const BigInt& v) {
    return v.sign();
}

inline BigInt bigint_pow(BigInt base, unsigned exp) {
    BigInt result = 1;
    while (exp) {
        if (exp & 1u) result *= base;
        base *= base;
        exp >>= 1u;
    }
    return result;
}

inline Rational rational_pow(const Rational& base, unsigned exp) {
    return Rational(bigint_pow(numerator(base), exp), bigint_pow(denominator(base), exp));
}

// Accepts "p", "-p", or "p/q"; decimal points are rejected so no value is
// silently rounded.
inline Rational parse_rational(const std::string& token) {
    if (token.empty()) throw ParseError(0, "empty rational token");
    if (token.find('.') != std::string::npos)
        throw ParseError(0, "decimal input not accepted, use p/q: '" + token + "'");
    auto slash = token.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(token));
        BigInt num(token.substr(0, slash));
        BigInt den(token.substr(slash + 1));
        if (den == 0) throw ParseError(0, "zero denominator: '" + token + "'");
        return Rational(num, den);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(0, "bad rational token: '" + token + "'");
    }
}

// Always prints the p/q form, including "2/1".
inline std::string format_rational(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

} // namespace matro
