#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace stlab {

// Exact arbitrary-precision arithmetic. cpp_rational keeps gcd(|num|, den) = 1
// and den > 0 as class invariants, which is exactly the Rational contract.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Rational make_rational(const BigInt& p, const BigInt& q) {
    if (q == 0) throw std::invalid_argument("rational: zero denominator");
    return Rational(p, q);
}

// Accepts "p", "-p", "p/q" with optional sign on either part.
inline Rational parse_rational(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("rational: empty string");
    const auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) return Rational(BigInt(std::string(s)));
        BigInt p{std::string(s.substr(0, slash))};
        BigInt q{std::string(s.substr(slash + 1))};
        return make_rational(p, q);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("rational: cannot parse '" + std::string(s) + "'");
    }
}

// "p" when integral, "p/q" otherwise; decimal digits only.
inline std::string rational_to_string(const Rational& r) {
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

// Integer cube root: largest t >= 0 with t^3 <= x.
inline BigInt icbrt(const BigInt& x) {
    if (x < 0) throw std::invalid_argument("icbrt: negative");
    if (x == 0) return 0;
    BigInt lo = 0, hi = 1;
    while (hi * hi * hi <= x) hi <<= 1;
    while (lo + 1 < hi) {
        BigInt mid = (lo + hi) >> 1;
        if (mid * mid * mid <= x) lo = mid;
        else hi = mid;
    }
    return lo;
}

// Smallest integer r >= 0 with coeff * r^3 >= target (coeff > 0). This is how
// cube-root thresholds like delta*m^{2/3}/(4 n^{1/3}) are compared without
// leaving integer arithmetic: r < threshold  <=>  64 r^3 n q^3 < p^3 m^2.
inline BigInt cube_cutoff(const BigInt& coeff, const BigInt& target) {
    if (coeff <= 0) throw std::invalid_argument("cube_cutoff: coeff must be positive");
    if (target <= 0) return 0;
    BigInt r = icbrt(target / coeff);
    while (coeff * r * r * r < target) ++r;
    while (r > 0 && coeff * (r - 1) * (r - 1) * (r - 1) >= target) --r;
    return r;
}

inline Rational rational_pow(const Rational& base, unsigned e) {
    Rational out = 1;
    for (unsigned i = 0; i < e; ++i) out *= base;
    return out;
}

}  // namespace stlab
