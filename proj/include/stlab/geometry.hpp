#pragma once

#include "stlab/errors.hpp"
#include "stlab/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <variant>

namespace stlab {

using PointId = std::size_t;
using LineId = std::size_t;

struct Point {
    Rational x;
    Rational y;

    friend bool operator==(const Point&, const Point&) = default;
    friend bool operator<(const Point& a, const Point& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    }
};

// ax + by = c with integer coefficients, (a,b) != (0,0), gcd(|a|,|b|,|c|) = 1,
// and the leading nonzero of (a,b) positive. Equal lines have equal fields.
struct Line {
    BigInt a;
    BigInt b;
    BigInt c;

    static Line make(BigInt a, BigInt b, BigInt c) {
        if (a == 0 && b == 0) throw std::invalid_argument("line: (a,b) must be nonzero");
        BigInt g = boost::multiprecision::gcd(boost::multiprecision::gcd(abs(a), abs(b)), abs(c));
        if (g > 1) { a /= g; b /= g; c /= g; }
        const bool flip = (a < 0) || (a == 0 && b < 0);
        if (flip) { a = -a; b = -b; c = -c; }
        return Line{std::move(a), std::move(b), std::move(c)};
    }

    bool vertical() const { return b == 0; }

    friend bool operator==(const Line&, const Line&) = default;
    friend bool operator<(const Line& l, const Line& r) {
        if (l.a != r.a) return l.a < r.a;
        if (l.b != r.b) return l.b < r.b;
        return l.c < r.c;
    }
};

// Exact incidence: a*x + b*y = c, cross-multiplied so only integers are touched.
inline bool incident(const Point& p, const Line& l) {
    const BigInt xn = num(p.x), xd = den(p.x);
    const BigInt yn = num(p.y), yd = den(p.y);
    return l.a * xn * yd + l.b * yn * xd == l.c * xd * yd;
}

inline Line line_through(const Point& p, const Point& q) {
    if (p == q) throw EqualPoints{};
    // normal (dy, -dx), offset through p; clear denominators.
    const Rational a0 = q.y - p.y;
    const Rational b0 = p.x - q.x;
    const Rational c0 = a0 * p.x + b0 * p.y;
    const BigInt scale = boost::multiprecision::lcm(
        boost::multiprecision::lcm(den(a0), den(b0)), den(c0));
    const Rational s(scale);
    return Line::make(num(a0 * s), num(b0 * s), num(c0 * s));
}

struct Parallel {
    friend bool operator==(const Parallel&, const Parallel&) = default;
};
struct Identical {
    friend bool operator==(const Identical&, const Identical&) = default;
};
using IntersectResult = std::variant<Point, Parallel, Identical>;

inline IntersectResult intersect(const Line& l1, const Line& l2) {
    if (l1 == l2) return Identical{};
    const BigInt det = l1.a * l2.b - l2.a * l1.b;
    if (det == 0) return Parallel{};
    const Rational d(det);
    return Point{Rational(l1.c * l2.b - l2.c * l1.b) / d,
                 Rational(l1.a * l2.c - l2.a * l1.c) / d};
}

// det [[x1,y1,1],[x2,y2,1],[x3,y3,1]]; zero iff collinear.
inline Rational collinearity_det(const Point& p1, const Point& p2, const Point& p3) {
    return p1.x * (p2.y - p3.y) - p1.y * (p2.x - p3.x) + (p2.x * p3.y - p3.x * p2.y);
}

inline bool collinear(const Point& p1, const Point& p2, const Point& p3) {
    return collinearity_det(p1, p2, p3) == 0;
}

}  // namespace stlab
