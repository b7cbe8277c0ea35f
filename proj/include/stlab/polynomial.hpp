#pragma once

#include "stlab/geometry.hpp"
#include "stlab/rational.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace stlab {

inline std::size_t monomial_count(std::size_t degree) {
    return (degree + 1) * (degree + 2) / 2;
}

// Exponent pairs (i, j) of all monomials x^i y^j with i + j <= d, graded-lex:
// degree blocks ascending, x-power descending inside a block.
inline std::vector<std::pair<unsigned, unsigned>> monomials_upto(unsigned d) {
    std::vector<std::pair<unsigned, unsigned>> out;
    out.reserve(monomial_count(d));
    for (unsigned k = 0; k <= d; ++k)
        for (unsigned i = k + 1; i-- > 0;) out.emplace_back(i, k - i);
    return out;
}

// All monomial values x^i y^j with 1 <= i+j <= d (the constant is excluded),
// graded-lex order; length (d+1)(d+2)/2 - 1.
inline std::vector<Rational> veronese_lift(const Point& p, std::size_t d) {
    if (d < 1) throw std::invalid_argument("veronese_lift: d must be >= 1");
    std::vector<Rational> xp(d + 1), yp(d + 1);
    xp[0] = yp[0] = 1;
    for (std::size_t e = 1; e <= d; ++e) {
        xp[e] = xp[e - 1] * p.x;
        yp[e] = yp[e - 1] * p.y;
    }
    std::vector<Rational> out;
    out.reserve(monomial_count(d) - 1);
    for (const auto& [i, j] : monomials_upto(static_cast<unsigned>(d)))
        if (i + j >= 1) out.push_back(xp[i] * yp[j]);
    return out;
}

// Dense bivariate polynomial; coefficients cover every monomial of total
// degree <= degree in graded-lex order (constant first).
struct BisectingFactor {
    std::size_t degree = 0;
    std::vector<Rational> coefficients;

    Rational evaluate(const Point& p) const {
        std::vector<Rational> xp(degree + 1), yp(degree + 1);
        xp[0] = yp[0] = 1;
        for (std::size_t e = 1; e <= degree; ++e) {
            xp[e] = xp[e - 1] * p.x;
            yp[e] = yp[e - 1] * p.y;
        }
        Rational acc = 0;
        std::size_t idx = 0;
        for (const auto& [i, j] : monomials_upto(static_cast<unsigned>(degree)))
            acc += coefficients[idx++] * xp[i] * yp[j];
        return acc;
    }

    int sign_at(const Point& p) const {
        const Rational v = evaluate(p);
        if (v > 0) return 1;
        if (v < 0) return -1;
        return 0;
    }

    bool is_identically_zero() const {
        for (const auto& c : coefficients)
            if (c != 0) return false;
        return true;
    }
};

}  // namespace stlab
