#pragma once

#include "stlab/configuration.hpp"
#include "stlab/errors.hpp"
#include "stlab/geometry.hpp"

#include <array>
#include <set>
#include <utility>

namespace stlab {

// Invertible 3x3 rational matrix acting on (x, y, 1)^T.
struct ProjectiveMap {
    std::array<std::array<Rational, 3>, 3> m;

    static ProjectiveMap identity() {
        ProjectiveMap id{};
        for (int i = 0; i < 3; ++i) id.m[i][i] = 1;
        return id;
    }

    static ProjectiveMap shear(const Rational& lambda) {
        auto s = identity();
        s.m[0][1] = lambda;  // x' = x + lambda*y
        return s;
    }

    Rational det() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }

    // adj(M) with adj(M)*M = det(M)*I; used to transform line covectors.
    ProjectiveMap adjugate() const {
        auto cof = [&](int i, int j) {
            const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
            const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
            return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        };
        ProjectiveMap adj{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) adj.m[i][j] = cof(j, i);
        return adj;
    }
};

namespace detail {

inline Point map_point(const ProjectiveMap& t, const Point& p, PointId id) {
    const Rational w = t.m[2][0] * p.x + t.m[2][1] * p.y + t.m[2][2];
    if (w == 0) throw PointAtInfinity{id};
    const Rational x = t.m[0][0] * p.x + t.m[0][1] * p.y + t.m[0][2];
    const Rational y = t.m[1][0] * p.x + t.m[1][1] * p.y + t.m[1][2];
    return Point{x / w, y / w};
}

inline Line map_line(const ProjectiveMap& adj, const Line& l, LineId id) {
    // Line covector (a, b, -c); image covector is (a, b, -c) * adj(M).
    const Rational a(l.a), b(l.b), mc(-l.c);
    Rational out[3];
    for (int j = 0; j < 3; ++j)
        out[j] = a * adj.m[0][j] + b * adj.m[1][j] + mc * adj.m[2][j];
    if (out[0] == 0 && out[1] == 0) throw LineAtInfinity{id};
    const BigInt scale = boost::multiprecision::lcm(
        boost::multiprecision::lcm(den(out[0]), den(out[1])), den(out[2]));
    const Rational s(scale);
    return Line::make(num(out[0] * s), num(out[1] * s), num(-out[2] * s));
}

}  // namespace detail

// Applies the map to every point and line; the bipartite incidence relation by
// ids is preserved (projective maps send lines to lines). Throws
// PointAtInfinity / LineAtInfinity when the affine chart cannot hold the image.
inline Configuration apply_map(const ProjectiveMap& map, const Configuration& cfg) {
    if (map.det() == 0) throw std::invalid_argument("apply_map: singular matrix");
    const ProjectiveMap adj = map.adjugate();
    std::vector<Point> pts;
    pts.reserve(cfg.n());
    for (PointId i = 0; i < cfg.n(); ++i) pts.push_back(detail::map_point(map, cfg.points[i], i));
    std::vector<Line> lns;
    lns.reserve(cfg.m());
    for (LineId i = 0; i < cfg.m(); ++i) lns.push_back(detail::map_line(adj, cfg.lines[i], i));
    return Configuration::build(std::move(pts), std::move(lns));
}

// Smallest nonnegative integer shear (x,y) -> (x + lambda*y, y) after which no
// line of cfg is vertical. Only integer ratios b/a can be hit, so at most |L|
// values are excluded.
inline BigInt dual_shear_lambda(const Configuration& cfg) {
    std::set<BigInt> excluded;
    for (const Line& l : cfg.lines) {
        if (l.a == 0) continue;             // horizontal stays non-vertical
        if (l.b % l.a == 0) excluded.insert(l.b / l.a);
    }
    BigInt lambda = 0;
    while (excluded.count(lambda)) ++lambda;
    return lambda;
}

// Point-line duality with respect to the deterministic shear: after shearing,
// each line y = mx + k maps to the point (m, -k) and each point (p, q) maps to
// the line y = px - q. Incidence and triple structure transfer: p on l iff
// dual(l) on dual(p); collinear points become concurrent lines and vice versa.
// Dual point id i corresponds to line i, dual line j to point j.
inline std::pair<Configuration, ProjectiveMap> dualize(const Configuration& cfg) {
    const BigInt lambda = dual_shear_lambda(cfg);
    const ProjectiveMap shear = ProjectiveMap::shear(Rational(lambda));
    const Configuration sheared = lambda == 0 ? cfg : apply_map(shear, cfg);

    std::vector<Point> dual_points;
    dual_points.reserve(sheared.m());
    for (const Line& l : sheared.lines) {
        // ax + by = c, b != 0: slope -a/b, intercept c/b.
        const Rational rb(l.b);
        dual_points.push_back(Point{Rational(-l.a) / rb, Rational(-l.c) / rb});
    }
    std::vector<Line> dual_lines;
    dual_lines.reserve(sheared.n());
    for (const Point& p : sheared.points) {
        // y = p.x * x - p.y  =>  (p.x) x - y = p.y, denominators cleared.
        const BigInt scale = boost::multiprecision::lcm(den(p.x), den(p.y));
        const Rational s(scale);
        dual_lines.push_back(Line::make(num(p.x * s), -scale, num(p.y * s)));
    }
    return {Configuration::build(std::move(dual_points), std::move(dual_lines)), shear};
}

}  // namespace stlab
