#pragma once

#include "stlab/configuration.hpp"
#include "stlab/errors.hpp"
#include "stlab/linalg.hpp"
#include "stlab/projective.hpp"
#include "stlab/triples.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace stlab {

// Jacobian of the collinearity constraints: one row per triple, two columns
// (x then y) per ground element in id order. The row for {s1,s2,s3} is the
// gradient of det [[x1,y1,1],[x2,y2,1],[x3,y3,1]] at the configuration.
struct CollinearityMatrix {
    std::vector<std::size_t> ground;  // sorted ids
    std::vector<Triple> triples;      // row order
    SparseRationalMatrix matrix;
    bool has_degenerate = false;      // some triple with coincident points

    std::size_t col_of(std::size_t id, bool y_coord) const {
        const auto it = std::lower_bound(ground.begin(), ground.end(), id);
        if (it == ground.end() || *it != id) throw UnknownId{id};
        return 2 * static_cast<std::size_t>(it - ground.begin()) + (y_coord ? 1 : 0);
    }
};

inline CollinearityMatrix collinearity_matrix(const std::vector<Point>& points,
                                              const TripleSystem& sys) {
    if (sys.kind != TripleSystem::Kind::collinear)
        throw std::invalid_argument("collinearity_matrix: triple system must be collinear");
    CollinearityMatrix cm;
    cm.ground = sys.ground;
    cm.triples = sys.triples;
    for (std::size_t id : cm.ground)
        if (id >= points.size()) throw UnknownId{id};
    cm.matrix.cols = 2 * cm.ground.size();
    cm.matrix.rows.reserve(sys.triples.size());
    for (const Triple& t : sys.triples) {
        const Point& p1 = points[t[0]];
        const Point& p2 = points[t[1]];
        const Point& p3 = points[t[2]];
        if (p1 == p2 || p2 == p3 || p1 == p3) cm.has_degenerate = true;
        std::vector<std::pair<std::uint32_t, Rational>> row;
        auto push = [&](std::size_t id, bool yc, Rational v) {
            row.emplace_back(static_cast<std::uint32_t>(cm.col_of(id, yc)), std::move(v));
        };
        push(t[0], false, p2.y - p3.y);
        push(t[0], true, p3.x - p2.x);
        push(t[1], false, p3.y - p1.y);
        push(t[1], true, p1.x - p3.x);
        push(t[2], false, p1.y - p2.y);
        push(t[2], true, p2.x - p1.x);
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::erase_if(row, [](const auto& e) { return e.second == 0; });
        cm.matrix.rows.push_back(std::move(row));
    }
    return cm;
}

inline std::size_t exact_rank(const CollinearityMatrix& cm) { return exact_rank(cm.matrix); }

struct RigidityCertificate {
    std::size_t ground_size = 0;
    std::size_t rank = 0;
    std::size_t certificate = 0;  // 2*ground_size - rank
    std::size_t triples_used = 0;
};

// The tangent-space dimension 2n - rank upper-bounds the dimension of every
// irreducible component of the collinearity variety through the configuration,
// smooth point or not.
inline RigidityCertificate rigidity_certificate(const std::vector<Point>& points,
                                                const TripleSystem& sys) {
    const CollinearityMatrix cm = collinearity_matrix(points, sys);
    RigidityCertificate cert;
    cert.ground_size = cm.ground.size();
    cert.rank = exact_rank(cm);
    cert.certificate = 2 * cert.ground_size - cert.rank;
    cert.triples_used = cm.triples.size();
    return cert;
}

// floor(8 t n / (4t + k))
inline BigInt dgos_bound(const BigInt& n, const BigInt& k, const BigInt& t) {
    if (k < 1 || t < 1) throw std::invalid_argument("dgos_bound: need k >= 1 and t >= 1");
    return (8 * t * n) / (4 * t + k);
}

struct DgosHypotheses {
    bool min_coverage_ok = false;  // every element in >= k triples
    bool pair_mult_ok = false;     // every pair in <= t triples
    bool line_ok = false;          // per line through p_s: <= k/2 triples of s on it
    std::size_t min_degree = 0;
    std::size_t max_pair_multiplicity = 0;
    std::size_t max_line_triples = 0;
};

// Exact verification of the three DGOS hypotheses; diagnostic only, the bound
// itself is pure arithmetic.
inline DgosHypotheses check_dgos_hypotheses(const std::vector<Point>& points,
                                            const TripleSystem& sys, const BigInt& k,
                                            const BigInt& t) {
    DgosHypotheses h;
    std::map<std::size_t, std::size_t> degree;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_mult;
    std::map<std::pair<std::size_t, Line>, std::size_t> line_count;
    for (const Triple& tr : sys.triples) {
        for (std::size_t id : tr) ++degree[id];
        ++pair_mult[{tr[0], tr[1]}];
        ++pair_mult[{tr[0], tr[2]}];
        ++pair_mult[{tr[1], tr[2]}];
        const Point& a = points.at(tr[0]);
        const Point& b = points.at(tr[1]);
        const Point& c = points.at(tr[2]);
        const Point* u = &a;
        const Point* v = (b == a) ? &c : &b;
        if (*u == *v) continue;  // fully coincident triple carries no line
        const Line l = line_through(*u, *v);
        for (std::size_t id : tr) ++line_count[{id, l}];
    }
    h.min_degree = sys.ground.empty() ? 0 : SIZE_MAX;
    for (std::size_t id : sys.ground) {
        const auto it = degree.find(id);
        h.min_degree = std::min(h.min_degree, it == degree.end() ? 0 : it->second);
    }
    if (h.min_degree == SIZE_MAX) h.min_degree = 0;
    for (const auto& [pr, c] : pair_mult) h.max_pair_multiplicity = std::max(h.max_pair_multiplicity, c);
    for (const auto& [key, c] : line_count) h.max_line_triples = std::max(h.max_line_triples, c);
    h.min_coverage_ok = BigInt(h.min_degree) >= k;
    h.pair_mult_ok = BigInt(h.max_pair_multiplicity) <= t;
    h.line_ok = 2 * BigInt(h.max_line_triples) <= k;
    return h;
}

// The eight infinitesimal projective motions evaluated at a point.
inline std::array<std::pair<Rational, Rational>, 8> projective_fields_at(const Point& p) {
    return {{{Rational(1), Rational(0)},
             {Rational(0), Rational(1)},
             {p.x, Rational(0)},
             {p.y, Rational(0)},
             {Rational(0), p.x},
             {Rational(0), p.y},
             {p.x * p.x, p.x * p.y},
             {p.x * p.y, p.y * p.y}}};
}

struct ProjectiveKernelReport {
    bool all_annihilated = true;
    std::size_t span_rank = 0;  // rank of the 8 field vectors in 2n-space
};

// Asserts M * v = 0 exactly for all eight projective fields (collinearity is
// projectively invariant, so any failure is a bug or a non-collinear triple)
// and reports the rank of their span, a lower bound on the certificate.
inline ProjectiveKernelReport projective_kernel_check(const std::vector<Point>& points,
                                                      const CollinearityMatrix& cm) {
    const std::size_t g = cm.ground.size();
    std::vector<std::vector<Rational>> fields(8, std::vector<Rational>(2 * g));
    for (std::size_t i = 0; i < g; ++i) {
        const auto vals = projective_fields_at(points.at(cm.ground[i]));
        for (std::size_t f = 0; f < 8; ++f) {
            fields[f][2 * i] = vals[f].first;
            fields[f][2 * i + 1] = vals[f].second;
        }
    }
    for (std::size_t f = 0; f < 8; ++f)
        for (std::size_t r = 0; r < cm.matrix.rows.size(); ++r) {
            Rational acc = 0;
            for (const auto& [c, v] : cm.matrix.rows[r]) acc += v * fields[f][c];
            if (acc != 0) throw KernelViolation{f, r};
        }
    SparseRationalMatrix span;
    span.cols = 2 * g;
    span.rows.resize(8);
    for (std::size_t f = 0; f < 8; ++f)
        for (std::uint32_t c = 0; c < 2 * g; ++c)
            if (fields[f][c] != 0) span.rows[f].emplace_back(c, fields[f][c]);
    ProjectiveKernelReport rep;
    rep.span_rank = exact_rank(span);
    return rep;
}

// Sum of per-cell certificates; valid only together with the closure-uniqueness
// certificate (fixing the cells fixes the rest). The sum is at most l*max and
// is justified by the same product-variety projection.
inline std::size_t compose_rigidity(const std::vector<std::size_t>& cell_certificates,
                                    bool closure_unique) {
    if (!closure_unique) throw CompositionUnjustified{};
    return std::accumulate(cell_certificates.begin(), cell_certificates.end(), std::size_t{0});
}

// Rigidity of the dual point set transfers to the primal configuration when
// every point lies on at least two lines. `concurrency` is a triple system
// over LineIds; dual point i is the dual of line i.
inline RigidityCertificate dual_rigidity_transfer(const Configuration& cfg,
                                                  const TripleSystem& concurrency) {
    std::vector<PointId> uncovered;
    for (PointId i = 0; i < cfg.n(); ++i)
        if (cfg.lines_of_point[i].size() < 2) uncovered.push_back(i);
    if (!uncovered.empty()) {
        std::ostringstream ids;
        for (std::size_t i = 0; i < uncovered.size(); ++i)
            ids << (i ? "," : "") << uncovered[i];
        throw UncoveredPoint{ids.str()};
    }
    const auto [dual, shear] = dualize(cfg);
    TripleSystem relabeled = concurrency;
    relabeled.kind = TripleSystem::Kind::collinear;
    relabeled.normalize();
    return rigidity_certificate(dual.points, relabeled);
}

}  // namespace stlab
