#pragma once

#include "stlab/configuration.hpp"
#include "stlab/errors.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stlab {

using Triple = std::array<std::size_t, 3>;  // sorted ids

struct TripleSystem {
    enum class Kind { collinear, concurrent };
    Kind kind = Kind::collinear;
    std::vector<std::size_t> ground;  // sorted, unique
    std::vector<Triple> triples;      // each sorted, list sorted, unique

    std::size_t size() const { return triples.size(); }

    static Triple make_triple(std::size_t a, std::size_t b, std::size_t c) {
        Triple t{a, b, c};
        std::sort(t.begin(), t.end());
        if (t[0] == t[1] || t[1] == t[2])
            throw std::invalid_argument("triple: ids must be distinct");
        return t;
    }

    void normalize() {
        std::sort(ground.begin(), ground.end());
        ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
        std::sort(triples.begin(), triples.end());
        triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    }
};

// Points of `ids` ordered along the line by the parameter t = d . p where d is
// the lex-positive direction vector of l. Vertical lines order by ascending y.
inline std::vector<PointId> sort_along_line(const Line& l, const std::vector<PointId>& ids,
                                            const Configuration& cfg) {
    Rational dx(l.b), dy(-l.a);
    if (dx < 0 || (dx == 0 && dy < 0)) { dx = -dx; dy = -dy; }
    std::vector<std::pair<Rational, PointId>> keyed;
    keyed.reserve(ids.size());
    for (PointId id : ids) {
        const Point& p = cfg.points.at(id);
        if (!incident(p, l)) throw NotIncident{id};
        keyed.emplace_back(dx * p.x + dy * p.y, id);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<PointId> out;
    out.reserve(keyed.size());
    for (const auto& [t, id] : keyed) out.push_back(id);
    return out;
}

// All consecutive collinear triples: each line with s >= 3 incident points
// contributes exactly its s-2 windows of 3 points adjacent along the line.
// Ground is the full point set of the configuration.
inline TripleSystem consecutive_triples(const Configuration& cfg) {
    TripleSystem sys;
    sys.kind = TripleSystem::Kind::collinear;
    sys.ground.resize(cfg.n());
    for (PointId i = 0; i < cfg.n(); ++i) sys.ground[i] = i;
    for (LineId li = 0; li < cfg.m(); ++li) {
        const auto& inc = cfg.incidences[li];
        if (inc.size() < 3) continue;
        const auto ordered = sort_along_line(cfg.lines[li], inc, cfg);
        for (std::size_t i = 0; i + 2 < ordered.size(); ++i)
            sys.triples.push_back(TripleSystem::make_triple(ordered[i], ordered[i + 1], ordered[i + 2]));
    }
    sys.normalize();
    return sys;
}

// Cell label per point; std::nullopt marks a boundary point.
using CellLabels = std::vector<std::optional<std::string>>;

// Consecutive triples whose three points share one cell. Consecutiveness is
// measured against the FULL point set: a window interrupted by a boundary
// point or a different cell is dropped, never re-stitched.
inline TripleSystem in_cell_triples(const Configuration& cfg, const CellLabels& labels) {
    if (labels.size() != cfg.n())
        throw std::invalid_argument("in_cell_triples: labels must cover all points");
    TripleSystem all = consecutive_triples(cfg);
    TripleSystem sys;
    sys.kind = TripleSystem::Kind::collinear;
    sys.ground = all.ground;
    for (const Triple& t : all.triples) {
        const auto& a = labels[t[0]];
        if (!a) continue;
        if (labels[t[1]] == a && labels[t[2]] == a) sys.triples.push_back(t);
    }
    sys.normalize();
    return sys;
}

struct TriplePeelReport {
    Rational threshold;
    std::vector<std::size_t> surviving;  // sorted ids
    TripleSystem surviving_triples;
    std::size_t rounds = 0;  // rounds that removed something
};

// Round-based peeling: drop every element contained in strictly fewer than
// `threshold` surviving triples, drop the triples it carried, repeat to the
// fixpoint. Triples are never re-derived. Confluent (unique maximal core).
inline TriplePeelReport triple_peel(const std::vector<std::size_t>& elements,
                                    const TripleSystem& triples, const Rational& threshold) {
    std::map<std::size_t, char> alive;
    for (std::size_t id : elements) alive[id] = 1;

    std::vector<char> triple_alive(triples.triples.size(), 1);
    for (std::size_t ti = 0; ti < triples.triples.size(); ++ti)
        for (std::size_t id : triples.triples[ti])
            if (!alive.count(id)) triple_alive[ti] = 0;  // outside the ground: inactive

    TriplePeelReport report;
    report.threshold = threshold;

    std::map<std::size_t, std::size_t> degree;
    auto recount = [&] {
        degree.clear();
        for (std::size_t ti = 0; ti < triples.triples.size(); ++ti)
            if (triple_alive[ti])
                for (std::size_t id : triples.triples[ti]) ++degree[id];
    };

    recount();
    for (;;) {
        std::vector<std::size_t> doomed;
        for (auto& [id, live] : alive) {
            if (!live) continue;
            const std::size_t d = degree.count(id) ? degree.at(id) : 0;
            if (Rational(d) < threshold) doomed.push_back(id);
        }
        if (doomed.empty()) break;
        ++report.rounds;
        for (std::size_t id : doomed) alive[id] = 0;
        for (std::size_t ti = 0; ti < triples.triples.size(); ++ti)
            if (triple_alive[ti])
                for (std::size_t id : triples.triples[ti])
                    if (!alive.at(id)) { triple_alive[ti] = 0; break; }
        recount();
    }

    for (const auto& [id, live] : alive)
        if (live) report.surviving.push_back(id);
    report.surviving_triples.kind = triples.kind;
    report.surviving_triples.ground = report.surviving;
    for (std::size_t ti = 0; ti < triples.triples.size(); ++ti)
        if (triple_alive[ti]) report.surviving_triples.triples.push_back(triples.triples[ti]);
    report.surviving_triples.normalize();
    return report;
}

}  // namespace stlab
