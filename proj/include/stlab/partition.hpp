#pragma once

#include "stlab/configuration.hpp"
#include "stlab/errors.hpp"
#include "stlab/polynomial.hpp"
#include "stlab/rng.hpp"
#include "stlab/triples.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace stlab {

struct BisectFailure {
    std::size_t restarts = 0;
    std::string reason;
};

using BisectOutcome = std::variant<BisectingFactor, BisectFailure>;

namespace partition_detail {

// Largest count a side may keep: floor((1/2 + eps) * s), exact.
inline std::size_t side_cap(std::size_t s, const Rational& eps) {
    const BigInt p = num(eps), q = den(eps);
    return (( (q + 2 * p) * s) / (2 * q)).template convert_to<std::size_t>();
}

struct SearchState {
    std::vector<std::vector<Rational>> lifts;   // per class, flattened point lifts
    std::vector<std::size_t> sizes;             // points per class
    std::size_t dim = 0;
};

// Feasible offsets for one class given sorted projections: c must satisfy
// |{t > c}| <= cap and |{t < c}| <= cap, i.e. c in [v[s-1-cap], v[cap]].
// This per-class interval is never empty (cap >= floor(s/2)); only the
// intersection across classes can fail.
inline void class_interval(const std::vector<Rational>& sorted, std::size_t cap,
                           Rational& lo, Rational& hi) {
    const std::size_t s = sorted.size();
    lo = sorted[s - 1 - cap];
    hi = sorted[cap];
}

}  // namespace partition_detail

// Searches for one polynomial of degree <= d whose positive and negative sides
// each hold at most (1/2 + eps) of every class: random integer directions in
// the lifted monomial space, a shared offset from exact order statistics, and
// a little coordinate descent on the infeasibility gap. Every candidate is
// verified by exact sign counting before it is returned.
inline BisectOutcome bisect_classes(const std::vector<std::vector<Point>>& classes, std::size_t d,
                                    const Rational& epsilon, std::uint64_t seed,
                                    std::size_t restart_budget = 200) {
    if (d < 1) return BisectFailure{0, "degree must be >= 1"};
    if (epsilon < 0 || epsilon >= Rational(1, 2))
        return BisectFailure{0, "epsilon must lie in [0, 1/2)"};
    const std::size_t dim = monomial_count(d) - 1;
    std::vector<const std::vector<Point>*> live;
    for (const auto& cls : classes)
        if (!cls.empty()) live.push_back(&cls);
    if (dim <= live.size())
        return BisectFailure{0, "lifted dimension must exceed the class count"};

    // lifts computed once per call
    std::vector<std::vector<std::vector<Rational>>> lifts(live.size());
    std::vector<std::size_t> caps(live.size());
    for (std::size_t ci = 0; ci < live.size(); ++ci) {
        caps[ci] = partition_detail::side_cap(live[ci]->size(), epsilon);
        lifts[ci].reserve(live[ci]->size());
        for (const Point& p : *live[ci]) lifts[ci].push_back(veronese_lift(p, d));
    }

    auto project = [&](const std::vector<std::int64_t>& w,
                       std::vector<std::vector<Rational>>& proj) {
        proj.assign(live.size(), {});
        for (std::size_t ci = 0; ci < live.size(); ++ci) {
            proj[ci].reserve(lifts[ci].size());
            for (const auto& lift : lifts[ci]) {
                Rational t = 0;
                for (std::size_t k = 0; k < dim; ++k)
                    if (w[k]) t += Rational(w[k]) * lift[k];
                proj[ci].push_back(std::move(t));
            }
            std::sort(proj[ci].begin(), proj[ci].end());
        }
    };

    // gap <= 0 means the per-class intervals intersect
    auto gap_of = [&](const std::vector<std::vector<Rational>>& proj, Rational& lo, Rational& hi) {
        for (std::size_t ci = 0; ci < live.size(); ++ci) {
            Rational l, h;
            partition_detail::class_interval(proj[ci], caps[ci], l, h);
            if (ci == 0) { lo = l; hi = h; }
            else {
                if (l > lo) lo = l;
                if (h < hi) hi = h;
            }
        }
        return live.empty() ? Rational(-1) : lo - hi;
    };

    auto verify_and_build = [&](const std::vector<std::int64_t>& w,
                                const Rational& c) -> std::optional<BisectingFactor> {
        BisectingFactor f;
        f.degree = d;
        f.coefficients.assign(monomial_count(d), Rational(0));
        f.coefficients[0] = -c;
        for (std::size_t k = 0; k < dim; ++k) f.coefficients[k + 1] = Rational(w[k]);
        if (f.is_identically_zero()) return std::nullopt;
        const BigInt p = num(epsilon), q = den(epsilon);
        for (std::size_t ci = 0; ci < live.size(); ++ci) {
            std::size_t pos = 0, neg = 0;
            for (const Point& pt : *live[ci]) {
                const int s = f.sign_at(pt);
                if (s > 0) ++pos;
                else if (s < 0) ++neg;
            }
            const BigInt cap2q = (q + 2 * p) * live[ci]->size();
            if (BigInt(pos) * 2 * q > cap2q || BigInt(neg) * 2 * q > cap2q)
                return std::nullopt;
        }
        return f;
    };

    for (std::size_t restart = 0; restart < restart_budget; ++restart) {
        Rng rng(mix_seed(seed, restart));
        std::vector<std::int64_t> w(dim, 0);
        bool nonzero = false;
        while (!nonzero) {
            for (auto& wk : w) {
                wk = rng.range(-64, 64);
                if (wk) nonzero = true;
            }
        }
        std::vector<std::vector<Rational>> proj;
        project(w, proj);
        Rational lo, hi;
        Rational gap = gap_of(proj, lo, hi);

        for (std::size_t iter = 0; iter < 40; ++iter) {
            if (gap <= 0) {
                const Rational c = (lo + hi) / 2;
                if (auto f = verify_and_build(w, c)) return *f;
                break;  // exact verification rejected the candidate; restart
            }
            // coordinate tweak, keep only improvements
            bool improved = false;
            for (int attempt = 0; attempt < 4 && !improved; ++attempt) {
                const std::size_t k = rng.below(dim);
                const std::int64_t delta =
                    (rng.next() & 1 ? 1 : -1) * (std::int64_t{1} << rng.below(6));
                std::vector<std::int64_t> w2 = w;
                w2[k] += delta;
                std::vector<std::vector<Rational>> proj2;
                project(w2, proj2);
                Rational lo2, hi2;
                const Rational gap2 = gap_of(proj2, lo2, hi2);
                if (gap2 < gap) {
                    w = std::move(w2);
                    proj = std::move(proj2);
                    lo = lo2; hi = hi2; gap = gap2;
                    improved = true;
                }
            }
            if (!improved) break;
        }
    }
    return BisectFailure{restart_budget, "no simultaneously bisecting polynomial found"};
}

// Sign-class partition: level j bisects every current class with one factor of
// the smallest degree whose lifted dimension exceeds the class count. Cells are
// the sign vectors over the factor stack; exact zeros at any level are Boundary
// and leave every cell.
struct PartitionTree {
    std::vector<BisectingFactor> levels;
    CellLabels cell_of;            // per point; nullopt = boundary
    Rational epsilon;
    std::size_t achieved_max_cell = 0;

    std::size_t total_degree() const {
        std::size_t s = 0;
        for (const auto& f : levels) s += f.degree;
        return s;
    }

    std::map<std::string, std::vector<PointId>> classes() const {
        std::map<std::string, std::vector<PointId>> out;
        for (PointId i = 0; i < cell_of.size(); ++i)
            if (cell_of[i]) out[*cell_of[i]].push_back(i);
        return out;
    }
};

inline PartitionTree build_partition(const Configuration& cfg, std::size_t levels,
                                     const Rational& epsilon, std::uint64_t seed) {
    if (levels < 1) throw std::invalid_argument("build_partition: need at least one level");
    PartitionTree tree;
    tree.epsilon = epsilon;
    tree.cell_of.assign(cfg.n(), std::string{});

    for (std::size_t level = 0; level < levels; ++level) {
        auto grouped = tree.classes();
        std::vector<std::vector<Point>> classes;
        std::vector<std::vector<PointId>> class_ids;
        for (auto& [label, ids] : grouped) {
            std::vector<Point> pts;
            pts.reserve(ids.size());
            for (PointId id : ids) pts.push_back(cfg.points[id]);
            classes.push_back(std::move(pts));
            class_ids.push_back(ids);
        }
        std::size_t d = 1;
        while (monomial_count(d) - 1 <= classes.size()) ++d;

        BisectOutcome outcome =
            bisect_classes(classes, d, epsilon, mix_seed(seed, 0x7C55 + level));
        if (std::holds_alternative<BisectFailure>(outcome)) {
            const auto& fail = std::get<BisectFailure>(outcome);
            throw PartitionFailure{level, fail.reason + " after " +
                                              std::to_string(fail.restarts) + " restarts"};
        }
        const BisectingFactor factor = std::get<BisectingFactor>(outcome);
        for (PointId i = 0; i < cfg.n(); ++i) {
            if (!tree.cell_of[i]) continue;
            const int s = factor.sign_at(cfg.points[i]);
            if (s == 0) tree.cell_of[i] = std::nullopt;
            else *tree.cell_of[i] += (s > 0 ? '+' : '-');
        }
        tree.levels.push_back(std::move(factor));
    }

    std::size_t max_cell = 0, class_count = 0;
    for (const auto& [label, ids] : tree.classes()) {
        ++class_count;
        max_cell = std::max(max_cell, ids.size());
    }
    tree.achieved_max_cell = max_cell;

    // A-posteriori guarantees of the verified bisection levels.
    const Rational balance_bound =
        rational_pow(Rational(1, 2) + epsilon, static_cast<unsigned>(levels)) * cfg.n() +
        levels;
    if (Rational(max_cell) > balance_bound)
        throw PartitionFailure{levels, "balance bound violated"};
    if (class_count > (std::size_t{1} << std::min<std::size_t>(levels, 62)))
        throw PartitionFailure{levels, "class count exceeds 2^t"};
    // For t = 1 a degree-1 zero set bounds two cells, so D^2 applies from t >= 2.
    const std::size_t D = tree.total_degree();
    if (levels >= 2 && class_count > D * D)
        throw PartitionFailure{levels, "class count exceeds D^2"};
    return tree;
}

// Witnessed crossings of the line with the partition zero set: for each factor,
// the number of incident configuration points where it vanishes plus the sign
// alternations between consecutive nonvanishing points along the line. Each
// unit is a distinct root of the factor on the line, so the total is bounded
// by sum of factor degrees (Bezout) whenever no factor contains the line.
inline std::size_t line_crossings(const Line& l, const PartitionTree& tree,
                                  const Configuration& cfg) {
    // reject lines inside the zero set: a factor of degree d vanishing at d+1
    // points of the line vanishes on it identically
    const Rational dx(l.b), dy(-l.a);
    Point base;
    if (!l.vertical()) base = Point{Rational(0), Rational(l.c) / Rational(l.b)};
    else base = Point{Rational(l.c) / Rational(l.a), Rational(0)};
    for (std::size_t li = 0; li < tree.levels.size(); ++li) {
        const auto& f = tree.levels[li];
        bool all_zero = true;
        for (std::size_t t = 0; t <= f.degree && all_zero; ++t) {
            const Point sample{base.x + Rational(t) * dx, base.y + Rational(t) * dy};
            if (f.sign_at(sample) != 0) all_zero = false;
        }
        if (all_zero) throw LineInZeroSet{li};
    }

    std::vector<PointId> on_line;
    for (PointId i = 0; i < cfg.n(); ++i)
        if (incident(cfg.points[i], l)) on_line.push_back(i);
    const auto ordered = sort_along_line(l, on_line, cfg);

    std::size_t crossings = 0;
    for (const auto& f : tree.levels) {
        int prev = 2;  // sentinel: no nonzero sign seen yet
        for (PointId id : ordered) {
            const int s = f.sign_at(cfg.points[id]);
            if (s == 0) {
                ++crossings;
            } else {
                if (prev != 2 && s != prev) ++crossings;
                prev = s;
            }
        }
    }
    return crossings;
}

}  // namespace stlab
