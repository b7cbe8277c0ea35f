#pragma once

#include "stlab/configuration.hpp"
#include "stlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <thread>
#include <vector>

namespace stlab {

struct IncidenceStats {
    std::size_t total = 0;
    std::vector<std::size_t> per_point_richness;  // indexed by PointId
    std::vector<std::size_t> per_line_richness;   // indexed by LineId
};

enum class CountMethod { naive, grouped };

// Exact incidence count. `naive` tests all n*m pairs; `grouped` evaluates each
// line against an x-sorted point index. Both must agree (tested property).
inline IncidenceStats count_incidences(const Configuration& cfg,
                                       CountMethod method = CountMethod::grouped,
                                       unsigned threads = 1) {
    IncidenceStats stats;
    stats.per_point_richness.assign(cfg.n(), 0);
    stats.per_line_richness.assign(cfg.m(), 0);

    if (method == CountMethod::naive) {
        auto run = [&](LineId lo, LineId hi, IncidenceStats& out) {
            for (LineId li = lo; li < hi; ++li)
                for (PointId pi = 0; pi < cfg.n(); ++pi)
                    if (incident(cfg.points[pi], cfg.lines[li])) {
                        ++out.per_line_richness[li];
                        ++out.per_point_richness[pi];
                        ++out.total;
                    }
        };
        if (threads <= 1 || cfg.m() < 2 * threads) {
            run(0, cfg.m(), stats);
        } else {
            std::vector<IncidenceStats> partial(threads, stats);
            std::vector<std::thread> pool;
            const std::size_t chunk = (cfg.m() + threads - 1) / threads;
            for (unsigned t = 0; t < threads; ++t) {
                const LineId lo = t * chunk, hi = std::min<std::size_t>(cfg.m(), lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back(run, lo, hi, std::ref(partial[t]));
            }
            for (auto& th : pool) th.join();
            for (const auto& part : partial) {
                stats.total += part.total;
                for (std::size_t i = 0; i < cfg.n(); ++i)
                    stats.per_point_richness[i] += part.per_point_richness[i];
                for (std::size_t i = 0; i < cfg.m(); ++i)
                    stats.per_line_richness[i] += part.per_line_richness[i];
            }
        }
        return stats;
    }

    // grouped
    std::map<Rational, std::vector<std::pair<Rational, PointId>>> by_x;
    for (PointId i = 0; i < cfg.n(); ++i) by_x[cfg.points[i].x].emplace_back(cfg.points[i].y, i);
    for (auto& [x, ys] : by_x) std::sort(ys.begin(), ys.end());
    for (LineId li = 0; li < cfg.m(); ++li) {
        const Line& l = cfg.lines[li];
        if (l.vertical()) {
            auto it = by_x.find(Rational(l.c) / Rational(l.a));
            if (it == by_x.end()) continue;
            for (const auto& [y, pid] : it->second) {
                ++stats.per_line_richness[li];
                ++stats.per_point_richness[pid];
                ++stats.total;
            }
        } else {
            const Rational rb(l.b);
            for (const auto& [x, ys] : by_x) {
                const Rational y0 = (Rational(l.c) - Rational(l.a) * x) / rb;
                auto lo = std::lower_bound(ys.begin(), ys.end(), std::make_pair(y0, PointId{0}));
                if (lo != ys.end() && lo->first == y0) {
                    ++stats.per_line_richness[li];
                    ++stats.per_point_richness[lo->second];
                    ++stats.total;
                }
            }
        }
    }
    return stats;
}

struct StRatio {
    double ratio_main;  // I / (n^{2/3} m^{2/3})
    double ratio_full;  // I / (n^{2/3} m^{2/3} + n + m)
};

inline StRatio st_ratio(const Configuration& cfg) {
    if (cfg.n() < 1 || cfg.m() < 1)
        throw std::invalid_argument("st_ratio: need n >= 1 and m >= 1");
    const double n = static_cast<double>(cfg.n());
    const double m = static_cast<double>(cfg.m());
    const double I = static_cast<double>(count_incidences(cfg).total);
    const double main = std::cbrt(n * n) * std::cbrt(m * m);
    return StRatio{I / main, I / (main + n + m)};
}

struct CleaningReport {
    std::size_t rounds = 0;  // rounds that removed something
    std::vector<PointId> surviving_points;
    std::vector<LineId> surviving_lines;
    std::size_t incidences_before = 0;
    std::size_t incidences_after = 0;
    Rational point_threshold;  // smallest surviving richness (integer-valued)
    Rational line_threshold;
};

// Simultaneous-rounds removal of points/lines whose richness inside the current
// subconfiguration is strictly below the threshold. The fixpoint is the unique
// maximal core (order-independent; tested against one-at-a-time removal).
inline CleaningReport richness_peel(const Configuration& cfg, const Rational& point_threshold,
                                    const Rational& line_threshold) {
    std::vector<char> point_alive(cfg.n(), 1), line_alive(cfg.m(), 1);
    std::vector<std::size_t> point_rich(cfg.n(), 0), line_rich(cfg.m(), 0);

    auto recount = [&] {
        std::fill(point_rich.begin(), point_rich.end(), 0);
        std::fill(line_rich.begin(), line_rich.end(), 0);
        for (LineId li = 0; li < cfg.m(); ++li) {
            if (!line_alive[li]) continue;
            for (PointId pid : cfg.incidences[li])
                if (point_alive[pid]) {
                    ++line_rich[li];
                    ++point_rich[pid];
                }
        }
    };

    CleaningReport report;
    recount();
    report.incidences_before = 0;
    for (LineId li = 0; li < cfg.m(); ++li) report.incidences_before += line_rich[li];

    for (;;) {
        bool removed = false;
        for (PointId i = 0; i < cfg.n(); ++i)
            if (point_alive[i] && Rational(point_rich[i]) < point_threshold) {
                point_alive[i] = 0;
                removed = true;
            }
        for (LineId i = 0; i < cfg.m(); ++i)
            if (line_alive[i] && Rational(line_rich[i]) < line_threshold) {
                line_alive[i] = 0;
                removed = true;
            }
        if (!removed) break;
        ++report.rounds;
        recount();
    }

    for (PointId i = 0; i < cfg.n(); ++i)
        if (point_alive[i]) report.surviving_points.push_back(i);
    for (LineId i = 0; i < cfg.m(); ++i)
        if (line_alive[i]) report.surviving_lines.push_back(i);
    report.incidences_after = 0;
    for (LineId li = 0; li < cfg.m(); ++li)
        if (line_alive[li]) report.incidences_after += line_rich[li];
    report.point_threshold = point_threshold;
    report.line_threshold = line_threshold;
    return report;
}

// Step-0 cleaning. The paper thresholds delta*m^{2/3}/(4 n^{1/3}) and
// delta*n^{2/3}/(4 m^{1/3}) are irrational; an integer richness r is below the
// point threshold iff 64 r^3 n q^3 < p^3 m^2 (delta = p/q), so the reported
// rational threshold is the smallest integer richness that survives. Both
// thresholds are frozen at the ORIGINAL n, m and never recomputed while peeling.
inline CleaningReport clean(const Configuration& cfg, const Rational& delta) {
    if (cfg.n() < 1 || cfg.m() < 1) throw std::invalid_argument("clean: need n, m >= 1");
    if (delta <= 0) throw std::invalid_argument("clean: delta must be positive");
    const BigInt n = cfg.n(), m = cfg.m();
    const BigInt p = num(delta), q = den(delta);
    const BigInt point_cutoff = cube_cutoff(64 * n * q * q * q, p * p * p * m * m);
    const BigInt line_cutoff = cube_cutoff(64 * m * q * q * q, p * p * p * n * n);
    return richness_peel(cfg, Rational(point_cutoff), Rational(line_cutoff));
}

struct InequalityReport {
    enum class Form { line, point } form;
    double size_constant;        // |P| / (m^a n^b)  (line form), |L| / ... (point form)
    double incidence_constant;   // I / (m^{a+2/3} n^{b-1/3})   resp. I / (m^{a-1/3} n^{b+2/3})
    double conclusion_lhs;       // |L| resp. |P|
    double conclusion_rhs;       // m^{a/2+1} n^{b/2-1/2}  resp.  m^{a/2-1/2} n^{b/2+1}
    double achieved_constant;    // conclusion_lhs / conclusion_rhs
};

// Diagnostic evaluation of the cleaning propositions: reports the constants a
// configuration achieves on both sides. points/lines/incidences are the
// subconfiguration being measured; m, n are the ambient sizes in the exponents.
inline InequalityReport check_cleaning_inequality(std::size_t points, std::size_t lines,
                                                  std::size_t incidences, std::size_t m,
                                                  std::size_t n, const Rational& alpha,
                                                  const Rational& beta) {
    const bool line_form = (2 * alpha + beta == 1) && (alpha <= Rational(2, 3));
    const bool point_form = (alpha + 2 * beta == 1) && (beta <= Rational(2, 3));
    if (!line_form && !point_form)
        throw BadExponents("check_cleaning_inequality: need 2a+b=1 (a<=2/3) or a+2b=1 (b<=2/3)");

    const double a = to_double(alpha), b = to_double(beta);
    const double dm = static_cast<double>(m), dn = static_cast<double>(n);
    InequalityReport rep{};
    if (line_form) {
        rep.form = InequalityReport::Form::line;
        rep.size_constant = points / std::pow(dm, a) / std::pow(dn, b);
        rep.incidence_constant = incidences / std::pow(dm, a + 2.0 / 3.0) / std::pow(dn, b - 1.0 / 3.0);
        rep.conclusion_lhs = static_cast<double>(lines);
        rep.conclusion_rhs = std::pow(dm, a / 2 + 1) * std::pow(dn, b / 2 - 0.5);
    } else {
        rep.form = InequalityReport::Form::point;
        rep.size_constant = lines / std::pow(dm, a) / std::pow(dn, b);
        rep.incidence_constant = incidences / std::pow(dm, a - 1.0 / 3.0) / std::pow(dn, b + 2.0 / 3.0);
        rep.conclusion_lhs = static_cast<double>(points);
        rep.conclusion_rhs = std::pow(dm, a / 2 - 0.5) * std::pow(dn, b / 2 + 1);
    }
    rep.achieved_constant = rep.conclusion_lhs / rep.conclusion_rhs;
    return rep;
}

}  // namespace stlab
