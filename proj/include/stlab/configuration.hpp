#pragma once

#include "stlab/geometry.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace stlab {

// Indexed points + lines with the incidence structure cached at construction.
// Ids are positions in the vectors. Immutable after build().
struct Configuration {
    std::vector<Point> points;
    std::vector<Line> lines;
    std::vector<std::vector<PointId>> incidences;      // per line, sorted point ids
    std::vector<std::vector<LineId>> lines_of_point;   // per point, sorted line ids

    std::size_t n() const { return points.size(); }
    std::size_t m() const { return lines.size(); }

    std::size_t total_incidences() const {
        std::size_t t = 0;
        for (const auto& inc : incidences) t += inc.size();
        return t;
    }

    static Configuration build(std::vector<Point> pts, std::vector<Line> lns) {
        Configuration cfg;
        cfg.points = std::move(pts);
        cfg.lines = std::move(lns);
        cfg.validate_unique();
        cfg.rebuild_incidences();
        return cfg;
    }

private:
    void validate_unique() const {
        {
            std::vector<Point> sorted = points;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw std::invalid_argument("configuration: duplicate point");
        }
        {
            std::vector<Line> sorted = lines;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw std::invalid_argument("configuration: duplicate line (canonical form)");
        }
    }

    void rebuild_incidences() {
        incidences.assign(lines.size(), {});
        lines_of_point.assign(points.size(), {});

        // x-bucketed point index; each line is evaluated against the buckets it
        // can meet instead of against every point.
        std::map<Rational, std::vector<std::pair<Rational, PointId>>> by_x;
        for (PointId i = 0; i < points.size(); ++i)
            by_x[points[i].x].emplace_back(points[i].y, i);
        for (auto& [x, ys] : by_x) std::sort(ys.begin(), ys.end());

        for (LineId li = 0; li < lines.size(); ++li) {
            const Line& l = lines[li];
            auto& out = incidences[li];
            if (l.vertical()) {
                const Rational x0 = Rational(l.c) / Rational(l.a);
                auto it = by_x.find(x0);
                if (it != by_x.end())
                    for (const auto& [y, id] : it->second) out.push_back(id);
            } else {
                const Rational rb(l.b);
                for (const auto& [x, ys] : by_x) {
                    const Rational y0 = (Rational(l.c) - Rational(l.a) * x) / rb;
                    auto lo = std::lower_bound(ys.begin(), ys.end(),
                                               std::make_pair(y0, PointId{0}));
                    if (lo != ys.end() && lo->first == y0) out.push_back(lo->second);
                }
            }
            std::sort(out.begin(), out.end());
            for (PointId pid : out) lines_of_point[pid].push_back(li);
        }
    }
};

// Restriction to the given ids; new ids are dense in the order of the old ones.
// Optional out-params map new id -> old id.
inline Configuration subconfiguration(const Configuration& cfg,
                                      const std::vector<PointId>& point_ids,
                                      const std::vector<LineId>& line_ids,
                                      std::vector<PointId>* point_map = nullptr,
                                      std::vector<LineId>* line_map = nullptr) {
    std::vector<PointId> ps = point_ids;
    std::vector<LineId> ls = line_ids;
    std::sort(ps.begin(), ps.end());
    std::sort(ls.begin(), ls.end());
    std::vector<Point> pts;
    std::vector<Line> lns;
    pts.reserve(ps.size());
    lns.reserve(ls.size());
    for (PointId id : ps) pts.push_back(cfg.points.at(id));
    for (LineId id : ls) lns.push_back(cfg.lines.at(id));
    if (point_map) *point_map = std::move(ps);
    if (line_map) *line_map = std::move(ls);
    return Configuration::build(std::move(pts), std::move(lns));
}

}  // namespace stlab
