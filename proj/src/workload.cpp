#include "mvd/workload.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_set>

#include "mvd/rng.hpp"
#include "mvd/triangulation.hpp"

namespace mvd {
namespace {

std::uint64_t point_key(Point p) {
    std::uint64_t bx, by;
    static_assert(sizeof(double) == 8);
    std::memcpy(&bx, &p.x, 8);
    std::memcpy(&by, &p.y, 8);
    return splitmix64(bx) ^ (splitmix64(by) << 1);
}

struct CoordSet {
    std::unordered_set<std::uint64_t> keys;
    bool insert(Point p) { return keys.insert(point_key(p)).second; }
    bool contains(Point p) const { return keys.count(point_key(p)) != 0; }
};

double exp_draw(std::mt19937_64& g) {
    // Inverse CDF, rate 1; 1-u keeps the argument strictly positive.
    return -std::log(1.0 - draw_unit(g));
}

std::vector<Point> raw_points(Workload::Dist dist, std::size_t n,
                              std::mt19937_64& g, CoordSet& seen) {
    std::vector<Point> pts;
    pts.reserve(n);
    while (pts.size() < n) {
        Point p{};
        if (dist == Workload::Dist::Uniform) {
            p = Point{draw_unit(g), draw_unit(g)};
        } else {
            p = Point{exp_draw(g), exp_draw(g)};
        }
        if (seen.insert(p)) pts.push_back(p);
    }
    return pts;
}

void rescale_to_unit_square(std::vector<Point>& pts) {
    if (pts.empty()) return;
    double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
    for (const Point p : pts) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double sx = max_x > min_x ? 1.0 / (max_x - min_x) : 0.0;
    const double sy = max_y > min_y ? 1.0 / (max_y - min_y) : 0.0;
    for (Point& p : pts) {
        p.x = (p.x - min_x) * sx;
        p.y = (p.y - min_y) * sy;
    }
}

}  // namespace

std::string to_string(Workload::Dist d) {
    switch (d) {
        case Workload::Dist::Uniform: return "uniform";
        case Workload::Dist::Exponential: return "exp";
        case Workload::Dist::File: return "file";
    }
    return "?";
}

std::vector<std::pair<PointId, Point>> gen_points(const Workload& w) {
    if (w.dist == Workload::Dist::File)
        throw std::invalid_argument("gen_points: file workloads are ingested, not generated");
    if (w.n < 1) throw std::invalid_argument("gen_points: n must be >= 1");

    for (std::uint64_t attempt = 0;; ++attempt) {
        std::mt19937_64 g(splitmix64(w.seed ^ (attempt * 0x9e3779b97f4a7c15ull + 1)));
        CoordSet seen;
        std::vector<Point> pts = raw_points(w.dist, w.n, g, seen);
        if (w.dist == Workload::Dist::Exponential) rescale_to_unit_square(pts);

        // Rescaling can in principle collapse coordinates; re-draw the whole
        // sample in that (astronomically rare) case.
        CoordSet post;
        bool ok = true;
        for (const Point p : pts)
            if (!post.insert(p)) {
                ok = false;
                break;
            }
        if (!ok) continue;

        std::vector<std::pair<PointId, Point>> out;
        out.reserve(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            out.emplace_back(static_cast<PointId>(i), pts[i]);
        return out;
    }
}

std::vector<Point> gen_queries(const Workload& w, std::size_t count,
                               const std::vector<std::pair<PointId, Point>>& data) {
    CoordSet data_set;
    for (const auto& [id, p] : data) data_set.insert(p);

    std::mt19937_64 g(splitmix64(w.seed ^ 0x71756572696573ull));
    std::vector<Point> queries;
    queries.reserve(count);

    if (w.dist == Workload::Dist::Exponential) {
        // Draw a batch, rescale by its own extremes, then keep the ones
        // disjoint from the data; repeat until enough.
        while (queries.size() < count) {
            CoordSet batch_seen;
            std::vector<Point> batch =
                raw_points(Workload::Dist::Exponential, count + 16, g, batch_seen);
            rescale_to_unit_square(batch);
            for (const Point p : batch) {
                if (queries.size() == count) break;
                if (!data_set.contains(p)) queries.push_back(p);
            }
        }
        return queries;
    }

    CoordSet seen;
    while (queries.size() < count) {
        const Point p{draw_unit(g), draw_unit(g)};
        if (!seen.insert(p)) continue;
        if (data_set.contains(p)) continue;
        queries.push_back(p);
    }
    return queries;
}

}  // namespace mvd
