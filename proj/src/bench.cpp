#include "mvd/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>

#include "mvd/kdtree.hpp"
#include "mvd/linear_scan.hpp"
#include "mvd/mvd_index.hpp"
#include "mvd/rng.hpp"

namespace mvd {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto idx = std::min(v.size() - 1, static_cast<std::size_t>(q * static_cast<double>(v.size())));
    return v[idx];
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::string ids_to_string(const std::vector<PointId>& ids) {
    std::string s = "[";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(ids[i]);
    }
    return s + "]";
}

struct CellIndexes {
    std::optional<MvdIndex> mvd;
    std::optional<KdTree> kd;
    std::optional<LinearScanIndex> scan;
    double build_ms_mvd = 0, build_ms_kd = 0, build_ms_scan = 0;
};

std::vector<PointId> answer(const CellIndexes& cell, IndexKind kind, Point q,
                            std::size_t k_query, QueryStats& st) {
    if (k_query == 1) {
        PointId id = 0;
        switch (kind) {
            case IndexKind::Mvd: id = cell.mvd->nn(q, st); break;
            case IndexKind::KdTree: id = cell.kd->nn(q, st); break;
            case IndexKind::Scan: id = cell.scan->nn(q, st); break;
        }
        return {id};
    }
    switch (kind) {
        case IndexKind::Mvd: return cell.mvd->knn(q, k_query, st).ids;
        case IndexKind::KdTree: return cell.kd->knn(q, k_query, st);
        case IndexKind::Scan: return cell.scan->knn(q, k_query, st);
    }
    return {};
}

}  // namespace

std::string to_string(IndexKind k) {
    switch (k) {
        case IndexKind::Mvd: return "mvd";
        case IndexKind::KdTree: return "kdtree";
        case IndexKind::Scan: return "scan";
    }
    return "?";
}

std::optional<IndexKind> index_kind_from_string(const std::string& s) {
    if (s == "mvd") return IndexKind::Mvd;
    if (s == "kdtree") return IndexKind::KdTree;
    if (s == "scan") return IndexKind::Scan;
    return std::nullopt;
}

BenchReport run_grid(const BenchConfig& config) {
    BenchReport report;
    report.distribution = to_string(config.dist);
    report.seed = config.seed;
    report.query_count = config.query_count;
    report.trials = config.trials;
    report.notes =
        "exp distribution: per-coordinate rate-1 exponential, min-max rescaled "
        "into the unit square; k_query=1 rows are single-NN queries";

    std::vector<std::size_t> sizes = config.sizes;
    if (config.file_points) sizes = {config.file_points->size()};

    std::vector<std::size_t> ks = config.k_list;
    if (ks.empty()) ks = {1};

    for (const std::size_t n : sizes) {
        Workload w;
        w.dist = config.dist;
        w.n = n;
        w.seed = splitmix64(config.seed ^ (0xce11ull + n));

        const std::vector<std::pair<PointId, Point>> points =
            config.file_points ? *config.file_points : gen_points(w);
        const std::vector<Point> queries = gen_queries(w, config.query_count, points);

        CellIndexes cell;
        for (const IndexKind kind : config.indices) {
            const auto t0 = Clock::now();
            switch (kind) {
                case IndexKind::Mvd:
                    cell.mvd = MvdIndex::build(points, config.mvd_k, w.seed);
                    cell.build_ms_mvd = elapsed_ms(t0, Clock::now());
                    break;
                case IndexKind::KdTree:
                    cell.kd = KdTree(points, config.kd_leaf_capacity);
                    cell.build_ms_kd = elapsed_ms(t0, Clock::now());
                    break;
                case IndexKind::Scan:
                    cell.scan = LinearScanIndex(points);
                    cell.build_ms_scan = elapsed_ms(t0, Clock::now());
                    break;
            }
        }
        LinearScanIndex oracle(points);

        for (const std::size_t k_query : ks) {
            std::vector<std::vector<PointId>> expected(queries.size());
            {
                QueryStats st;
                for (std::size_t qi = 0; qi < queries.size(); ++qi) {
                    if (k_query == 1)
                        expected[qi] = {oracle.nn(queries[qi], st)};
                    else
                        expected[qi] = oracle.knn(queries[qi], k_query, st);
                }
            }

            for (const IndexKind kind : config.indices) {
                BenchRow row;
                row.index = to_string(kind);
                row.n = points.size();
                row.k_query = k_query;
                row.trials = config.trials;
                switch (kind) {
                    case IndexKind::Mvd: row.build_ms = cell.build_ms_mvd; break;
                    case IndexKind::KdTree: row.build_ms = cell.build_ms_kd; break;
                    case IndexKind::Scan: row.build_ms = cell.build_ms_scan; break;
                }

                // Correctness pass: oracle equality gates the timing runs and
                // collects the (deterministic) cost counters.
                double evals = 0, visited = 0;
                QueryStats st;
                for (std::size_t qi = 0; qi < queries.size(); ++qi) {
                    const std::vector<PointId> got =
                        answer(cell, kind, queries[qi], k_query, st);
                    if (got != expected[qi])
                        throw BenchMismatchError(row.index, points.size(), k_query,
                                                 queries[qi], ids_to_string(expected[qi]),
                                                 ids_to_string(got));
                    evals += static_cast<double>(st.distance_evaluations);
                    visited += static_cast<double>(st.points_visited);
                }
                row.mean_dist_evals = evals / static_cast<double>(queries.size());
                row.mean_visited = visited / static_cast<double>(queries.size());

                row.raw_ns.reserve(config.trials * queries.size());
                for (std::size_t trial = 0; trial < config.trials; ++trial) {
                    for (const Point q : queries) {
                        const auto t0 = Clock::now();
                        answer(cell, kind, q, k_query, st);
                        const auto t1 = Clock::now();
                        row.raw_ns.push_back(
                            std::chrono::duration<double, std::nano>(t1 - t0).count());
                    }
                }
                row.mean_ns = mean_of(row.raw_ns);
                row.median_ns = quantile(row.raw_ns, 0.5);
                row.p95_ns = quantile(row.raw_ns, 0.95);
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

std::string BenchReport::to_csv() const {
    std::string out =
        "index,n,k_query,trials,mean_ns,median_ns,p95_ns,mean_dist_evals,"
        "mean_visited,build_ms\n";
    char buf[256];
    for (const BenchRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f\n",
                      r.index.c_str(), r.n, r.k_query, r.trials, r.mean_ns, r.median_ns,
                      r.p95_ns, r.mean_dist_evals, r.mean_visited, r.build_ms);
        out += buf;
    }
    return out;
}

std::string BenchReport::to_markdown() const {
    std::string out;
    char buf[256];

    std::vector<std::string> indices;
    for (const BenchRow& r : rows)
        if (std::find(indices.begin(), indices.end(), r.index) == indices.end())
            indices.push_back(r.index);

    const auto cell = [&](std::size_t n, std::size_t k,
                          const std::string& index) -> const BenchRow* {
        for (const BenchRow& r : rows)
            if (r.n == n && r.k_query == k && r.index == index) return &r;
        return nullptr;
    };

    // NN table: rows are sizes.
    std::set<std::size_t> nn_sizes;
    for (const BenchRow& r : rows)
        if (r.k_query == 1) nn_sizes.insert(r.n);
    if (!nn_sizes.empty()) {
        out += "## Mean NN query time (ns), " + distribution + " data\n\n| n |";
        for (const auto& ix : indices) out += " " + ix + " |";
        out += "\n|---|";
        for (std::size_t i = 0; i < indices.size(); ++i) out += "---|";
        out += "\n";
        for (const std::size_t n : nn_sizes) {
            out += "| " + std::to_string(n) + " |";
            for (const auto& ix : indices) {
                const BenchRow* r = cell(n, 1, ix);
                if (r) {
                    std::snprintf(buf, sizeof buf, " %.0f |", r->mean_ns);
                    out += buf;
                } else {
                    out += " - |";
                }
            }
            out += "\n";
        }
        out += "\n";
    }

    // kNN tables: one per size, rows are k values.
    std::set<std::size_t> knn_sizes;
    std::set<std::size_t> k_values;
    for (const BenchRow& r : rows)
        if (r.k_query > 1) {
            knn_sizes.insert(r.n);
            k_values.insert(r.k_query);
        }
    for (const std::size_t n : knn_sizes) {
        out += "## Mean kNN query time (ns), " + distribution +
               " data, n=" + std::to_string(n) + "\n\n| k |";
        for (const auto& ix : indices) out += " " + ix + " |";
        out += "\n|---|";
        for (std::size_t i = 0; i < indices.size(); ++i) out += "---|";
        out += "\n";
        for (const std::size_t k : k_values) {
            const bool any = std::any_of(rows.begin(), rows.end(), [&](const BenchRow& r) {
                return r.n == n && r.k_query == k;
            });
            if (!any) continue;
            out += "| " + std::to_string(k) + " |";
            for (const auto& ix : indices) {
                const BenchRow* r = cell(n, k, ix);
                if (r) {
                    std::snprintf(buf, sizeof buf, " %.0f |", r->mean_ns);
                    out += buf;
                } else {
                    out += " - |";
                }
            }
            out += "\n";
        }
        out += "\n";
    }
    return out;
}

}  // namespace mvd
