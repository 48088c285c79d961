#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "mvd/bench.hpp"
#include "mvd/workload.hpp"
#include "oracles.hpp"

using namespace mvd;

namespace {

double coordinate_mean(const std::vector<std::pair<PointId, Point>>& pts, bool x_axis) {
    double s = 0;
    for (const auto& [id, p] : pts) s += x_axis ? p.x : p.y;
    return s / static_cast<double>(pts.size());
}

double coordinate_skewness(const std::vector<std::pair<PointId, Point>>& pts,
                           bool x_axis) {
    const double mean = coordinate_mean(pts, x_axis);
    double m2 = 0, m3 = 0;
    for (const auto& [id, p] : pts) {
        const double d = (x_axis ? p.x : p.y) - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    const double n = static_cast<double>(pts.size());
    m2 /= n;
    m3 /= n;
    return m3 / std::pow(m2, 1.5);
}

}  // namespace

TEST_CASE("gen_points is deterministic and duplicate-free") {
    Workload w;
    w.dist = Workload::Dist::Uniform;
    w.n = 4;
    w.seed = 77;
    const auto a = gen_points(w);
    const auto b = gen_points(w);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].first == b[i].first);
        CHECK(a[i].second == b[i].second);
    }

    w.n = 5000;
    std::set<std::pair<double, double>> seen;
    for (const auto& [id, p] : gen_points(w)) CHECK(seen.emplace(p.x, p.y).second);
}

TEST_CASE("uniform coordinates average near one half") {
    Workload w;
    w.dist = Workload::Dist::Uniform;
    w.n = 10000;
    w.seed = 3;
    const auto pts = gen_points(w);
    CHECK(coordinate_mean(pts, true) > 0.48);
    CHECK(coordinate_mean(pts, true) < 0.52);
    CHECK(coordinate_mean(pts, false) > 0.48);
    CHECK(coordinate_mean(pts, false) < 0.52);
}

TEST_CASE("exponential data is skewed and fits the unit square") {
    Workload w;
    w.dist = Workload::Dist::Exponential;
    w.n = 10000;
    w.seed = 4;
    const auto pts = gen_points(w);
    CHECK(coordinate_skewness(pts, true) > 1.0);
    CHECK(coordinate_skewness(pts, false) > 1.0);
    for (const auto& [id, p] : pts) {
        CHECK(p.x >= 0.0);
        CHECK(p.x <= 1.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y <= 1.0);
    }
}

TEST_CASE("queries avoid data coordinates and follow the seed") {
    Workload w;
    w.dist = Workload::Dist::Uniform;
    w.n = 500;
    w.seed = 9;
    const auto pts = gen_points(w);
    const auto qa = gen_queries(w, 200, pts);
    const auto qb = gen_queries(w, 200, pts);
    REQUIRE(qa.size() == 200);
    std::set<std::pair<double, double>> data;
    for (const auto& [id, p] : pts) data.emplace(p.x, p.y);
    for (std::size_t i = 0; i < qa.size(); ++i) {
        CHECK(qa[i] == qb[i]);
        CHECK(data.count({qa[i].x, qa[i].y}) == 0);
    }
}

TEST_CASE("run_grid smoke test produces one row per cell") {
    BenchConfig config;
    config.sizes = {10, 100};
    config.seed = 5;
    config.trials = 1;
    config.query_count = 50;
    config.mvd_k = 10;
    const BenchReport report = run_grid(config);
    CHECK(report.rows.size() == 2 * 3);  // sizes x {mvd, kdtree, scan}
    for (const BenchRow& r : report.rows) {
        CHECK(r.k_query == 1);
        CHECK(r.mean_dist_evals > 0);
        CHECK(r.raw_ns.size() == config.trials * config.query_count);
        CHECK(r.mean_ns > 0);
    }
}

TEST_CASE("run_grid kNN cells mirror the k list") {
    BenchConfig config;
    config.sizes = {300};
    config.k_list = {2, 4, 8};
    config.seed = 6;
    config.trials = 1;
    config.query_count = 40;
    config.mvd_k = 10;
    config.indices = {IndexKind::Mvd, IndexKind::Scan};
    const BenchReport report = run_grid(config);
    CHECK(report.rows.size() == 3 * 2);
    for (const BenchRow& r : report.rows) CHECK(r.n == 300);
}

TEST_CASE("exponential-data cells cross-check against the oracle too") {
    BenchConfig config;
    config.sizes = {200};
    config.k_list = {4};
    config.dist = Workload::Dist::Exponential;
    config.seed = 7;
    config.trials = 1;
    config.query_count = 60;
    config.mvd_k = 10;
    const BenchReport report = run_grid(config);
    CHECK(report.rows.size() == 3);
}

TEST_CASE("cost counters reproduce bit-for-bit across runs") {
    BenchConfig config;
    config.sizes = {400};
    config.k_list = {2, 8};
    config.seed = 11;
    config.trials = 1;
    config.query_count = 30;
    config.mvd_k = 10;
    const BenchReport a = run_grid(config);
    const BenchReport b = run_grid(config);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].mean_dist_evals == b.rows[i].mean_dist_evals);
        CHECK(a.rows[i].mean_visited == b.rows[i].mean_visited);
    }
}

TEST_CASE("CSV schema is stable") {
    BenchConfig config;
    config.sizes = {10};
    config.seed = 8;
    config.trials = 1;
    config.query_count = 5;
    config.mvd_k = 10;
    const BenchReport report = run_grid(config);
    const std::string csv = report.to_csv();
    CHECK(csv.rfind("index,n,k_query,trials,mean_ns,median_ns,p95_ns,"
                    "mean_dist_evals,mean_visited,build_ms\n",
                    0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
    const std::string md = report.to_markdown();
    CHECK(md.find("| n |") != std::string::npos);
    CHECK(md.find("mvd") != std::string::npos);
}

TEST_CASE("file workloads are routed to ingestion") {
    Workload w;
    w.dist = Workload::Dist::File;
    w.n = 5;
    CHECK_THROWS_AS(gen_points(w), std::invalid_argument);
}
