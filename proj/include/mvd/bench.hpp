#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mvd/geometry.hpp"
#include "mvd/workload.hpp"

namespace mvd {

enum class IndexKind { Mvd, KdTree, Scan };

std::string to_string(IndexKind k);
std::optional<IndexKind> index_kind_from_string(const std::string& s);

/// An index answered differently from the linear-scan oracle. Raised before
/// any timing is accepted: a wrong answer aborts the cell, it never becomes
/// a slow row.
class BenchMismatchError : public std::runtime_error {
public:
    BenchMismatchError(const std::string& index, std::size_t n, std::size_t k_query,
                       Point query, const std::string& expected, const std::string& got)
        : std::runtime_error("bench: index '" + index + "' (n=" + std::to_string(n) +
                             ", k_query=" + std::to_string(k_query) + ") mismatch at query (" +
                             std::to_string(query.x) + ", " + std::to_string(query.y) +
                             "): expected " + expected + ", got " + got) {}
};

struct BenchRow {
    std::string index;
    std::size_t n = 0;
    std::size_t k_query = 1;  // 1 denotes single-NN queries
    std::size_t trials = 0;
    double mean_ns = 0, median_ns = 0, p95_ns = 0;
    double mean_dist_evals = 0, mean_visited = 0;
    double build_ms = 0;
    std::vector<double> raw_ns;  // per-query samples across all trials
};

struct BenchConfig {
    std::vector<IndexKind> indices{IndexKind::Mvd, IndexKind::KdTree, IndexKind::Scan};
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> k_list;  // empty: NN queries only
    Workload::Dist dist = Workload::Dist::Uniform;
    std::uint64_t seed = 0;
    std::size_t query_count = 1000;
    std::size_t trials = 5;
    std::uint32_t mvd_k = 100;
    std::size_t kd_leaf_capacity = 100;
    /// Data for Dist::File; sizes is then ignored in favor of the file size.
    std::optional<std::vector<std::pair<PointId, Point>>> file_points;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::string distribution;
    std::uint64_t seed = 0;
    std::size_t query_count = 0;
    std::size_t trials = 0;
    std::string notes;

    std::string to_csv() const;
    std::string to_markdown() const;
};

/// Runs the full measurement grid. Every answer is checked against the
/// linear-scan oracle before timing; counts are reproducible bit-for-bit
/// given the seed, wall times only in ordering trends.
BenchReport run_grid(const BenchConfig& config);

}  // namespace mvd
