#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvd/geometry.hpp"

namespace mvd {

/// A fully seeded synthetic workload: same fields, same points and queries.
struct Workload {
    enum class Dist { Uniform, Exponential, File };

    Dist dist = Dist::Uniform;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t query_count = 1000;
    std::optional<std::size_t> k_query;
};

std::string to_string(Workload::Dist d);

/// Synthetic data points with dense ids 0..n-1. Uniform: i.i.d. on the unit
/// square. Exponential: i.i.d. rate-1 per coordinate, min-max rescaled into
/// the unit square. Duplicates are rejected by re-draw. File distribution is
/// handled by the CLI ingestion path, not here.
std::vector<std::pair<PointId, Point>> gen_points(const Workload& w);

/// Queries drawn i.i.d. from the workload's distribution from an independent
/// substream, re-drawn while they collide with a data point.
std::vector<Point> gen_queries(const Workload& w, std::size_t count,
                               const std::vector<std::pair<PointId, Point>>& data);

}  // namespace mvd
