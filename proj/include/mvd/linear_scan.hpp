#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mvd/geometry.hpp"
#include "mvd/query_stats.hpp"

namespace mvd {

/// Exhaustive full-search baseline. The answers of every other index are
/// defined to match this one under the (dist2, id) order, which makes it the
/// oracle for all equivalence tests.
class LinearScanIndex {
public:
    LinearScanIndex() = default;
    explicit LinearScanIndex(std::span<const std::pair<PointId, Point>> points)
        : points_(points.begin(), points.end()) {}

    PointId nn(Point q, QueryStats& stats) const;
    /// The min(k_query, n) nearest ids ascending by (dist2, id).
    std::vector<PointId> knn(Point q, std::size_t k_query, QueryStats& stats) const;

    std::size_t size() const { return points_.size(); }

private:
    std::vector<std::pair<PointId, Point>> points_;
};

}  // namespace mvd
