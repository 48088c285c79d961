#pragma once

#include <cstdint>

namespace mvd {

/// Per-query cost counters. Distance-evaluation counts are the portable
/// comparison metric; a point's distance is evaluated at most once per walk,
/// so the counter is a faithful proxy for query cost. For tree baselines
/// points_visited counts visited nodes instead.
struct QueryStats {
    std::uint64_t distance_evaluations = 0;
    std::uint64_t points_visited = 0;
    std::uint64_t layers_traversed = 0;

    void reset() { *this = QueryStats{}; }
};

}  // namespace mvd
