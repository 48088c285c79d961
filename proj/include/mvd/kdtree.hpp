#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mvd/geometry.hpp"
#include "mvd/query_stats.hpp"

namespace mvd {

/// Bulk-built kd-tree baseline: median-of-coordinates splits with axis
/// alternation and best-first NN/kNN with bounding-box distance pruning.
/// Answers are exact under (dist2, id): a subtree is pruned only when its
/// box distance strictly exceeds the current k-th best distance, so
/// equal-distance candidates with smaller ids are never lost.
class KdTree {
public:
    explicit KdTree(std::span<const std::pair<PointId, Point>> points,
                    std::size_t leaf_capacity = 100);

    PointId nn(Point q, QueryStats& stats) const;
    /// The min(k_query, n) nearest ids ascending by (dist2, id). In stats,
    /// points_visited counts visited tree nodes.
    std::vector<PointId> knn(Point q, std::size_t k_query, QueryStats& stats) const;

    std::size_t size() const { return points_.size(); }
    std::size_t leaf_capacity() const { return leaf_capacity_; }

private:
    struct Node {
        double min_x, min_y, max_x, max_y;  // bounding box of the subtree
        std::uint32_t begin, end;           // point range (leaf)
        std::uint32_t left = 0, right = 0;  // children (internal)
        bool leaf = false;
    };

    std::uint32_t build_node(std::uint32_t begin, std::uint32_t end, int depth);
    double box_dist2(const Node& n, Point q) const;

    std::vector<std::pair<PointId, Point>> points_;  // permuted during build
    std::vector<Node> nodes_;
    std::size_t leaf_capacity_;
    std::uint32_t root_ = 0;
};

}  // namespace mvd
