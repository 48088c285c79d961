#include "mvd/kdtree.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "mvd/errors.hpp"
#include "mvd/mvd_index.hpp"

namespace mvd {

KdTree::KdTree(std::span<const std::pair<PointId, Point>> points,
               std::size_t leaf_capacity)
    : points_(points.begin(), points.end()),
      leaf_capacity_(leaf_capacity == 0 ? 1 : leaf_capacity) {
    if (!points_.empty())
        root_ = build_node(0, static_cast<std::uint32_t>(points_.size()), 0);
}

std::uint32_t KdTree::build_node(std::uint32_t begin, std::uint32_t end, int depth) {
    const std::uint32_t idx = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    {
        Node& n = nodes_[idx];
        n.begin = begin;
        n.end = end;
        n.min_x = n.max_x = points_[begin].second.x;
        n.min_y = n.max_y = points_[begin].second.y;
        for (std::uint32_t i = begin + 1; i < end; ++i) {
            const Point p = points_[i].second;
            n.min_x = std::min(n.min_x, p.x);
            n.max_x = std::max(n.max_x, p.x);
            n.min_y = std::min(n.min_y, p.y);
            n.max_y = std::max(n.max_y, p.y);
        }
    }
    if (end - begin <= leaf_capacity_) {
        nodes_[idx].leaf = true;
        return idx;
    }
    const std::uint32_t mid = begin + (end - begin) / 2;
    const int axis = depth % 2;
    std::nth_element(points_.begin() + begin, points_.begin() + mid,
                     points_.begin() + end,
                     [axis](const auto& a, const auto& b) {
                         return axis == 0 ? a.second.x < b.second.x
                                          : a.second.y < b.second.y;
                     });
    const std::uint32_t left = build_node(begin, mid, depth + 1);
    const std::uint32_t right = build_node(mid, end, depth + 1);
    nodes_[idx].left = left;
    nodes_[idx].right = right;
    return idx;
}

double KdTree::box_dist2(const Node& n, Point q) const {
    double dx = 0.0, dy = 0.0;
    if (q.x < n.min_x)
        dx = n.min_x - q.x;
    else if (q.x > n.max_x)
        dx = q.x - n.max_x;
    if (q.y < n.min_y)
        dy = n.min_y - q.y;
    else if (q.y > n.max_y)
        dy = q.y - n.max_y;
    return dx * dx + dy * dy;
}

std::vector<PointId> KdTree::knn(Point q, std::size_t k_query, QueryStats& stats) const {
    stats.reset();
    if (k_query < 1) throw std::invalid_argument("kd_knn: k_query must be >= 1");
    if (points_.empty()) throw EmptyIndexError("kd_knn: empty tree");

    CandidateList cand(k_query);
    using Entry = std::pair<double, std::uint32_t>;  // (box dist2, node)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    frontier.emplace(box_dist2(nodes_[root_], q), root_);

    while (!frontier.empty()) {
        const auto [d_box, ni] = frontier.top();
        frontier.pop();
        if (cand.full() && d_box > cand[cand.size() - 1].dist2) break;
        ++stats.points_visited;  // visited nodes
        const Node& n = nodes_[ni];
        if (n.leaf) {
            for (std::uint32_t i = n.begin; i < n.end; ++i) {
                ++stats.distance_evaluations;
                cand.try_insert(DistOrder{dist2(q, points_[i].second), points_[i].first});
            }
        } else {
            const double dl = box_dist2(nodes_[n.left], q);
            const double dr = box_dist2(nodes_[n.right], q);
            if (!cand.full() || dl <= cand[cand.size() - 1].dist2)
                frontier.emplace(dl, n.left);
            if (!cand.full() || dr <= cand[cand.size() - 1].dist2)
                frontier.emplace(dr, n.right);
        }
    }

    std::vector<PointId> ids;
    ids.reserve(cand.size());
    for (std::size_t i = 0; i < cand.size(); ++i) ids.push_back(cand[i].id);
    return ids;
}

PointId KdTree::nn(Point q, QueryStats& stats) const {
    if (points_.empty()) throw EmptyIndexError("kd_nn: empty tree");
    return knn(q, 1, stats)[0];
}

}  // namespace mvd
