#include "mvd/linear_scan.hpp"

#include <algorithm>
#include <stdexcept>

#include "mvd/errors.hpp"

namespace mvd {

PointId LinearScanIndex::nn(Point q, QueryStats& stats) const {
    stats.reset();
    if (points_.empty()) throw EmptyIndexError("scan_nn: empty point set");
    DistOrder best{dist2(q, points_[0].second), points_[0].first};
    for (std::size_t i = 1; i < points_.size(); ++i) {
        const DistOrder cand{dist2(q, points_[i].second), points_[i].first};
        if (cand < best) best = cand;
    }
    stats.distance_evaluations = points_.size();
    stats.points_visited = points_.size();
    return best.id;
}

std::vector<PointId> LinearScanIndex::knn(Point q, std::size_t k_query,
                                          QueryStats& stats) const {
    stats.reset();
    if (k_query < 1) throw std::invalid_argument("scan_knn: k_query must be >= 1");
    std::vector<DistOrder> all;
    all.reserve(points_.size());
    for (const auto& [id, p] : points_) all.push_back(DistOrder{dist2(q, p), id});
    const std::size_t k = std::min(k_query, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k),
                      all.end());
    stats.distance_evaluations = points_.size();
    stats.points_visited = points_.size();
    std::vector<PointId> ids;
    ids.reserve(k);
    for (std::size_t i = 0; i < k; ++i) ids.push_back(all[i].id);
    return ids;
}

}  // namespace mvd
