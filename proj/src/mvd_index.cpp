#include "mvd/mvd_index.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "mvd/errors.hpp"
#include "mvd/rng.hpp"

namespace mvd {

bool CandidateList::try_insert(DistOrder e) {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), e);
    if (entries_.size() == cap_ && it == entries_.end()) return false;
    entries_.insert(it, e);
    if (entries_.size() > cap_) entries_.pop_back();
    return true;
}

namespace {

// Incremental expansion within one layer: neighbors of finalized ranks feed
// the candidate list until the wanted prefix is final or the component is
// exhausted. `seed` must already be the layer's exact nearest neighbor.
std::vector<DistOrder> expand_knn(const Triangulation& layer, Point q,
                                  std::size_t k_query, PointId seed,
                                  QueryStats& stats) {
    CandidateList cand(k_query);
    cand.try_insert(DistOrder{dist2(q, layer.point_of(seed)), seed});
    std::unordered_set<PointId> visited{seed};
    for (std::size_t rank = 0; rank + 1 < k_query && rank < cand.size(); ++rank) {
        layer.for_each_neighbor(cand[rank].id, [&](PointId u) {
            if (!visited.insert(u).second) return;
            const double d = dist2(q, layer.point_of(u));
            ++stats.distance_evaluations;
            ++stats.points_visited;
            cand.try_insert(DistOrder{d, u});
        });
    }
    return cand.entries();
}

}  // namespace

MvdIndex::MvdIndex(std::uint32_t k, std::uint64_t seed, MvdOptions options)
    : k_(k),
      seed_(seed),
      rng_(splitmix64(seed ^ 0x6d76642d6f705ull)),
      options_(options) {}

double MvdIndex::draw_unit() { return mvd::draw_unit(rng_); }

MvdIndex MvdIndex::build(std::span<const std::pair<PointId, Point>> points,
                         std::uint32_t k, std::uint64_t seed, MvdOptions options) {
    if (k < 2) throw std::invalid_argument("construction parameter k must be >= 2");
    MvdIndex idx(k, seed, options);
    idx.layers_.push_back(Triangulation::bulk_build(points));
    for (const auto& [id, p] : points) {
        if (!idx.any_id_seen_ || id > idx.max_id_seen_) idx.max_id_seen_ = id;
        idx.any_id_seen_ = true;
    }

    std::vector<PointId> current = idx.layers_[0].vertex_ids();
    std::size_t layer_index = 1;
    while (current.size() > k) {
        const std::size_t m = (current.size() + k - 1) / k;
        std::mt19937_64 engine(splitmix64(seed) + layer_index);
        std::vector<PointId> sampled =
            sample_without_replacement(current, m, engine);
        std::sort(sampled.begin(), sampled.end());

        std::vector<std::pair<PointId, Point>> subset;
        subset.reserve(sampled.size());
        for (const PointId id : sampled)
            subset.emplace_back(id, idx.layers_[0].point_of(id));
        idx.layers_.push_back(Triangulation::bulk_build(subset));
        current = std::move(sampled);
        ++layer_index;
    }
    return idx;
}

MvdIndex MvdIndex::from_layers(std::span<const std::pair<PointId, Point>> points,
                               const std::vector<std::vector<PointId>>& layer_ids,
                               std::uint32_t k, std::uint64_t seed,
                               PointId max_id_seen, MvdOptions options) {
    if (k < 2) throw std::invalid_argument("construction parameter k must be >= 2");
    if (layer_ids.empty()) throw std::invalid_argument("at least one layer required");
    if (layer_ids[0].size() != points.size())
        throw std::invalid_argument("layer 0 must cover the full point set");

    MvdIndex idx(k, seed, options);
    idx.layers_.push_back(Triangulation::bulk_build(points));
    for (const auto& [id, p] : points) {
        if (!idx.any_id_seen_ || id > idx.max_id_seen_) idx.max_id_seen_ = id;
        idx.any_id_seen_ = true;
    }
    if (max_id_seen > idx.max_id_seen_ || !idx.any_id_seen_) {
        idx.max_id_seen_ = max_id_seen;
        idx.any_id_seen_ = true;
    }
    for (const PointId id : layer_ids[0])
        if (!idx.layers_[0].contains(id))
            throw std::invalid_argument("layer 0 lists unknown id " + std::to_string(id));

    for (std::size_t i = 1; i < layer_ids.size(); ++i) {
        std::vector<std::pair<PointId, Point>> subset;
        subset.reserve(layer_ids[i].size());
        for (const PointId id : layer_ids[i]) {
            if (!idx.layers_[i - 1].contains(id))
                throw std::invalid_argument("layer nesting violated for id " +
                                            std::to_string(id));
            subset.emplace_back(id, idx.layers_[0].point_of(id));
        }
        idx.layers_.push_back(Triangulation::bulk_build(subset));
    }
    return idx;
}

PointId MvdIndex::vd_nn(const Triangulation& layer, Point q,
                        std::optional<PointId> start, QueryStats& stats) {
    if (layer.empty()) throw EmptyIndexError("vd_nn: empty layer");
    const PointId s = start ? *start : layer.min_vertex_id();
    return layer.nearest(q, s, &stats);
}

PointId MvdIndex::nn(Point q, QueryStats& stats) const {
    stats.reset();
    if (layers_[0].empty()) throw EmptyIndexError("nn: empty index");
    std::optional<PointId> current;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        current = vd_nn(layers_[i], q, current, stats);
        ++stats.layers_traversed;
    }
    return *current;
}

KnnResult MvdIndex::knn(Point q, std::size_t k_query, QueryStats& stats) const {
    if (k_query < 1) throw std::invalid_argument("knn: k_query must be >= 1");
    stats.reset();
    if (layers_[0].empty()) throw EmptyIndexError("knn: empty index");

    std::optional<PointId> current;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        current = vd_nn(layers_[i], q, current, stats);
        ++stats.layers_traversed;
    }

    const std::vector<DistOrder> found =
        expand_knn(layers_[0], q, k_query, *current, stats);
    KnnResult result;
    result.ids.reserve(found.size());
    for (const DistOrder& e : found) result.ids.push_back(e.id);
    result.complete = result.ids.size() == k_query;
    return result;
}

void MvdIndex::insert(PointId id, Point p) {
    if (any_id_seen_ && id <= max_id_seen_)
        throw IdCollisionError(id, "ids are assigned monotonically and never reused");

    // Walk the upper layers once; the results seed both the layer-0 insert
    // and any promotions.
    std::vector<std::optional<PointId>> hints(layers_.size());
    if (!layers_[0].empty() && layers_.size() > 1) {
        QueryStats st;
        std::optional<PointId> current;
        for (std::size_t i = layers_.size(); i-- > 1;) {
            current = vd_nn(layers_[i], p, current, st);
            hints[i] = current;
        }
    }
    layers_[0].insert_vertex(id, p, layers_.size() > 1 ? hints[1] : std::nullopt);
    max_id_seen_ = id;
    any_id_seen_ = true;

    for (std::size_t i = 1;; ++i) {
        if (draw_unit() >= 1.0 / k_) break;
        if (i < layers_.size()) {
            layers_[i].insert_vertex(id, p, hints[i]);
        } else {
            Triangulation top;
            top.insert_vertex(id, p);
            layers_.push_back(std::move(top));
            break;
        }
    }
}

PointId MvdIndex::promotion_candidate(const Triangulation& source,
                                      const Triangulation& target, Point p) const {
    QueryStats st;
    std::size_t want = 1;
    std::size_t checked = 0;
    while (true) {
        const PointId seed = vd_nn(source, p, std::nullopt, st);
        const std::vector<DistOrder> ranked = expand_knn(source, p, want, seed, st);
        for (std::size_t r = checked; r < ranked.size(); ++r)
            if (!target.contains(ranked[r].id)) return ranked[r].id;
        if (ranked.size() < want) return kInvalidPointId;  // source exhausted
        checked = ranked.size();
        want *= 2;
    }
}

void MvdIndex::erase(PointId id) {
    if (!layers_[0].contains(id)) throw UnknownPointError(id);
    const Point p = layers_[0].point_of(id);
    layers_[0].delete_vertex(id);

    for (std::size_t i = 1; i < layers_.size(); ++i) {
        Triangulation& layer = layers_[i];
        if (layer.contains(id)) {
            layer.delete_vertex(id);
            if (draw_unit() < 1.0 - 1.0 / k_) {
                const PointId repl = promotion_candidate(layers_[i - 1], layer, p);
                if (repl != kInvalidPointId)
                    layer.insert_vertex(repl, layers_[i - 1].point_of(repl));
            }
        } else if (options_.demotion_repair && !layer.empty() &&
                   draw_unit() < 1.0 / k_) {
            QueryStats st;
            const PointId victim = vd_nn(layer, p, std::nullopt, st);
            const bool pinned =
                i + 1 < layers_.size() && layers_[i + 1].contains(victim);
            if (!pinned) layer.delete_vertex(victim);
        }
    }
    while (layers_.size() > 1 && layers_.back().empty()) layers_.pop_back();
}

std::vector<std::size_t> MvdIndex::layer_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(layers_.size());
    for (const Triangulation& layer : layers_) sizes.push_back(layer.vertex_count());
    return sizes;
}

void MvdIndex::check_invariants() const {
    if (layers_.empty()) throw std::logic_error("mvd: no layers");
    for (const Triangulation& layer : layers_) layer.check_structure();
    for (std::size_t i = 1; i < layers_.size(); ++i) {
        if (layers_[i].empty())
            throw std::logic_error("mvd: empty upper layer " + std::to_string(i));
        for (const PointId id : layers_[i].vertex_ids())
            if (!layers_[i - 1].contains(id))
                throw std::logic_error("mvd: nesting violated at layer " +
                                       std::to_string(i) + " id " + std::to_string(id));
    }
}

}  // namespace mvd
