#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "mvd/geometry.hpp"
#include "mvd/query_stats.hpp"
#include "mvd/triangulation.hpp"

namespace mvd {

/// Fixed-capacity list of query candidates kept sorted ascending by
/// (dist2, id). Used by the incremental kNN expansion: once the list is
/// full, anything past the capacity-th best is dropped.
class CandidateList {
public:
    explicit CandidateList(std::size_t capacity) : cap_(capacity) {}

    /// Sorted insert; drops the entry (or the displaced tail) when the list
    /// is at capacity. Returns true when the entry was kept.
    bool try_insert(DistOrder e);

    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return cap_; }
    bool full() const { return entries_.size() == cap_; }
    const DistOrder& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<DistOrder>& entries() const { return entries_; }

private:
    std::size_t cap_;
    std::vector<DistOrder> entries_;
};

struct KnnResult {
    std::vector<PointId> ids;  // ascending by (dist2, id)
    /// False when the index holds fewer points than requested; `ids` then
    /// lists every indexed point.
    bool complete = true;
};

struct MvdOptions {
    /// Ratio-repair demotion on deletes (the layer-thinning branch). Can be
    /// disabled; promotions on delete are always performed.
    bool demotion_repair = true;
};

/// Multi-layer Voronoi diagram index. Layer 0 triangulates the full point
/// set; each layer above triangulates a ~1/k uniform sample of the one
/// below, so queries descend layer by layer the way a skip list does, each
/// walk seeded by the previous layer's answer. All queries are exact under
/// the (dist2, id) order.
///
/// Concurrency: nn/knn are const and may run concurrently, each with its own
/// QueryStats; insert/erase need exclusive access.
class MvdIndex {
public:
    /// Builds the layer stack: layer 0 holds every point, and sampling
    /// (uniform, without replacement, size ceil(prev/k)) repeats until a
    /// layer has at most k points. Requires k >= 2 and distinct coordinates.
    static MvdIndex build(std::span<const std::pair<PointId, Point>> points,
                          std::uint32_t k, std::uint64_t seed,
                          MvdOptions options = {});

    /// Rebuilds an index from explicit per-layer id sets (snapshot load).
    /// Validates nesting and that layer 0 covers `points`.
    static MvdIndex from_layers(std::span<const std::pair<PointId, Point>> points,
                                const std::vector<std::vector<PointId>>& layer_ids,
                                std::uint32_t k, std::uint64_t seed,
                                PointId max_id_seen, MvdOptions options = {});

    /// Exact nearest neighbor of q in one layer: greedy walk from `start`
    /// (default: the layer's smallest id). Every distance evaluation is
    /// counted in `stats`.
    static PointId vd_nn(const Triangulation& layer, Point q,
                         std::optional<PointId> start, QueryStats& stats);

    /// Exact nearest neighbor in the full set: layered descent from the top
    /// layer down to and including layer 0.
    PointId nn(Point q, QueryStats& stats) const;

    /// The k_query nearest points ascending by (dist2, id), found by
    /// expanding layer-0 neighbors of already-finalized ranks.
    KnnResult knn(Point q, std::size_t k_query, QueryStats& stats) const;

    /// Inserts into layer 0 (hinted by the layered descent), then promotes
    /// the point upward while independent Bernoulli(1/k) draws succeed; a
    /// promotion past the top starts a new one-point layer.
    void insert(PointId id, Point p);

    /// Removes the point from every layer holding it. Where it was removed
    /// from an upper layer, the nearest lower-layer point is promoted with
    /// probability 1-1/k (skipping ids already present); where it was
    /// absent, a 1/k draw demotes the layer's nearest point to p unless that
    /// would break nesting. Empty top layers are dropped.
    void erase(PointId id);

    std::size_t size() const { return layers_[0].vertex_count(); }
    bool empty() const { return layers_[0].empty(); }
    std::size_t layer_count() const { return layers_.size(); }
    const Triangulation& layer(std::size_t i) const { return layers_[i]; }
    std::vector<std::size_t> layer_sizes() const;
    std::uint32_t k() const { return k_; }
    std::uint64_t seed() const { return seed_; }
    PointId max_id_seen() const { return max_id_seen_; }
    const MvdOptions& options() const { return options_; }
    bool contains(PointId id) const { return layers_[0].contains(id); }
    Point point_of(PointId id) const { return layers_[0].point_of(id); }

    /// Verifies the nesting invariant and per-layer structure; throws
    /// std::logic_error on violation. Intended for tests.
    void check_invariants() const;

private:
    MvdIndex(std::uint32_t k, std::uint64_t seed, MvdOptions options);

    double draw_unit();
    PointId promotion_candidate(const Triangulation& source,
                                const Triangulation& target, Point p) const;

    std::vector<Triangulation> layers_;  // [0] = full set
    std::uint32_t k_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
    MvdOptions options_;
    PointId max_id_seen_ = 0;
    bool any_id_seen_ = false;
};

}  // namespace mvd
