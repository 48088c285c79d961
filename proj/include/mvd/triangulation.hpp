#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mvd/geometry.hpp"
#include "mvd/query_stats.hpp"

namespace mvd {

/// Incremental 2-D Delaunay triangulation with vertex insertion, vertex
/// deletion, adjacency enumeration and walk-based point location. The dual
/// graph of the Voronoi diagram of its vertices: two vertices are adjacent
/// exactly when their Voronoi cells share an edge.
///
/// The unbounded face is closed by a symbolic infinite vertex: every hull
/// edge carries a ghost triangle, so each vertex has a topologically closed
/// triangle fan and hull updates need no special cases. Sets of fewer than
/// three points and fully collinear sets are stored as an ordered point list
/// instead; such layers still answer neighbor/nearest queries.
///
/// Cocircular ties are broken symbolically by point id (see
/// in_circle_perturbed), which makes the triangulation of any vertex set
/// unique and independent of insertion order.
///
/// Concurrency: any number of concurrent readers or one writer.
class Triangulation {
public:
    Triangulation();

    /// Builds from scratch. Throws DuplicatePointError / IdCollisionError on
    /// bad input; accepts any count including zero.
    static Triangulation bulk_build(std::span<const std::pair<PointId, Point>> points);

    /// Inserts one vertex, restoring the Delaunay property. `hint` is an
    /// existing vertex near p used to start point location.
    void insert_vertex(PointId id, Point p, std::optional<PointId> hint = std::nullopt);

    /// Removes one vertex and re-triangulates its star.
    void delete_vertex(PointId id);

    /// Ids Delaunay-adjacent to `id`, ascending. Never contains `id` itself
    /// or the symbolic boundary vertex. In list layout: the (at most two)
    /// list-adjacent points.
    std::vector<PointId> neighbors(PointId id) const;

    /// Calls fn(neighbor_id) for each neighbor; enumeration order is
    /// unspecified. Allocation-free variant of neighbors().
    void for_each_neighbor(PointId id, const std::function<void(PointId)>& fn) const;

    /// The vertex whose Voronoi cell contains q, i.e. the nearest vertex
    /// under (dist2, id). Throws EmptyIndexError when empty.
    PointId locate(Point q, std::optional<PointId> hint = std::nullopt) const;

    /// Greedy proximity walk from `start`: repeatedly moves to the best
    /// strictly improving neighbor under (dist2, id) and returns the exact
    /// nearest vertex. Counts every unique distance evaluation in `stats`
    /// when non-null.
    PointId nearest(Point q, PointId start, QueryStats* stats) const;

    bool contains(PointId id) const;
    Point point_of(PointId id) const;
    std::size_t vertex_count() const { return n_live_; }
    bool empty() const { return n_live_ == 0; }
    PointId min_vertex_id() const;
    std::vector<PointId> vertex_ids() const;  // ascending

    /// True while the vertices are kept as an ordered list (fewer than three
    /// points, or all collinear).
    bool degenerate_layout() const { return !proper_; }

    std::size_t finite_triangle_count() const { return n_finite_tris_; }
    /// Finite edge count; for list layout the path edges.
    std::size_t edge_count() const;
    std::size_t hull_edge_count() const { return n_ghost_tris_; }

    /// Finite triangles as id triples (each CCW), for inspection and tests.
    std::vector<std::array<PointId, 3>> finite_triangles() const;
    /// Undirected edges as id pairs with first < second, sorted.
    std::vector<std::pair<PointId, PointId>> edges() const;

    /// Validates internal consistency (orientation, mutual neighbor links,
    /// Euler relation, vertex/triangle bookkeeping). Throws std::logic_error
    /// with a description on the first violation. Intended for tests.
    void check_structure() const;

private:
    static constexpr std::uint32_t kGhost = 0xFFFFFFFFu;
    static constexpr std::uint32_t kNoTri = 0xFFFFFFFFu;

    struct Vtx {
        Point p{0.0, 0.0};
        PointId id = kInvalidPointId;
        std::uint32_t tri = kNoTri;  // one incident triangle (proper layout)
        bool live = false;
    };

    struct Tri {
        std::array<std::uint32_t, 3> v{};  // vertex slots, CCW; at most one kGhost
        std::array<std::uint32_t, 3> n{};  // n[i]: neighbor across edge opposite v[i]
        bool live = false;
    };

    // --- storage ---
    std::vector<Vtx> verts_;
    std::vector<std::uint32_t> free_verts_;
    std::vector<Tri> tris_;
    std::vector<std::uint32_t> free_tris_;
    std::unordered_map<PointId, std::uint32_t> slot_of_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> coord_index_;
    std::vector<std::uint32_t> line_;  // list layout: slots sorted lexicographically
    bool proper_ = false;
    std::size_t n_live_ = 0;
    std::size_t n_finite_tris_ = 0;
    std::size_t n_ghost_tris_ = 0;
    PointId min_id_ = kInvalidPointId;
    std::vector<std::uint32_t> tri_mark_;  // walk/cavity scratch, mutations only
    std::uint32_t mark_epoch_ = 0;
    std::uint64_t walk_salt_ = 0x9e3779b97f4a7c15ull;

    // --- helpers ---
    Tri& tri(std::uint32_t t) { return tris_[t]; }
    const Tri& tri(std::uint32_t t) const { return tris_[t]; }
    Vtx& vtx(std::uint32_t s) { return verts_[s]; }
    const Vtx& vtx(std::uint32_t s) const { return verts_[s]; }

    static bool lex_less(Point a, Point b);
    static std::uint64_t coord_key(Point p);

    std::uint32_t require_slot(PointId id) const;
    std::uint32_t find_coord(Point p) const;  // slot or kGhost when absent
    std::uint32_t new_vertex(PointId id, Point p);
    void unregister_vertex(std::uint32_t s);
    std::uint32_t new_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c);
    void free_triangle(std::uint32_t t);

    static bool tri_is_ghost(const Tri& t);
    static int tri_index_of(const Tri& t, std::uint32_t slot);
    // For a ghost triangle, the hull edge directed so the interior is on its
    // left: first = tail, second = head.
    std::pair<std::uint32_t, std::uint32_t> ghost_hull_edge(const Tri& t) const;

    bool in_ghost_disk(std::uint32_t tail, std::uint32_t head, Point p) const;
    bool in_disk(const Tri& t, PointId pid, Point p) const;

    std::uint32_t some_live_triangle() const;
    std::uint32_t walk_to_seed(Point p, PointId pid, std::uint32_t start_vertex);
    void insert_proper(PointId id, Point p, std::optional<PointId> hint);
    void insert_into_line(std::uint32_t s);
    void promote_from_line(std::uint32_t apex);
    void wire_by_edges(const std::vector<std::uint32_t>& new_tris);
    void delete_proper(std::uint32_t s);
    void rebuild_from(std::vector<std::pair<PointId, Point>> points);
    std::vector<std::pair<PointId, Point>> collect_points(std::uint32_t exclude_slot) const;
    void clear_storage();

    template <typename Fn>
    void visit_neighbor_slots(std::uint32_t s, Fn&& fn) const;
};

}  // namespace mvd
