#include "mvd/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "mvd/errors.hpp"

namespace mvd {
namespace {

std::uint64_t pack_edge_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Bit-interleaving for the Morton insertion order used by bulk loads.
std::uint64_t spread_bits(std::uint64_t v) {
    v &= 0x1fffff;
    v = (v | (v << 32)) & 0x1f00000000ffffull;
    v = (v | (v << 16)) & 0x1f0000ff0000ffull;
    v = (v | (v << 8)) & 0x100f00f00f00f00full;
    v = (v | (v << 4)) & 0x10c30c30c30c30c3ull;
    v = (v | (v << 2)) & 0x1249249249249249ull;
    return v;
}

}  // namespace

Triangulation::Triangulation() = default;

bool Triangulation::lex_less(Point a, Point b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

std::uint64_t Triangulation::coord_key(Point p) {
    const double x = p.x == 0.0 ? 0.0 : p.x;  // fold -0.0
    const double y = p.y == 0.0 ? 0.0 : p.y;
    std::uint64_t bx, by;
    std::memcpy(&bx, &x, sizeof bx);
    std::memcpy(&by, &y, sizeof by);
    std::uint64_t h = bx * 0x9e3779b97f4a7c15ull;
    h ^= by + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

std::uint32_t Triangulation::require_slot(PointId id) const {
    const auto it = slot_of_.find(id);
    if (it == slot_of_.end()) throw UnknownPointError(id);
    return it->second;
}

std::uint32_t Triangulation::find_coord(Point p) const {
    const auto it = coord_index_.find(coord_key(p));
    if (it == coord_index_.end()) return kGhost;
    for (const std::uint32_t s : it->second)
        if (verts_[s].p == p) return s;
    return kGhost;
}

std::uint32_t Triangulation::new_vertex(PointId id, Point p) {
    std::uint32_t s;
    if (!free_verts_.empty()) {
        s = free_verts_.back();
        free_verts_.pop_back();
    } else {
        s = static_cast<std::uint32_t>(verts_.size());
        verts_.emplace_back();
    }
    verts_[s] = Vtx{p, id, kNoTri, true};
    slot_of_.emplace(id, s);
    coord_index_[coord_key(p)].push_back(s);
    ++n_live_;
    if (min_id_ == kInvalidPointId || id < min_id_) min_id_ = id;
    return s;
}

void Triangulation::unregister_vertex(std::uint32_t s) {
    Vtx& v = verts_[s];
    slot_of_.erase(v.id);
    auto it = coord_index_.find(coord_key(v.p));
    if (it != coord_index_.end()) {
        auto& bucket = it->second;
        bucket.erase(std::find(bucket.begin(), bucket.end(), s));
        if (bucket.empty()) coord_index_.erase(it);
    }
    v.live = false;
    v.tri = kNoTri;
    free_verts_.push_back(s);
    --n_live_;
    if (v.id == min_id_) {
        min_id_ = kInvalidPointId;
        for (const auto& [id, slot] : slot_of_)
            if (id < min_id_) min_id_ = id;
    }
}

bool Triangulation::tri_is_ghost(const Tri& t) {
    return t.v[0] == kGhost || t.v[1] == kGhost || t.v[2] == kGhost;
}

int Triangulation::tri_index_of(const Tri& t, std::uint32_t slot) {
    for (int i = 0; i < 3; ++i)
        if (t.v[i] == slot) return i;
    throw std::logic_error("triangulation: vertex not in triangle");
}

std::pair<std::uint32_t, std::uint32_t> Triangulation::ghost_hull_edge(const Tri& t) const {
    const int g = tri_index_of(t, kGhost);
    const std::uint32_t head = t.v[(g + 1) % 3];
    const std::uint32_t tail = t.v[(g + 2) % 3];
    return {tail, head};
}

std::uint32_t Triangulation::new_triangle(std::uint32_t a, std::uint32_t b,
                                          std::uint32_t c) {
    std::uint32_t t;
    if (!free_tris_.empty()) {
        t = free_tris_.back();
        free_tris_.pop_back();
    } else {
        t = static_cast<std::uint32_t>(tris_.size());
        tris_.emplace_back();
        tri_mark_.push_back(0);
    }
    tris_[t] = Tri{{a, b, c}, {kNoTri, kNoTri, kNoTri}, true};
    if (tri_is_ghost(tris_[t]))
        ++n_ghost_tris_;
    else
        ++n_finite_tris_;
    for (const std::uint32_t s : tris_[t].v)
        if (s != kGhost) verts_[s].tri = t;
    return t;
}

void Triangulation::free_triangle(std::uint32_t t) {
    Tri& T = tris_[t];
    if (tri_is_ghost(T))
        --n_ghost_tris_;
    else
        --n_finite_tris_;
    T.live = false;
    free_tris_.push_back(t);
}

// The circumdisk of a ghost triangle is the open halfplane beyond its hull
// edge together with the open edge itself.
bool Triangulation::in_ghost_disk(std::uint32_t tail, std::uint32_t head, Point p) const {
    const Point a = verts_[tail].p;
    const Point b = verts_[head].p;
    const Orientation o = orient(a, b, p);
    if (o == Orientation::CW) return true;
    if (o != Orientation::Collinear) return false;
    const Point lo = lex_less(a, b) ? a : b;
    const Point hi = lex_less(a, b) ? b : a;
    return lex_less(lo, p) && lex_less(p, hi);
}

bool Triangulation::in_disk(const Tri& t, PointId pid, Point p) const {
    if (tri_is_ghost(t)) {
        const auto [tail, head] = ghost_hull_edge(t);
        return in_ghost_disk(tail, head, p);
    }
    const Vtx& a = verts_[t.v[0]];
    const Vtx& b = verts_[t.v[1]];
    const Vtx& c = verts_[t.v[2]];
    return in_circle_perturbed(a.id, a.p, b.id, b.p, c.id, c.p, pid, p) ==
           CirclePos::Inside;
}

std::uint32_t Triangulation::some_live_triangle() const {
    for (std::uint32_t t = 0; t < tris_.size(); ++t)
        if (tris_[t].live) return t;
    throw std::logic_error("triangulation: no live triangle");
}

// Visibility walk toward p, ending at a triangle whose circumdisk contains
// p. Exact predicates on a Delaunay structure keep the walk finite; a step
// cap with an exhaustive-scan fallback guards the degenerate corners.
std::uint32_t Triangulation::walk_to_seed(Point p, PointId pid, std::uint32_t start_vertex) {
    std::uint32_t t = verts_[start_vertex].tri;
    if (t == kNoTri) t = some_live_triangle();
    if (tri_is_ghost(tris_[t])) t = tris_[t].n[tri_index_of(tris_[t], kGhost)];

    const std::size_t cap = 4 * (n_finite_tris_ + n_ghost_tris_) + 16;
    std::size_t steps = 0;
    while (true) {
        if (++steps > cap) break;
        const Tri& T = tris_[t];
        if (tri_is_ghost(T)) {
            // p escaped the hull: scan the ghost fan for the edge that sees it.
            std::size_t fan_steps = 0;
            std::uint32_t g = t;
            while (true) {
                const Tri& G = tris_[g];
                const auto [tail, head] = ghost_hull_edge(G);
                if (in_ghost_disk(tail, head, p)) return g;
                g = G.n[tri_index_of(G, tail)];
                if (++fan_steps > n_ghost_tris_ + 1) break;
            }
            break;
        }
        walk_salt_ = walk_salt_ * 6364136223846793005ull + 1442695040888963407ull;
        const int off = static_cast<int>((walk_salt_ >> 33) % 3);
        bool crossed = false;
        for (int k = 0; k < 3 && !crossed; ++k) {
            const int i = (off + k) % 3;
            const Point u = verts_[T.v[(i + 1) % 3]].p;
            const Point w = verts_[T.v[(i + 2) % 3]].p;
            if (orient(u, w, p) == Orientation::CW) {
                t = T.n[i];
                crossed = true;
            }
        }
        if (!crossed) return t;  // p inside or on the boundary of T
    }
    // Fallback: some live triangle's circumdisk must contain p.
    for (std::uint32_t s = 0; s < tris_.size(); ++s)
        if (tris_[s].live && in_disk(tris_[s], pid, p)) return s;
    throw std::logic_error("triangulation: walk found no cavity seed");
}

void Triangulation::insert_vertex(PointId id, Point p, std::optional<PointId> hint) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("point id " + std::to_string(id) +
                                    ": non-finite coordinate");
    if (slot_of_.count(id)) throw IdCollisionError(id, "id already present");
    const std::uint32_t dup = find_coord(p);
    if (dup != kGhost) throw DuplicatePointError(verts_[dup].id, id, p);

    if (!proper_) {
        const std::uint32_t s = new_vertex(id, p);
        if (line_.size() < 2) {
            insert_into_line(s);
            return;
        }
        const Point a = verts_[line_.front()].p;
        const Point b = verts_[line_.back()].p;
        if (orient(a, b, p) == Orientation::Collinear)
            insert_into_line(s);
        else
            promote_from_line(s);
        return;
    }
    insert_proper(id, p, hint);
}

void Triangulation::insert_into_line(std::uint32_t s) {
    const auto it = std::lower_bound(
        line_.begin(), line_.end(), s,
        [this](std::uint32_t a, std::uint32_t b) { return lex_less(verts_[a].p, verts_[b].p); });
    line_.insert(it, s);
}

// First non-collinear point: the collinear chain plus the apex triangulates
// as a fan; a circle through two chain points meets the chain line nowhere
// else, so every fan triangle is Delaunay.
void Triangulation::promote_from_line(std::uint32_t apex) {
    std::vector<std::uint32_t> chain = line_;
    if (orient(verts_[chain.front()].p, verts_[chain.back()].p, verts_[apex].p) ==
        Orientation::CW)
        std::reverse(chain.begin(), chain.end());

    std::vector<std::uint32_t> created;
    const std::size_t m = chain.size();
    for (std::size_t i = 0; i + 1 < m; ++i) {
        created.push_back(new_triangle(chain[i], chain[i + 1], apex));
        created.push_back(new_triangle(chain[i + 1], chain[i], kGhost));
    }
    created.push_back(new_triangle(apex, chain[m - 1], kGhost));
    created.push_back(new_triangle(chain[0], apex, kGhost));
    wire_by_edges(created);
    line_.clear();
    proper_ = true;
}

void Triangulation::wire_by_edges(const std::vector<std::uint32_t>& new_tris) {
    std::unordered_map<std::uint64_t, std::pair<std::uint32_t, int>> open_edges;
    open_edges.reserve(new_tris.size() * 2);
    for (const std::uint32_t t : new_tris) {
        Tri& T = tris_[t];
        for (int i = 0; i < 3; ++i) {
            const std::uint64_t key = pack_edge_key(T.v[(i + 1) % 3], T.v[(i + 2) % 3]);
            const auto it = open_edges.find(key);
            if (it == open_edges.end()) {
                open_edges.emplace(key, std::make_pair(t, i));
            } else {
                T.n[i] = it->second.first;
                tris_[it->second.first].n[it->second.second] = t;
                open_edges.erase(it);
            }
        }
    }
    if (!open_edges.empty())
        throw std::logic_error("triangulation: unmatched edge while wiring");
}

void Triangulation::insert_proper(PointId id, Point p, std::optional<PointId> hint) {
    const std::uint32_t start = hint ? require_slot(*hint) : require_slot(min_id_);
    const std::uint32_t seed = walk_to_seed(p, id, start);

    ++mark_epoch_;
    const std::uint32_t in_cavity = 2 * mark_epoch_;
    const std::uint32_t outside = 2 * mark_epoch_ + 1;

    std::vector<std::uint32_t> cavity;
    std::vector<std::uint32_t> stack{seed};
    tri_mark_[seed] = in_cavity;
    while (!stack.empty()) {
        const std::uint32_t t = stack.back();
        stack.pop_back();
        cavity.push_back(t);
        for (const std::uint32_t nb : tris_[t].n) {
            if (tri_mark_[nb] == in_cavity || tri_mark_[nb] == outside) continue;
            if (in_disk(tris_[nb], id, p)) {
                tri_mark_[nb] = in_cavity;
                stack.push_back(nb);
            } else {
                tri_mark_[nb] = outside;
            }
        }
    }

    struct BoundaryEdge {
        std::uint32_t x, y;        // directed, cavity on the left
        std::uint32_t out;         // surviving triangle across (x, y)
        int back;                  // index in `out` pointing into the cavity
    };
    std::vector<BoundaryEdge> boundary;
    for (const std::uint32_t t : cavity) {
        const Tri& T = tris_[t];
        for (int i = 0; i < 3; ++i) {
            const std::uint32_t nb = T.n[i];
            if (tri_mark_[nb] == in_cavity) continue;
            int back = -1;
            for (int j = 0; j < 3; ++j)
                if (tris_[nb].n[j] == t) back = j;
            boundary.push_back({T.v[(i + 1) % 3], T.v[(i + 2) % 3], nb, back});
        }
    }

    const std::uint32_t vs = new_vertex(id, p);
    std::unordered_map<std::uint64_t, std::pair<std::uint32_t, int>> open_edges;
    open_edges.reserve(boundary.size());
    for (const BoundaryEdge& e : boundary) {
        const std::uint32_t nt = new_triangle(e.x, e.y, vs);
        tris_[nt].n[2] = e.out;
        tris_[e.out].n[e.back] = nt;
        for (const int i : {0, 1}) {  // fan edges (y, vs) and (vs, x)
            const std::uint64_t key =
                pack_edge_key(tris_[nt].v[(i + 1) % 3], tris_[nt].v[(i + 2) % 3]);
            const auto it = open_edges.find(key);
            if (it == open_edges.end()) {
                open_edges.emplace(key, std::make_pair(nt, i));
            } else {
                tris_[nt].n[i] = it->second.first;
                tris_[it->second.first].n[it->second.second] = nt;
                open_edges.erase(it);
            }
        }
    }
    if (!open_edges.empty())
        throw std::logic_error("triangulation: cavity boundary not closed");
    for (const std::uint32_t t : cavity) free_triangle(t);
}

void Triangulation::delete_vertex(PointId id) {
    const std::uint32_t s = require_slot(id);
    if (!proper_) {
        line_.erase(std::find(line_.begin(), line_.end(), s));
        unregister_vertex(s);
        return;
    }
    if (n_live_ - 1 < 3) {
        rebuild_from(collect_points(s));
        return;
    }
    delete_proper(s);
}

void Triangulation::delete_proper(std::uint32_t s) {
    // Link cycle around s in CCW order; outs[i] is the surviving triangle
    // across cycle edge cyc[i] -> cyc[i+1].
    struct EdgeRec {
        std::uint32_t tri;
        int idx;
    };
    std::vector<std::uint32_t> cyc;
    std::vector<EdgeRec> outs;
    std::vector<std::uint32_t> dying;
    const std::uint32_t start = verts_[s].tri;
    std::uint32_t cur = start;
    do {
        const Tri& T = tris_[cur];
        const int i = tri_index_of(T, s);
        const std::uint32_t nb = T.n[i];
        int back = -1;
        for (int j = 0; j < 3; ++j)
            if (tris_[nb].n[j] == cur) back = j;
        cyc.push_back(T.v[(i + 1) % 3]);
        outs.push_back({nb, back});
        dying.push_back(cur);
        cur = T.n[(i + 1) % 3];
    } while (cur != start);

    unregister_vertex(s);
    for (const std::uint32_t t : dying) free_triangle(t);

    const auto finite_ear_ok = [&](std::uint32_t x, std::uint32_t f, std::uint32_t y) {
        const Vtx& a = verts_[x];
        const Vtx& b = verts_[f];
        const Vtx& c = verts_[y];
        if (orient(a.p, b.p, c.p) != Orientation::CCW) return false;
        for (const std::uint32_t w : cyc) {
            if (w == kGhost || w == x || w == f || w == y) continue;
            const Vtx& d = verts_[w];
            if (in_circle_perturbed(a.id, a.p, b.id, b.p, c.id, c.p, d.id, d.p) ==
                CirclePos::Inside)
                return false;
        }
        return true;
    };
    const auto ghost_ear_ok = [&](std::uint32_t tail, std::uint32_t head) {
        for (const std::uint32_t w : cyc) {
            if (w == kGhost || w == tail || w == head) continue;
            if (in_ghost_disk(tail, head, verts_[w].p)) return false;
        }
        return true;
    };

    while (cyc.size() > 3) {
        const std::size_t L = cyc.size();
        std::size_t found = L;
        for (std::size_t j = 0; j < L; ++j) {
            const std::uint32_t x = cyc[(j + L - 1) % L];
            const std::uint32_t f = cyc[j];
            const std::uint32_t y = cyc[(j + 1) % L];
            bool ok;
            if (f == kGhost)
                ok = ghost_ear_ok(x, y);
            else if (x == kGhost)
                ok = ghost_ear_ok(y, f);
            else if (y == kGhost)
                ok = ghost_ear_ok(f, x);
            else
                ok = finite_ear_ok(x, f, y);
            if (ok) {
                found = j;
                break;
            }
        }
        if (found == L) {
            // Remaining points are collinear (or otherwise untriangulable).
            rebuild_from(collect_points(kGhost));
            return;
        }
        const std::size_t j = found;
        const std::size_t jp = (j + L - 1) % L;
        const std::uint32_t nt = new_triangle(cyc[jp], cyc[j], cyc[(j + 1) % L]);
        tris_[nt].n[2] = outs[jp].tri;
        tris_[outs[jp].tri].n[outs[jp].idx] = nt;
        tris_[nt].n[0] = outs[j].tri;
        tris_[outs[j].tri].n[outs[j].idx] = nt;
        outs[jp] = {nt, 1};
        cyc.erase(cyc.begin() + static_cast<std::ptrdiff_t>(j));
        outs.erase(outs.begin() + static_cast<std::ptrdiff_t>(j));
    }

    if (cyc[0] != kGhost && cyc[1] != kGhost && cyc[2] != kGhost &&
        orient(verts_[cyc[0]].p, verts_[cyc[1]].p, verts_[cyc[2]].p) !=
            Orientation::CCW) {
        rebuild_from(collect_points(kGhost));
        return;
    }
    const std::uint32_t nt = new_triangle(cyc[0], cyc[1], cyc[2]);
    for (int i = 0; i < 3; ++i) {
        const std::size_t e = static_cast<std::size_t>((i + 1) % 3);
        tris_[nt].n[i] = outs[e].tri;
        tris_[outs[e].tri].n[outs[e].idx] = nt;
    }

    if (n_finite_tris_ == 0) rebuild_from(collect_points(kGhost));
}

std::vector<std::pair<PointId, Point>> Triangulation::collect_points(
    std::uint32_t exclude_slot) const {
    std::vector<std::pair<PointId, Point>> pts;
    pts.reserve(n_live_);
    for (const auto& [id, slot] : slot_of_) {
        if (slot == exclude_slot) continue;
        pts.emplace_back(id, verts_[slot].p);
    }
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return pts;
}

void Triangulation::clear_storage() {
    verts_.clear();
    free_verts_.clear();
    tris_.clear();
    free_tris_.clear();
    slot_of_.clear();
    coord_index_.clear();
    line_.clear();
    proper_ = false;
    n_live_ = 0;
    n_finite_tris_ = 0;
    n_ghost_tris_ = 0;
    min_id_ = kInvalidPointId;
    tri_mark_.clear();
    mark_epoch_ = 0;
}

void Triangulation::rebuild_from(std::vector<std::pair<PointId, Point>> points) {
    clear_storage();
    if (points.empty()) return;

    double min_x = points[0].second.x, max_x = min_x;
    double min_y = points[0].second.y, max_y = min_y;
    for (const auto& [id, p] : points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double sx = max_x > min_x ? 2097151.0 / (max_x - min_x) : 0.0;
    const double sy = max_y > min_y ? 2097151.0 / (max_y - min_y) : 0.0;

    std::vector<std::pair<std::uint64_t, std::size_t>> order;
    order.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point p = points[i].second;
        const auto qx = static_cast<std::uint64_t>((p.x - min_x) * sx);
        const auto qy = static_cast<std::uint64_t>((p.y - min_y) * sy);
        order.emplace_back(spread_bits(qx) | (spread_bits(qy) << 1), i);
    }
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return points[a.second].first < points[b.second].first;
    });

    std::optional<PointId> hint;
    for (const auto& [key, i] : order) {
        insert_vertex(points[i].first, points[i].second, hint);
        hint = points[i].first;
    }
}

Triangulation Triangulation::bulk_build(std::span<const std::pair<PointId, Point>> points) {
    Triangulation t;
    t.rebuild_from({points.begin(), points.end()});
    return t;
}

template <typename Fn>
void Triangulation::visit_neighbor_slots(std::uint32_t s, Fn&& fn) const {
    if (!proper_) {
        const auto it = std::lower_bound(
            line_.begin(), line_.end(), s,
            [this](std::uint32_t a, std::uint32_t b) { return lex_less(verts_[a].p, verts_[b].p); });
        if (it != line_.begin()) fn(*(it - 1));
        if (it + 1 != line_.end()) fn(*(it + 1));
        return;
    }
    const std::uint32_t start = verts_[s].tri;
    std::uint32_t cur = start;
    do {
        const Tri& T = tris_[cur];
        const int i = tri_index_of(T, s);
        const std::uint32_t a = T.v[(i + 1) % 3];
        if (a != kGhost) fn(a);
        cur = T.n[(i + 1) % 3];
    } while (cur != start);
}

std::vector<PointId> Triangulation::neighbors(PointId id) const {
    const std::uint32_t s = require_slot(id);
    std::vector<PointId> out;
    visit_neighbor_slots(s, [&](std::uint32_t u) { out.push_back(verts_[u].id); });
    std::sort(out.begin(), out.end());
    return out;
}

void Triangulation::for_each_neighbor(PointId id,
                                      const std::function<void(PointId)>& fn) const {
    const std::uint32_t s = require_slot(id);
    visit_neighbor_slots(s, [&](std::uint32_t u) { fn(verts_[u].id); });
}

PointId Triangulation::locate(Point q, std::optional<PointId> hint) const {
    if (empty()) throw EmptyIndexError("locate: empty triangulation");
    return nearest(q, hint ? *hint : min_id_, nullptr);
}

namespace {

// Walk-local visited set. Walks touch a few dozen vertices, where a flat
// array beats a hash map; long path walks over list layouts spill into one.
class SeenSet {
public:
    const double* find(std::uint32_t s) const {
        if (!use_map_) {
            for (const auto& [slot, d] : flat_)
                if (slot == s) return &d;
            return nullptr;
        }
        const auto it = map_.find(s);
        return it == map_.end() ? nullptr : &it->second;
    }

    void insert(std::uint32_t s, double d) {
        if (!use_map_) {
            flat_.emplace_back(s, d);
            if (flat_.size() > 96) {
                map_.insert(flat_.begin(), flat_.end());
                use_map_ = true;
            }
            return;
        }
        map_.emplace(s, d);
    }

private:
    std::vector<std::pair<std::uint32_t, double>> flat_;
    std::unordered_map<std::uint32_t, double> map_;
    bool use_map_ = false;
};

}  // namespace

PointId Triangulation::nearest(Point q, PointId start, QueryStats* stats) const {
    if (empty()) throw EmptyIndexError("nearest: empty triangulation");
    const std::uint32_t start_slot = require_slot(start);

    SeenSet seen;
    const auto eval = [&](std::uint32_t s) {
        const double d = dist2(q, verts_[s].p);
        seen.insert(s, d);
        if (stats) {
            ++stats->distance_evaluations;
            ++stats->points_visited;
        }
        return d;
    };

    std::uint32_t cur = start_slot;
    double d_cur = eval(cur);
    while (true) {
        std::uint32_t best = cur;
        double d_best = d_cur;
        visit_neighbor_slots(cur, [&](std::uint32_t u) {
            if (seen.find(u)) return;
            const double du = eval(u);
            if (DistOrder{du, verts_[u].id} < DistOrder{d_best, verts_[best].id}) {
                best = u;
                d_best = du;
            }
        });
        if (best == cur) break;
        cur = best;
        d_cur = d_best;
    }

    // Under exact distance ties the nearest set forms a connected ring of
    // cells around q; sweep it for the smallest id.
    bool tie = false;
    visit_neighbor_slots(cur, [&](std::uint32_t u) {
        const double* du = seen.find(u);
        if (du && *du == d_cur) tie = true;
    });
    if (!tie) return verts_[cur].id;

    std::unordered_set<std::uint32_t> component{cur};
    std::vector<std::uint32_t> stack{cur};
    std::uint32_t best = cur;
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        visit_neighbor_slots(v, [&](std::uint32_t u) {
            const double* known = seen.find(u);
            const double du = known ? *known : eval(u);
            if (du == d_cur && component.insert(u).second) {
                stack.push_back(u);
                if (verts_[u].id < verts_[best].id) best = u;
            }
        });
    }
    return verts_[best].id;
}

bool Triangulation::contains(PointId id) const { return slot_of_.count(id) != 0; }

Point Triangulation::point_of(PointId id) const { return verts_[require_slot(id)].p; }

PointId Triangulation::min_vertex_id() const {
    if (empty()) throw EmptyIndexError("min_vertex_id: empty triangulation");
    return min_id_;
}

std::vector<PointId> Triangulation::vertex_ids() const {
    std::vector<PointId> ids;
    ids.reserve(n_live_);
    for (const auto& [id, slot] : slot_of_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::size_t Triangulation::edge_count() const {
    if (!proper_) return n_live_ >= 2 ? n_live_ - 1 : 0;
    return (3 * n_finite_tris_ + n_ghost_tris_) / 2;
}

std::vector<std::array<PointId, 3>> Triangulation::finite_triangles() const {
    std::vector<std::array<PointId, 3>> out;
    out.reserve(n_finite_tris_);
    for (const Tri& t : tris_) {
        if (!t.live || tri_is_ghost(t)) continue;
        out.push_back({verts_[t.v[0]].id, verts_[t.v[1]].id, verts_[t.v[2]].id});
    }
    return out;
}

std::vector<std::pair<PointId, PointId>> Triangulation::edges() const {
    std::set<std::pair<PointId, PointId>> set;
    if (!proper_) {
        for (std::size_t i = 0; i + 1 < line_.size(); ++i) {
            PointId a = verts_[line_[i]].id;
            PointId b = verts_[line_[i + 1]].id;
            set.emplace(std::min(a, b), std::max(a, b));
        }
    } else {
        for (const Tri& t : tris_) {
            if (!t.live || tri_is_ghost(t)) continue;
            for (int i = 0; i < 3; ++i) {
                const PointId a = verts_[t.v[i]].id;
                const PointId b = verts_[t.v[(i + 1) % 3]].id;
                set.emplace(std::min(a, b), std::max(a, b));
            }
        }
    }
    return {set.begin(), set.end()};
}

void Triangulation::check_structure() const {
    const auto fail = [](const std::string& what) {
        throw std::logic_error("triangulation invariant violated: " + what);
    };

    std::size_t live_verts = 0;
    for (const Vtx& v : verts_)
        if (v.live) ++live_verts;
    if (live_verts != n_live_) fail("live vertex count mismatch");
    if (slot_of_.size() != n_live_) fail("id map size mismatch");

    if (!proper_) {
        if (line_.size() != n_live_) fail("list layout size mismatch");
        for (std::size_t i = 0; i + 1 < line_.size(); ++i)
            if (!lex_less(verts_[line_[i]].p, verts_[line_[i + 1]].p))
                fail("list layout not sorted");
        if (line_.size() >= 3) {
            const Point a = verts_[line_.front()].p;
            const Point b = verts_[line_.back()].p;
            for (const std::uint32_t s : line_)
                if (orient(a, b, verts_[s].p) != Orientation::Collinear)
                    fail("list layout holds non-collinear points");
        }
        return;
    }

    std::size_t finite = 0, ghost = 0;
    for (std::uint32_t ti = 0; ti < tris_.size(); ++ti) {
        const Tri& t = tris_[ti];
        if (!t.live) continue;
        int ghosts_in_tri = 0;
        for (const std::uint32_t s : t.v) {
            if (s == kGhost) {
                ++ghosts_in_tri;
                continue;
            }
            if (!verts_[s].live) fail("triangle references dead vertex");
        }
        if (ghosts_in_tri > 1) fail("triangle with several ghost vertices");
        ghosts_in_tri ? ++ghost : ++finite;
        if (!ghosts_in_tri &&
            orient(verts_[t.v[0]].p, verts_[t.v[1]].p, verts_[t.v[2]].p) !=
                Orientation::CCW)
            fail("finite triangle not CCW");
        for (int i = 0; i < 3; ++i) {
            const std::uint32_t nb = t.n[i];
            if (nb == kNoTri || !tris_[nb].live) fail("dangling neighbor link");
            bool back = false;
            for (int j = 0; j < 3; ++j)
                if (tris_[nb].n[j] == ti) {
                    back = true;
                    const std::uint32_t a = t.v[(i + 1) % 3];
                    const std::uint32_t b = t.v[(i + 2) % 3];
                    if (tris_[nb].v[(j + 1) % 3] != b || tris_[nb].v[(j + 2) % 3] != a)
                        fail("neighbor edge is not reversed");
                }
            if (!back) fail("neighbor link not mutual");
        }
    }
    if (finite != n_finite_tris_ || ghost != n_ghost_tris_)
        fail("triangle counters mismatch");
    if (n_live_ >= 3 && finite == 0) fail("no finite triangle in proper layout");

    for (std::uint32_t s = 0; s < verts_.size(); ++s) {
        const Vtx& v = verts_[s];
        if (!v.live) continue;
        if (v.tri == kNoTri || !tris_[v.tri].live) fail("vertex incident link dead");
        bool found = false;
        for (const std::uint32_t u : tris_[v.tri].v)
            if (u == s) found = true;
        if (!found) fail("vertex incident link wrong triangle");
    }

    // Euler relation V - E + F = 2, counting the outer face.
    const std::size_t E = edge_count();
    if (2 * E != 3 * n_finite_tris_ + n_ghost_tris_) fail("edge count parity");
    if (static_cast<long long>(n_live_) - static_cast<long long>(E) +
            static_cast<long long>(n_finite_tris_) + 1 !=
        2)
        fail("Euler relation");
    if (n_live_ >= 3 && E > 3 * n_live_ - 6) fail("edge bound exceeded");
}

}  // namespace mvd
