#pragma once

#include <cstdint>
#include <limits>

namespace mvd {

/// Stable identity of an indexed point. Ids are dense 0..n-1 after a bulk
/// load and strictly increasing for later inserts; an id is never reused.
using PointId = std::uint32_t;

inline constexpr PointId kInvalidPointId = std::numeric_limits<PointId>::max();

struct Point {
    double x;
    double y;
};

inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(Point a, Point b) { return !(a == b); }

/// Squared Euclidean distance. Squared form keeps the ordering of true
/// distances; square roots are taken only at reporting boundaries.
inline double dist2(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// (dist2, id) lexicographic key. For any fixed query point this is a strict
/// total order over distinct points, which makes every "nearest" comparison
/// in the library deterministic even under distance ties.
struct DistOrder {
    double dist2;
    PointId id;
};

inline bool operator<(DistOrder a, DistOrder b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    return a.id < b.id;
}
inline bool operator==(DistOrder a, DistOrder b) {
    return a.dist2 == b.dist2 && a.id == b.id;
}

enum class Orientation : int { CW = -1, Collinear = 0, CCW = 1 };

enum class CirclePos : int { Outside = -1, On = 0, Inside = 1 };

/// Sign of the 2x2 determinant of (b-a, c-a), decided exactly: a fast
/// floating-point filter with an exact rational fallback.
Orientation orient(Point a, Point b, Point c);

/// Exact position of d relative to the circumcircle of (a, b, c).
/// (a, b, c) is normalized to CCW internally; collinear (a, b, c) throws.
CirclePos in_circle(Point a, Point b, Point c, Point d);

/// In-circle with symbolic tie-breaking for cocircular inputs: conceptually
/// each point's lifted coordinate is lowered by an infinitesimal weight that
/// grows as the id shrinks, so the test never answers On and the resulting
/// triangulation of cocircular clusters fans out from their smallest id.
/// Requires (a, b, c) strictly CCW.
CirclePos in_circle_perturbed(PointId ia, Point a, PointId ib, Point b,
                              PointId ic, Point c, PointId idd, Point d);

}  // namespace mvd
