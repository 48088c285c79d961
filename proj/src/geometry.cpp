#include "mvd/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>

namespace mvd {
namespace {

using Rational = boost::multiprecision::cpp_rational;

// Error-bound constants for the floating-point filters, eps = 2^-53.
constexpr double kEps = 1.1102230246251565e-16;
constexpr double kOrientErrBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kInCircleErrBound = (10.0 + 96.0 * kEps) * kEps;

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

int sign_of(const Rational& v) {
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

int orient_exact(Point a, Point b, Point c) {
    const Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    const Rational det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
    return sign_of(det);
}

int orient_sign(Point a, Point b, Point c) {
    const double detleft = (a.x - c.x) * (b.y - c.y);
    const double detright = (a.y - c.y) * (b.x - c.x);
    const double det = detleft - detright;

    double detsum;
    if (detleft > 0.0) {
        if (detright <= 0.0) return sign_of(det);
        detsum = detleft + detright;
    } else if (detleft < 0.0) {
        if (detright >= 0.0) return sign_of(det);
        detsum = -detleft - detright;
    } else {
        return sign_of(det);
    }

    const double errbound = kOrientErrBound * detsum;
    if (det >= errbound || -det >= errbound) return sign_of(det);
    return orient_exact(a, b, c);
}

int in_circle_exact(Point a, Point b, Point c, Point d) {
    const Rational adx = Rational(a.x) - Rational(d.x);
    const Rational ady = Rational(a.y) - Rational(d.y);
    const Rational bdx = Rational(b.x) - Rational(d.x);
    const Rational bdy = Rational(b.y) - Rational(d.y);
    const Rational cdx = Rational(c.x) - Rational(d.x);
    const Rational cdy = Rational(c.y) - Rational(d.y);

    const Rational alift = adx * adx + ady * ady;
    const Rational blift = bdx * bdx + bdy * bdy;
    const Rational clift = cdx * cdx + cdy * cdy;

    const Rational det = alift * (bdx * cdy - cdx * bdy) +
                         blift * (cdx * ady - adx * cdy) +
                         clift * (adx * bdy - bdx * ady);
    return sign_of(det);
}

// Positive result means d is strictly inside the circumcircle of the CCW
// triangle (a, b, c).
int in_circle_sign(Point a, Point b, Point c, Point d) {
    const double adx = a.x - d.x;
    const double ady = a.y - d.y;
    const double bdx = b.x - d.x;
    const double bdy = b.y - d.y;
    const double cdx = c.x - d.x;
    const double cdy = c.y - d.y;

    const double bdxcdy = bdx * cdy;
    const double cdxbdy = cdx * bdy;
    const double alift = adx * adx + ady * ady;

    const double cdxady = cdx * ady;
    const double adxcdy = adx * cdy;
    const double blift = bdx * bdx + bdy * bdy;

    const double adxbdy = adx * bdy;
    const double bdxady = bdx * ady;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                       clift * (adxbdy - bdxady);

    const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                             (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                             (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
    const double errbound = kInCircleErrBound * permanent;
    if (det > errbound || -det > errbound) return sign_of(det);
    return in_circle_exact(a, b, c, d);
}

}  // namespace

Orientation orient(Point a, Point b, Point c) {
    return static_cast<Orientation>(orient_sign(a, b, c));
}

CirclePos in_circle(Point a, Point b, Point c, Point d) {
    const Orientation o = orient(a, b, c);
    if (o == Orientation::Collinear)
        throw std::invalid_argument("in_circle: triangle (a, b, c) is collinear");
    if (o == Orientation::CW)
        return static_cast<CirclePos>(in_circle_sign(a, c, b, d));
    return static_cast<CirclePos>(in_circle_sign(a, b, c, d));
}

CirclePos in_circle_perturbed(PointId ia, Point a, PointId ib, Point b,
                              PointId ic, Point c, PointId idd, Point d) {
    const int s = in_circle_sign(a, b, c, d);
    if (s != 0) return static_cast<CirclePos>(s);

    // Cocircular. The perturbed determinant is -sum_i w_i * cof_i where
    // cof_i is the lift-column cofactor of argument i and the weights are
    // nested infinitesimals ordered by id (smallest id largest). The sign is
    // decided by the smallest id whose cofactor does not vanish; cof_4 is
    // -orient(a, b, c) != 0, so the loop always resolves.
    struct Arg {
        PointId id;
        int pos;  // 1-based row position in (a, b, c, d)
    };
    Arg args[4] = {{ia, 1}, {ib, 2}, {ic, 3}, {idd, 4}};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (args[j].id < args[i].id) std::swap(args[i], args[j]);

    for (const Arg& arg : args) {
        int cof = 0;
        switch (arg.pos) {
            case 1: cof = orient_sign(b, c, d); break;
            case 2: cof = -orient_sign(a, c, d); break;
            case 3: cof = orient_sign(a, b, d); break;
            case 4: cof = -orient_sign(a, b, c); break;
        }
        if (cof != 0) return static_cast<CirclePos>(-cof);
    }
    return CirclePos::On;  // unreachable for a non-degenerate (a, b, c)
}

}  // namespace mvd
