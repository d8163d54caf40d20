#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace meanfield {

// A circle point is a double in [0,1); a torus configuration is one point per site.
using Config = std::vector<double>;

// Reduce a real to [0,1). Floor-based mod with a clamp so that rounding
// can never leak an output of exactly 1.0 (or -0.0).
inline double reduce(double x) {
    if (!std::isfinite(x)) throw std::domain_error("reduce: non-finite input");
    double r = x - std::floor(x);
    return r == 1.0 ? 0.0 : r + 0.0;
}

// Signed distance on the circle: the odd 1-periodic function equal to u on
// (-1/2,1/2) and to 0 at exactly +-1/2. No tolerance band at the half points.
inline double signed_distance(double u) {
    if (!std::isfinite(u)) throw std::domain_error("signed_distance: non-finite input");
    double r = u - std::round(u);
    if (r == 0.5 || r == -0.5) return 0.0;
    return r + 0.0;
}

// Length of the counterclockwise arc from x to y; ccw_arc(x,y) + ccw_arc(y,x) = 1 for x != y.
inline double ccw_arc(double x, double y) { return reduce(y - x); }

// Shortest distance between two circle points.
inline double torus_dist(double x, double y) {
    double d = ccw_arc(x, y);
    return d < 0.5 ? d : 1.0 - d;
}

// Arc {start + t mod 1 : 0 <= t <= length}. Membership is half-open at the
// far endpoint when length < 1; a full-circle arc contains every point.
struct ArcInterval {
    double start = 0.0;
    double length = 0.0;

    bool contains(double p) const {
        if (length >= 1.0) return true;
        return ccw_arc(start, p) < length;
    }
    double end() const { return reduce(start + length); }
};

}  // namespace meanfield
