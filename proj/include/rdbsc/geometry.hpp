#pragma once

#include <cmath>
#include <numbers>

namespace rdbsc {

inline constexpr double two_pi = 2.0 * std::numbers::pi_v<double>;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double dist(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Normalizes an angle into [0, 2*pi).
inline double norm_angle(double a) {
    a = std::fmod(a, two_pi);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a = 0.0;
    return a;
}

// Bearing of b as seen from a, in [0, 2*pi). Zero-length vectors map to 0.
inline double bearing(const Point& a, const Point& b) {
    if (a.x == b.x && a.y == b.y) return 0.0;
    return norm_angle(std::atan2(b.y - a.y, b.x - a.x));
}

// Tests whether direction d lies inside the arc [lo, hi], where lo is in
// [0, 2*pi) and hi may exceed 2*pi to encode a wrap (hi - lo <= 2*pi).
inline double arc_width(double lo, double hi) { return hi - lo; }

inline bool angle_in_arc(double d, double lo, double hi) {
    if (hi - lo >= two_pi) return true;
    double dd = norm_angle(d);
    if (dd < lo) dd += two_pi;
    return dd <= hi;
}

// True when two arcs (each encoded as [lo, hi] with hi possibly > 2*pi)
// share at least one direction.
inline bool arcs_intersect(double lo1, double hi1, double lo2, double hi2) {
    if (hi1 - lo1 >= two_pi || hi2 - lo2 >= two_pi) return true;
    return angle_in_arc(lo1, lo2, hi2) || angle_in_arc(hi1, lo2, hi2) ||
           angle_in_arc(lo2, lo1, hi1) || angle_in_arc(hi2, lo1, hi1);
}

struct Rect {
    double xlo = 0.0, ylo = 0.0, xhi = 0.0, yhi = 0.0;
};

// Minimum distance between two axis-aligned rectangles (0 when they overlap).
inline double rect_min_dist(const Rect& a, const Rect& b) {
    double dx = std::max({0.0, b.xlo - a.xhi, a.xlo - b.xhi});
    double dy = std::max({0.0, b.ylo - a.yhi, a.ylo - b.yhi});
    return std::hypot(dx, dy);
}

inline double rect_max_dist(const Rect& a, const Rect& b) {
    double dx = std::max(std::abs(b.xhi - a.xlo), std::abs(a.xhi - b.xlo));
    double dy = std::max(std::abs(b.yhi - a.ylo), std::abs(a.yhi - b.ylo));
    return std::hypot(dx, dy);
}

// Angular hull of the directions from any point of rect `from` to any point
// of rect `to`. Returns false when every direction is possible (the Minkowski
// difference contains the origin); otherwise writes an arc [lo, hi] with
// hi - lo < 2*pi.
inline bool rect_direction_hull(const Rect& from, const Rect& to, double& lo, double& hi) {
    // Minkowski difference to - from.
    Rect d{to.xlo - from.xhi, to.ylo - from.yhi, to.xhi - from.xlo, to.yhi - from.ylo};
    if (d.xlo <= 0.0 && d.xhi >= 0.0 && d.ylo <= 0.0 && d.yhi >= 0.0) return false;
    double ax[4] = {d.xlo, d.xhi, d.xhi, d.xlo};
    double ay[4] = {d.ylo, d.ylo, d.yhi, d.yhi};
    // The hull of a convex region not containing the origin spans < pi, so the
    // widest corner-to-corner arc's complement is the hull.
    double ang[4];
    for (int i = 0; i < 4; ++i) ang[i] = norm_angle(std::atan2(ay[i], ax[i]));
    // Pick the arc that covers all four angles with width < pi: anchor each
    // candidate start and measure the max clockwise offset.
    double best_lo = 0.0, best_w = two_pi + 1.0;
    for (int i = 0; i < 4; ++i) {
        double w = 0.0;
        for (int j = 0; j < 4; ++j) {
            double off = ang[j] - ang[i];
            if (off < 0.0) off += two_pi;
            w = std::max(w, off);
        }
        if (w < best_w) {
            best_w = w;
            best_lo = ang[i];
        }
    }
    lo = best_lo;
    hi = best_lo + best_w;
    return true;
}

}  // namespace rdbsc
