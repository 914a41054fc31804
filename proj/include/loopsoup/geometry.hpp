// Planar geometry primitives shared by the samplers and the cluster engine.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace loopsoup {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

// Axis-aligned bounding box. Empty boxes have lo > hi.
struct BBox {
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

    void expand(const Vec2& p) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    void expand(const BBox& b) {
        expand(b.lo);
        expand(b.hi);
    }
    // Grow by r on every side.
    BBox inflated(double r) const { return {{lo.x - r, lo.y - r}, {hi.x + r, hi.y + r}}; }

    bool empty() const { return lo.x > hi.x || lo.y > hi.y; }
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double area() const { return empty() ? 0.0 : width() * height(); }
    double diagonal() const { return empty() ? 0.0 : (hi - lo).norm(); }

    bool contains(const Vec2& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    bool overlaps(const BBox& o) const {
        return !(hi.x < o.lo.x || o.hi.x < lo.x || hi.y < o.lo.y || o.hi.y < lo.y);
    }
    bool contains_box(const BBox& o) const {
        return lo.x <= o.lo.x && lo.y <= o.lo.y && hi.x >= o.hi.x && hi.y >= o.hi.y;
    }
};

inline BBox bbox_of(std::span<const Vec2> pts) {
    BBox b;
    for (const auto& p : pts) b.expand(p);
    return b;
}

// Proper or improper intersection of closed segments [a1,a2] and [b1,b2].
// Orientation-based test; collinear overlaps count as intersections.
bool segments_intersect(const Vec2& a1, const Vec2& a2, const Vec2& b1, const Vec2& b2);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

// Minimum distance between two closed segments (0 if they intersect).
double segment_distance(const Vec2& a1, const Vec2& a2, const Vec2& b1, const Vec2& b2);

// True iff segment [a,b] meets the closed rectangle box (Liang-Barsky clip).
bool segment_intersects_box(const Vec2& a, const Vec2& b, const BBox& box);

// Even-odd crossing-number test against a closed polyline (last point == first).
bool point_in_polygon(const Vec2& p, std::span<const Vec2> poly);

// Symmetric Hausdorff distance between two point sets, O(n*m).
double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b);

// Minimum vertex-to-segment distance between two polylines; 0 if they cross.
double polyline_distance(std::span<const Vec2> a, std::span<const Vec2> b);

}  // namespace loopsoup
