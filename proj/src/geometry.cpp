#include "loopsoup/geometry.hpp"

namespace loopsoup {

namespace {

// Sign of the signed area of (a,b,c); 0 for collinear.
int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = cross(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(const Vec2& a1, const Vec2& a2, const Vec2& b1, const Vec2& b2) {
    const int o1 = orientation(a1, a2, b1);
    const int o2 = orientation(a1, a2, b2);
    const int o3 = orientation(b1, b2, a1);
    const int o4 = orientation(b1, b2, a2);

    if (o1 != o2 && o3 != o4) return true;

    if (o1 == 0 && on_segment(a1, a2, b1)) return true;
    if (o2 == 0 && on_segment(a1, a2, b2)) return true;
    if (o3 == 0 && on_segment(b1, b2, a1)) return true;
    if (o4 == 0 && on_segment(b1, b2, a2)) return true;
    return false;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 == 0.0) return (p - a).norm();
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

double segment_distance(const Vec2& a1, const Vec2& a2, const Vec2& b1, const Vec2& b2) {
    if (segments_intersect(a1, a2, b1, b2)) return 0.0;
    return std::min(std::min(point_segment_distance(a1, b1, b2), point_segment_distance(a2, b1, b2)),
                    std::min(point_segment_distance(b1, a1, a2), point_segment_distance(b2, a1, a2)));
}

bool segment_intersects_box(const Vec2& a, const Vec2& b, const BBox& box) {
    // Liang-Barsky parametric clip of a + t*(b-a), t in [0,1].
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    double t0 = 0.0, t1 = 1.0;

    auto clip = [&](double p, double q) {
        if (p == 0.0) return q >= 0.0;  // parallel: inside iff q >= 0
        const double r = q / p;
        if (p < 0.0) {
            if (r > t1) return false;
            if (r > t0) t0 = r;
        } else {
            if (r < t0) return false;
            if (r < t1) t1 = r;
        }
        return true;
    };

    return clip(-dx, a.x - box.lo.x) && clip(dx, box.hi.x - a.x) &&
           clip(-dy, a.y - box.lo.y) && clip(dy, box.hi.y - a.y);
}

bool point_in_polygon(const Vec2& p, std::span<const Vec2> poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& pi = poly[i];
        const Vec2& pj = poly[j];
        if ((pi.y > p.y) != (pj.y > p.y)) {
            const double xcross = (pj.x - pi.x) * (p.y - pi.y) / (pj.y - pi.y) + pi.x;
            if (p.x < xcross) inside = !inside;
        }
    }
    return inside;
}

double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
    auto one_sided = [](std::span<const Vec2> from, std::span<const Vec2> to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) best = std::min(best, (p - q).norm2());
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

double polyline_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
            best = std::min(best, segment_distance(a[i], a[i + 1], b[j], b[j + 1]));
            if (best == 0.0) return 0.0;
        }
    }
    return best;
}

}  // namespace loopsoup
