// Bounded planar domains the soups live in.

#pragma once

#include <string>

#include "loopsoup/geometry.hpp"

namespace loopsoup {

// A bounded open subset of the plane.  half_plane_box is the truncation of
// the upper half plane used by the chordal experiments: 0 < Im z < height,
// |Re z| < width/2.
struct Domain {
    enum class Kind { unit_square, unit_disk, rectangle, half_plane_box };

    Kind kind = Kind::unit_square;
    double width = 1.0;   // rectangle / half_plane_box
    double height = 1.0;  // rectangle / half_plane_box

    bool operator==(const Domain&) const = default;

    static Domain unit_square() { return {Kind::unit_square, 1.0, 1.0}; }
    static Domain unit_disk() { return {Kind::unit_disk, 2.0, 2.0}; }
    static Domain rectangle(double w, double h);
    static Domain half_plane_box(double w, double h);

    BBox bbox() const;

    // Strict interior membership; total and deterministic.
    bool point_in(const Vec2& p) const;

    // Closure membership (boundary included).
    bool point_in_closed(const Vec2& p) const;

    std::string name() const;
};

Domain domain_from_name(const std::string& name, double width, double height);

// True iff sub is geometrically contained in parent.  All supported domains
// are convex, so sub is contained iff the corners of its bounding box lie in
// the closure of parent.
bool domain_contains(const Domain& parent, const Domain& sub);

}  // namespace loopsoup
