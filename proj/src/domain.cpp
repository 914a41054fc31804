#include "loopsoup/domain.hpp"

#include <stdexcept>

namespace loopsoup {

Domain Domain::rectangle(double w, double h) {
    if (!(w > 0.0) || !(h > 0.0)) throw std::invalid_argument("rectangle: sides must be positive");
    return {Kind::rectangle, w, h};
}

Domain Domain::half_plane_box(double w, double h) {
    if (!(w > 0.0) || !(h > 0.0)) throw std::invalid_argument("half_plane_box: sides must be positive");
    return {Kind::half_plane_box, w, h};
}

BBox Domain::bbox() const {
    switch (kind) {
        case Kind::unit_square: return {{0.0, 0.0}, {1.0, 1.0}};
        case Kind::unit_disk: return {{-1.0, -1.0}, {1.0, 1.0}};
        case Kind::rectangle: return {{0.0, 0.0}, {width, height}};
        case Kind::half_plane_box: return {{-width / 2.0, 0.0}, {width / 2.0, height}};
    }
    throw std::logic_error("unreachable domain kind");
}

bool Domain::point_in(const Vec2& p) const {
    switch (kind) {
        case Kind::unit_square: return p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0;
        case Kind::unit_disk: return p.norm2() < 1.0;
        case Kind::rectangle: return p.x > 0.0 && p.x < width && p.y > 0.0 && p.y < height;
        case Kind::half_plane_box:
            return p.x > -width / 2.0 && p.x < width / 2.0 && p.y > 0.0 && p.y < height;
    }
    throw std::logic_error("unreachable domain kind");
}

bool Domain::point_in_closed(const Vec2& p) const {
    switch (kind) {
        case Kind::unit_square: return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0;
        case Kind::unit_disk: return p.norm2() <= 1.0;
        case Kind::rectangle: return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
        case Kind::half_plane_box:
            return p.x >= -width / 2.0 && p.x <= width / 2.0 && p.y >= 0.0 && p.y <= height;
    }
    throw std::logic_error("unreachable domain kind");
}

std::string Domain::name() const {
    switch (kind) {
        case Kind::unit_square: return "unit_square";
        case Kind::unit_disk: return "unit_disk";
        case Kind::rectangle: return "rectangle";
        case Kind::half_plane_box: return "half_plane_box";
    }
    throw std::logic_error("unreachable domain kind");
}

Domain domain_from_name(const std::string& name, double width, double height) {
    if (name == "unit_square") return Domain::unit_square();
    if (name == "unit_disk") return Domain::unit_disk();
    if (name == "rectangle") return Domain::rectangle(width, height);
    if (name == "half_plane_box") return Domain::half_plane_box(width, height);
    throw std::invalid_argument("unknown domain kind: " + name);
}

bool domain_contains(const Domain& parent, const Domain& sub) {
    const BBox b = sub.bbox();
    const Vec2 corners[4] = {b.lo, {b.hi.x, b.lo.y}, b.hi, {b.lo.x, b.hi.y}};
    for (const auto& c : corners)
        if (!parent.point_in_closed(c)) return false;
    return true;
}

}  // namespace loopsoup
