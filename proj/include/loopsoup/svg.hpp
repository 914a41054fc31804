// Deterministic SVG rendering of soups, cluster fills, boundaries and masks.

#pragma once

#include <string>
#include <vector>

#include "loopsoup/cluster.hpp"
#include "loopsoup/raster.hpp"
#include "loopsoup/soup.hpp"

namespace loopsoup {

struct SvgScene {
    double width_px = 800.0;
    BBox view;
    std::string body;

    explicit SvgScene(const BBox& view_box, double width = 800.0);

    void add_polyline(std::span<const Vec2> pts, const std::string& stroke, double stroke_width,
                      const std::string& fill = "none", double opacity = 1.0);
    // Shades the cells where mask is nonzero.
    void add_mask(const RasterGrid& grid, const std::vector<std::uint8_t>& mask,
                  const std::string& fill, double opacity);
    std::string str() const;
    void save(const std::string& path) const;
};

// Loops as thin strokes, cluster fills tinted per cluster, boundaries
// highlighted, free mask shaded in the background.
std::string render_soup_svg(const LoopSoup& soup, const ClusterSet* clusters,
                            const std::vector<ClusterBoundary>* boundaries,
                            const FreePointMask* mask);

// Stable per-cluster stroke color.
const char* cluster_color(std::uint32_t cluster_id);

}  // namespace loopsoup
