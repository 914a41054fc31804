// Rasterization, hull filling, outer-boundary tracing and free-point masks.
//
// All raster topology uses the standard pairing: free-space connectivity is
// 4-connected, traces block as 8-connected sets.  Outer boundaries follow
// the component of the complement that touches the domain boundary; since
// every supported domain is simply connected, that component is identified
// by flooding from a one-cell pad ring around the grid.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "loopsoup/cluster.hpp"
#include "loopsoup/soup.hpp"

namespace loopsoup {

enum class CellRole : std::uint8_t {
    empty = 0,
    loop_trace = 1,
    cluster_fill = 2,
    exterior = 3,
    boundary = 4,
};

// Square-cell grid over a domain bounding box.  ny is derived so cells stay
// square; for the supported domains the bbox is covered exactly.
struct RasterGrid {
    int nx = 0;
    int ny = 0;
    Vec2 origin;
    double cell_size = 0.0;
    std::vector<std::uint8_t> roles;  // nx * ny, row-major, CellRole values

    static RasterGrid over(const BBox& box, int resolution);

    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
               static_cast<std::size_t>(ix);
    }
    bool in_bounds(int ix, int iy) const { return ix >= 0 && ix < nx && iy >= 0 && iy < ny; }
    Vec2 cell_center(int ix, int iy) const {
        return {origin.x + (ix + 0.5) * cell_size, origin.y + (iy + 0.5) * cell_size};
    }
    BBox cell_box(int ix, int iy) const {
        const Vec2 lo{origin.x + ix * cell_size, origin.y + iy * cell_size};
        return {lo, {lo.x + cell_size, lo.y + cell_size}};
    }

    std::size_t count_role(CellRole role) const;
};

// Marks loop_trace on every cell whose closed square the segment meets.
void mark_segment(RasterGrid& grid, const Vec2& a, const Vec2& b,
                  CellRole role = CellRole::loop_trace);

void rasterize_loop(RasterGrid& grid, const Loop& loop, CellRole role = CellRole::loop_trace);

// Conservative rasterization of every loop of the soup; resolution >= 16.
RasterGrid rasterize_soup(const LoopSoup& soup, int resolution);

// Trace cells of the loop plus all cells not reachable from the grid frame
// by a 4-connected walk through cells this loop leaves empty.  Returned as
// sorted global cell indices.
std::vector<std::uint32_t> fill_loop_hull(const Loop& loop, const RasterGrid& grid);

struct FreePointMask {
    RasterGrid grid;
    std::vector<std::uint8_t> free;        // not inside any loop's filled hull
    std::vector<std::uint8_t> trace_free;  // not crossed by any loop trace (the set M)

    double free_fraction() const;
};

FreePointMask free_point_mask(const LoopSoup& soup, int resolution);

// Closed boundary polyline of one cluster, vertices at cell centers.
// boundary_cells holds every exterior cell 8-adjacent to the cluster (the
// full crust, indices into the padded (resolution+2)^2 grid, sorted); the
// polyline is the Moore-traced outer contour through the crust.
struct ClusterBoundary {
    std::uint32_t cluster_id = 0;
    std::vector<Vec2> polyline;  // closed: front() == back()
    int grid_resolution = 0;
    std::vector<std::uint32_t> boundary_cells;
};

// Outer boundary of a cluster: exterior cells 8-adjacent to the cluster's
// trace, walked into one closed cycle by Moore-neighbor tracing.  nullopt if
// the cluster leaves no exterior to trace against.
std::optional<ClusterBoundary> trace_outer_boundary(std::uint32_t cluster_id,
                                                    const ClusterSet& clusters,
                                                    const LoopSoup& soup, int resolution);

enum class CrossingSide { left_right, top_bottom };

// True iff a 4-connected path of trace-free cells joins the two opposite
// sides of a rectangular domain.
bool crossing_exists(const LoopSoup& soup, int resolution, CrossingSide side);

// Same decision on a prebuilt grid (used by the monotone-coupling sweep).
bool crossing_exists(const RasterGrid& grid, CrossingSide side);

}  // namespace loopsoup
