#include "loopsoup/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loopsoup {

RasterGrid RasterGrid::over(const BBox& box, int resolution) {
    if (resolution < 1) throw std::invalid_argument("raster grid: resolution must be >= 1");
    if (box.empty()) throw std::invalid_argument("raster grid: empty bounding box");
    RasterGrid g;
    g.nx = resolution;
    g.cell_size = box.width() / resolution;
    g.ny = std::max(1, static_cast<int>(std::lround(box.height() / g.cell_size)));
    g.origin = box.lo;
    g.roles.assign(static_cast<std::size_t>(g.nx) * g.ny, 0);
    return g;
}

std::size_t RasterGrid::count_role(CellRole role) const {
    return static_cast<std::size_t>(
        std::count(roles.begin(), roles.end(), static_cast<std::uint8_t>(role)));
}

void mark_segment(RasterGrid& grid, const Vec2& a, const Vec2& b, CellRole role) {
    BBox sb;
    sb.expand(a);
    sb.expand(b);
    int x0 = static_cast<int>(std::floor((sb.lo.x - grid.origin.x) / grid.cell_size));
    int x1 = static_cast<int>(std::floor((sb.hi.x - grid.origin.x) / grid.cell_size));
    int y0 = static_cast<int>(std::floor((sb.lo.y - grid.origin.y) / grid.cell_size));
    int y1 = static_cast<int>(std::floor((sb.hi.y - grid.origin.y) / grid.cell_size));
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, grid.nx - 1);
    y1 = std::min(y1, grid.ny - 1);
    for (int iy = y0; iy <= y1; ++iy)
        for (int ix = x0; ix <= x1; ++ix)
            if (segment_intersects_box(a, b, grid.cell_box(ix, iy)))
                grid.roles[grid.index(ix, iy)] = static_cast<std::uint8_t>(role);
}

void rasterize_loop(RasterGrid& grid, const Loop& loop, CellRole role) {
    for (std::size_t i = 0; i + 1 < loop.points.size(); ++i)
        mark_segment(grid, loop.points[i], loop.points[i + 1], role);
}

RasterGrid rasterize_soup(const LoopSoup& soup, int resolution) {
    if (resolution < 16) throw std::invalid_argument("rasterize_soup: resolution must be >= 16");
    RasterGrid grid = RasterGrid::over(soup.config.domain.bbox(), resolution);
    for (const auto& loop : soup.loops) rasterize_loop(grid, loop);
    return grid;
}

namespace {

// Scratch flood fill over a byte mask: 0 = open, nonzero = blocked.
// Marks reachable open cells with the given value, 4-connected.
void flood4(std::vector<std::uint8_t>& mask, int nx, int ny, std::vector<std::uint32_t>& frontier,
            std::uint8_t fill_value) {
    while (!frontier.empty()) {
        const std::uint32_t idx = frontier.back();
        frontier.pop_back();
        const int ix = static_cast<int>(idx % nx);
        const int iy = static_cast<int>(idx / nx);
        const int nbr[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
        for (const auto& [jx, jy] : nbr) {
            if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
            const std::size_t j = static_cast<std::size_t>(jy) * nx + jx;
            if (mask[j] == 0) {
                mask[j] = fill_value;
                frontier.push_back(static_cast<std::uint32_t>(j));
            }
        }
    }
}

}  // namespace

std::vector<std::uint32_t> fill_loop_hull(const Loop& loop, const RasterGrid& grid) {
    // Window: loop bbox cells plus a one-cell ring.  Everything outside the
    // bbox lies in the unbounded face, so flooding from the window border is
    // equivalent to flooding from the grid frame.
    int x0 = static_cast<int>(std::floor((loop.bbox.lo.x - grid.origin.x) / grid.cell_size)) - 1;
    int x1 = static_cast<int>(std::floor((loop.bbox.hi.x - grid.origin.x) / grid.cell_size)) + 1;
    int y0 = static_cast<int>(std::floor((loop.bbox.lo.y - grid.origin.y) / grid.cell_size)) - 1;
    int y1 = static_cast<int>(std::floor((loop.bbox.hi.y - grid.origin.y) / grid.cell_size)) + 1;
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, grid.nx - 1);
    y1 = std::min(y1, grid.ny - 1);
    const int wx = x1 - x0 + 1;
    const int wy = y1 - y0 + 1;
    if (wx <= 0 || wy <= 0) return {};

    // 1 = trace of this loop, 2 = reached from the frame, 0 = open.
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(wx) * wy, 0);
    auto widx = [&](int ix, int iy) {
        return static_cast<std::size_t>(iy - y0) * wx + (ix - x0);
    };
    for (std::size_t i = 0; i + 1 < loop.points.size(); ++i) {
        const Vec2& a = loop.points[i];
        const Vec2& b = loop.points[i + 1];
        BBox sb;
        sb.expand(a);
        sb.expand(b);
        const int sx0 = std::max(
            x0, static_cast<int>(std::floor((sb.lo.x - grid.origin.x) / grid.cell_size)));
        const int sx1 = std::min(
            x1, static_cast<int>(std::floor((sb.hi.x - grid.origin.x) / grid.cell_size)));
        const int sy0 = std::max(
            y0, static_cast<int>(std::floor((sb.lo.y - grid.origin.y) / grid.cell_size)));
        const int sy1 = std::min(
            y1, static_cast<int>(std::floor((sb.hi.y - grid.origin.y) / grid.cell_size)));
        for (int iy = sy0; iy <= sy1; ++iy)
            for (int ix = sx0; ix <= sx1; ++ix)
                if (segment_intersects_box(a, b, grid.cell_box(ix, iy))) mask[widx(ix, iy)] = 1;
    }

    std::vector<std::uint32_t> frontier;
    for (int ix = x0; ix <= x1; ++ix) {
        for (int iy : {y0, y1}) {
            const std::size_t j = widx(ix, iy);
            if (mask[j] == 0) {
                mask[j] = 2;
                frontier.push_back(static_cast<std::uint32_t>(j));
            }
        }
    }
    for (int iy = y0; iy <= y1; ++iy) {
        for (int ix : {x0, x1}) {
            const std::size_t j = widx(ix, iy);
            if (mask[j] == 0) {
                mask[j] = 2;
                frontier.push_back(static_cast<std::uint32_t>(j));
            }
        }
    }
    flood4(mask, wx, wy, frontier, 2);

    std::vector<std::uint32_t> hull;
    for (int iy = y0; iy <= y1; ++iy)
        for (int ix = x0; ix <= x1; ++ix)
            if (mask[widx(ix, iy)] != 2)
                hull.push_back(static_cast<std::uint32_t>(grid.index(ix, iy)));
    return hull;  // already sorted: row-major scan
}

double FreePointMask::free_fraction() const {
    if (free.empty()) return 1.0;
    std::size_t n = 0;
    for (auto v : free) n += v;
    return static_cast<double>(n) / static_cast<double>(free.size());
}

FreePointMask free_point_mask(const LoopSoup& soup, int resolution) {
    FreePointMask out;
    out.grid = rasterize_soup(soup, resolution);
    const std::size_t n = out.grid.roles.size();
    out.trace_free.assign(n, 1);
    for (std::size_t i = 0; i < n; ++i)
        if (out.grid.roles[i] == static_cast<std::uint8_t>(CellRole::loop_trace))
            out.trace_free[i] = 0;
    out.free.assign(n, 1);
    for (const auto& loop : soup.loops)
        for (const auto idx : fill_loop_hull(loop, out.grid)) out.free[idx] = 0;
    return out;
}

namespace {

// Moore-neighbor tracing over an 8-connected blob, Jacob's stopping
// criterion.  Returns the outer contour as cell indices into (nx, ny).
std::vector<std::pair<int, int>> moore_contour(const std::vector<std::uint8_t>& blob, int nx,
                                               int ny) {
    auto at = [&](int ix, int iy) {
        return ix >= 0 && ix < nx && iy >= 0 && iy < ny &&
               blob[static_cast<std::size_t>(iy) * nx + ix] != 0;
    };

    // Start: lowest row, then lowest column; entered from the west.
    int sx = -1, sy = -1;
    for (int iy = 0; iy < ny && sx < 0; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            if (at(ix, iy)) {
                sx = ix;
                sy = iy;
                break;
            }
    if (sx < 0) return {};

    // Clockwise Moore neighborhood starting at west.
    static const int dx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
    static const int dy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

    std::vector<std::pair<int, int>> contour;
    contour.emplace_back(sx, sy);

    int cx = sx, cy = sy;
    int backtrack = 0;  // neighbor index we entered from (west for the start)
    const std::size_t limit = 4 * static_cast<std::size_t>(nx) * ny + 16;
    int first_exit = -1;

    for (std::size_t steps = 0; steps < limit; ++steps) {
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int idx = (backtrack + k) % 8;
            if (at(cx + dx[idx], cy + dy[idx])) {
                found = idx;
                break;
            }
        }
        if (found < 0) return contour;  // isolated cell

        if (cx == sx && cy == sy) {
            if (first_exit < 0)
                first_exit = found;
            else if (found == first_exit)
                break;  // re-left the start the same way: contour closed
        }

        // Move; new backtrack points at the cell we came from.
        const int px = cx, py = cy;
        cx += dx[found];
        cy += dy[found];
        for (int k = 0; k < 8; ++k)
            if (cx + dx[k] == px && cy + dy[k] == py) {
                backtrack = k;
                break;
            }
        contour.emplace_back(cx, cy);
    }
    // Drop the final re-entry into the start so front()==back() after close.
    while (contour.size() > 1 && contour.back() == contour.front()) contour.pop_back();
    return contour;
}

}  // namespace

std::optional<ClusterBoundary> trace_outer_boundary(std::uint32_t cluster_id,
                                                    const ClusterSet& clusters,
                                                    const LoopSoup& soup, int resolution) {
    if (cluster_id >= clusters.size())
        throw std::invalid_argument("trace_outer_boundary: no such cluster");

    // Padded working grid: the one-cell ring stands in for the domain
    // boundary, so boundary-touching free space forms a single exterior
    // component, as it does for a simply connected domain.
    RasterGrid base = RasterGrid::over(soup.config.domain.bbox(), resolution);
    RasterGrid work;
    work.nx = base.nx + 2;
    work.ny = base.ny + 2;
    work.cell_size = base.cell_size;
    work.origin = {base.origin.x - base.cell_size, base.origin.y - base.cell_size};
    work.roles.assign(static_cast<std::size_t>(work.nx) * work.ny, 0);

    for (const auto loop_idx : clusters.clusters[cluster_id])
        rasterize_loop(work, soup.loops[loop_idx]);

    const int nx = work.nx, ny = work.ny;
    const std::size_t n = work.roles.size();

    // 0 open, 1 trace, 2 exterior.
    std::vector<std::uint8_t> mask(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (work.roles[i] == static_cast<std::uint8_t>(CellRole::loop_trace)) mask[i] = 1;

    std::vector<std::uint32_t> frontier;
    auto seed = [&](int ix, int iy) {
        const std::size_t j = static_cast<std::size_t>(iy) * nx + ix;
        if (mask[j] == 0) {
            mask[j] = 2;
            frontier.push_back(static_cast<std::uint32_t>(j));
        }
    };
    for (int ix = 0; ix < nx; ++ix) {
        seed(ix, 0);
        seed(ix, ny - 1);
    }
    for (int iy = 0; iy < ny; ++iy) {
        seed(0, iy);
        seed(nx - 1, iy);
    }
    if (frontier.empty()) return std::nullopt;
    flood4(mask, nx, ny, frontier, 2);

    // Crust: exterior cells 8-adjacent to the blob (trace plus holes).
    std::vector<std::uint8_t> crust(n, 0);
    std::vector<std::uint32_t> crust_cells;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const std::size_t j = static_cast<std::size_t>(iy) * nx + ix;
            if (mask[j] != 2) continue;
            for (int ddy = -1; ddy <= 1 && !crust[j]; ++ddy)
                for (int ddx = -1; ddx <= 1; ++ddx) {
                    const int jx = ix + ddx, jy = iy + ddy;
                    if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
                    if (mask[static_cast<std::size_t>(jy) * nx + jx] != 2) {
                        crust[j] = 1;
                        crust_cells.push_back(static_cast<std::uint32_t>(j));
                        break;
                    }
                }
        }
    }
    if (crust_cells.empty()) return std::nullopt;

    const auto contour = moore_contour(crust, nx, ny);
    if (contour.size() < 3) return std::nullopt;

    // The polyline walks the outer contour; boundary_cells keep the whole
    // crust (the contour walk skips cells inside narrow fjords, which carry
    // real frontier measure).
    ClusterBoundary cb;
    cb.cluster_id = cluster_id;
    cb.grid_resolution = resolution;
    for (const auto& [ix, iy] : contour) cb.polyline.push_back(work.cell_center(ix, iy));
    cb.polyline.push_back(cb.polyline.front());  // close
    cb.boundary_cells = std::move(crust_cells);  // row-major scan: already sorted
    return cb;
}

bool crossing_exists(const RasterGrid& grid, CrossingSide side) {
    const int nx = grid.nx, ny = grid.ny;
    std::vector<std::uint8_t> mask(grid.roles.size(), 0);
    for (std::size_t i = 0; i < grid.roles.size(); ++i)
        if (grid.roles[i] == static_cast<std::uint8_t>(CellRole::loop_trace)) mask[i] = 1;

    std::vector<std::uint32_t> frontier;
    auto seed = [&](int ix, int iy) {
        const std::size_t j = static_cast<std::size_t>(iy) * nx + ix;
        if (mask[j] == 0) {
            mask[j] = 2;
            frontier.push_back(static_cast<std::uint32_t>(j));
        }
    };
    if (side == CrossingSide::left_right) {
        for (int iy = 0; iy < ny; ++iy) seed(0, iy);
    } else {
        for (int ix = 0; ix < nx; ++ix) seed(ix, 0);
    }
    flood4(mask, nx, ny, frontier, 2);

    if (side == CrossingSide::left_right) {
        for (int iy = 0; iy < ny; ++iy)
            if (mask[static_cast<std::size_t>(iy) * nx + (nx - 1)] == 2) return true;
    } else {
        const std::size_t top = static_cast<std::size_t>(ny - 1) * nx;
        for (int ix = 0; ix < nx; ++ix)
            if (mask[top + ix] == 2) return true;
    }
    return false;
}

bool crossing_exists(const LoopSoup& soup, int resolution, CrossingSide side) {
    const auto kind = soup.config.domain.kind;
    if (kind == Domain::Kind::unit_disk)
        throw std::invalid_argument("crossing_exists: rectangular domain required");
    return crossing_exists(rasterize_soup(soup, resolution), side);
}

}  // namespace loopsoup
