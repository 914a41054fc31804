#include <doctest.h>

#include <cmath>
#include <deque>
#include <numbers>

#include "loopsoup/raster.hpp"
#include "loopsoup/rng.hpp"

using namespace loopsoup;

namespace {

Loop make_loop(std::vector<Vec2> pts) {
    Loop loop;
    loop.points = std::move(pts);
    loop.root = loop.points.front();
    loop.duration = 0.01;
    loop.bbox = bbox_of(loop.points);
    return loop;
}

Loop circle_loop(Vec2 center, double radius, std::size_t n) {
    std::vector<Vec2> pts;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
        pts.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    pts.push_back(pts.front());
    return make_loop(std::move(pts));
}

LoopSoup one_loop_soup(Loop loop) {
    LoopSoup soup;
    soup.config.domain = Domain::unit_square();
    soup.config.intensity_c = 1.0;
    soup.loops.push_back(std::move(loop));
    return soup;
}

// Independent BFS (queue-based, separate code path from the library DFS).
bool crossing_oracle(const RasterGrid& grid, CrossingSide side) {
    const int nx = grid.nx, ny = grid.ny;
    std::vector<std::uint8_t> seen(grid.roles.size(), 0);
    std::deque<std::pair<int, int>> queue;
    auto blocked = [&](int ix, int iy) {
        return grid.roles[grid.index(ix, iy)] == static_cast<std::uint8_t>(CellRole::loop_trace);
    };
    if (side == CrossingSide::left_right) {
        for (int iy = 0; iy < ny; ++iy)
            if (!blocked(0, iy)) {
                seen[grid.index(0, iy)] = 1;
                queue.emplace_back(0, iy);
            }
    } else {
        for (int ix = 0; ix < nx; ++ix)
            if (!blocked(ix, 0)) {
                seen[grid.index(ix, 0)] = 1;
                queue.emplace_back(ix, 0);
            }
    }
    while (!queue.empty()) {
        const auto [ix, iy] = queue.front();
        queue.pop_front();
        if (side == CrossingSide::left_right ? ix == nx - 1 : iy == ny - 1) return true;
        const int nbr[4][2] = {{ix + 1, iy}, {ix - 1, iy}, {ix, iy + 1}, {ix, iy - 1}};
        for (const auto& [jx, jy] : nbr) {
            if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
            if (blocked(jx, jy) || seen[grid.index(jx, jy)]) continue;
            seen[grid.index(jx, jy)] = 1;
            queue.emplace_back(jx, jy);
        }
    }
    return false;
}

}  // namespace

TEST_CASE("rasterize_soup: empty soup marks nothing, resolution guard") {
    LoopSoup empty;
    empty.config.domain = Domain::unit_square();
    const RasterGrid grid = rasterize_soup(empty, 32);
    CHECK(grid.count_role(CellRole::loop_trace) == 0);
    CHECK_THROWS_AS(rasterize_soup(empty, 8), std::invalid_argument);
}

TEST_CASE("rasterize: one horizontal segment marks exactly one row") {
    RasterGrid grid = RasterGrid::over({{0, 0}, {1, 1}}, 32);
    // Through the centers of row 5: y = (5 + 0.5) / 32.
    const double y = 5.5 / 32.0;
    mark_segment(grid, {0.01, y}, {0.99, y});
    std::size_t marked = 0;
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
            if (grid.roles[grid.index(ix, iy)]) {
                ++marked;
                CHECK(iy == 5);
            }
    CHECK(marked == 32);
}

TEST_CASE("rasterize: marked set is a small superset of dense point sampling") {
    Rng rng(31337, 0);
    LoopSoup soup;
    soup.config.domain = Domain::unit_square();
    soup.loops.push_back(sample_brownian_bridge_loop({0.5, 0.5}, 0.02, 512, rng));
    const RasterGrid grid = rasterize_soup(soup, 128);

    // Oracle: 10 sample points per segment; every touched cell must be
    // marked, and the conservative marking may only add a sliver.
    std::vector<std::uint8_t> sampled(grid.roles.size(), 0);
    for (const auto& loop : soup.loops) {
        for (std::size_t i = 0; i + 1 < loop.points.size(); ++i) {
            for (int s = 0; s <= 10; ++s) {
                const double t = static_cast<double>(s) / 10.0;
                const Vec2 p = loop.points[i] + (loop.points[i + 1] - loop.points[i]) * t;
                const int ix = static_cast<int>((p.x - grid.origin.x) / grid.cell_size);
                const int iy = static_cast<int>((p.y - grid.origin.y) / grid.cell_size);
                if (grid.in_bounds(ix, iy)) sampled[grid.index(ix, iy)] = 1;
            }
        }
    }
    std::size_t sampled_cells = 0, marked_cells = 0, missing = 0;
    for (std::size_t i = 0; i < grid.roles.size(); ++i) {
        sampled_cells += sampled[i];
        marked_cells += grid.roles[i] != 0;
        if (sampled[i] && !grid.roles[i]) ++missing;
    }
    CHECK(missing == 0);  // conservative marking covers every sampled cell
    CHECK(marked_cells >= sampled_cells);
    CHECK(static_cast<double>(marked_cells - sampled_cells) <
          0.01 * static_cast<double>(grid.roles.size()));
}

TEST_CASE("fill_loop_hull: one-cell loop fills just its cell") {
    RasterGrid grid = RasterGrid::over({{0, 0}, {1, 1}}, 32);
    const double c = (10 + 0.5) / 32.0;
    const double r = 0.2 / 32.0;  // well inside one cell
    const Loop tiny = circle_loop({c, c}, r, 16);
    rasterize_loop(grid, tiny);
    const auto hull = fill_loop_hull(tiny, grid);
    REQUIRE(hull.size() == 1);
    CHECK(hull[0] == grid.index(10, 10));
}

TEST_CASE("fill_loop_hull: circle trace fills the disk (holes included)") {
    RasterGrid grid = RasterGrid::over({{0, 0}, {1, 1}}, 256);
    const double r = 0.3;
    const Loop circle = circle_loop({0.5, 0.5}, r, 720);
    rasterize_loop(grid, circle);
    const auto hull = fill_loop_hull(circle, grid);
    const double cell_area = grid.cell_size * grid.cell_size;
    const double disk_area = std::numbers::pi * r * r;
    CHECK(static_cast<double>(hull.size()) * cell_area ==
          doctest::Approx(disk_area).epsilon(0.05));
    // The annulus interior (trace ring's inside) is part of the hull.
    const std::size_t center_idx = grid.index(128, 128);
    CHECK(std::binary_search(hull.begin(), hull.end(), static_cast<std::uint32_t>(center_idx)));
}

TEST_CASE("free_point_mask: c = 0 leaves everything free; masks nest") {
    LoopSoup empty;
    empty.config.domain = Domain::unit_square();
    const FreePointMask all_free = free_point_mask(empty, 64);
    CHECK(all_free.free_fraction() == 1.0);

    LoopSoup soup = one_loop_soup(circle_loop({0.4, 0.4}, 0.2, 360));
    const FreePointMask one = free_point_mask(soup, 64);
    const auto hull = fill_loop_hull(soup.loops[0], one.grid);
    // free == complement of the hull for a single loop.
    std::size_t free_count = 0;
    for (const auto v : one.free) free_count += v;
    CHECK(free_count + hull.size() == one.free.size());
    for (const auto idx : hull) CHECK(one.free[idx] == 0);

    // free is a subset of trace_free.
    for (std::size_t i = 0; i < one.free.size(); ++i)
        if (one.free[i]) CHECK(one.trace_free[i] == 1);

    // Adding loops only shrinks the free set.
    soup.loops.push_back(circle_loop({0.7, 0.7}, 0.15, 360));
    const FreePointMask two = free_point_mask(soup, 64);
    for (std::size_t i = 0; i < two.free.size(); ++i)
        if (two.free[i]) CHECK(one.free[i] == 1);
    CHECK(two.free_fraction() <= one.free_fraction());
}

TEST_CASE("free mask refinement: fraction converges as resolution doubles") {
    LoopSoup soup = one_loop_soup(circle_loop({0.45, 0.5}, 0.25, 720));
    soup.loops.push_back(circle_loop({0.7, 0.3}, 0.12, 360));
    double prev = -1.0;
    std::vector<double> increments;
    double last = 0.0;
    for (const int res : {64, 128, 256, 512}) {
        const double frac = free_point_mask(soup, res).free_fraction();
        if (prev >= 0.0) increments.push_back(std::abs(frac - prev));
        prev = frac;
        last = frac;
    }
    MESSAGE("refinement increments: ", increments[0], " ", increments[1], " ", increments[2]);
    CHECK(increments.back() < increments.front());
    CHECK(last == doctest::Approx(1.0 - std::numbers::pi * 0.25 * 0.25 -
                                  std::numbers::pi * 0.12 * 0.12)
                      .epsilon(0.02));
}

TEST_CASE("trace_outer_boundary: circle cluster boundary hugs the circle") {
    const double r = 0.3;
    LoopSoup soup = one_loop_soup(circle_loop({0.5, 0.5}, r, 720));
    const ClusterSet cs = build_clusters_bruteforce(soup);
    const auto boundary = trace_outer_boundary(0, cs, soup, 256);
    REQUIRE(boundary.has_value());
    REQUIRE(boundary->polyline.size() > 10);
    CHECK(boundary->polyline.front() == boundary->polyline.back());

    // Every vertex sits within two cells of the ideal circle.  Vertices at
    // cell centers 8-adjacent to trace cells admit a worst case of
    // 1.5 * sqrt(2) cells when the arc clips the far corner of a trace cell.
    const double cell = 1.0 / 256.0;
    for (const auto& p : boundary->polyline) {
        const double dist_to_circle = std::abs((p - Vec2{0.5, 0.5}).norm() - r);
        CHECK(dist_to_circle <= 1.5 * std::sqrt(2.0) * cell + 1e-12);
    }
}

TEST_CASE("trace_outer_boundary: boundary encloses every trace cell") {
    Rng rng(440, 0);
    LoopSoup soup;
    soup.config.domain = Domain::unit_square();
    soup.loops.push_back(sample_brownian_bridge_loop({0.5, 0.5}, 0.05, 512, rng));
    soup.loops.push_back(sample_brownian_bridge_loop({0.55, 0.5}, 0.03, 512, rng));
    const ClusterSet cs = build_clusters_bruteforce(soup);
    const int resolution = 128;

    for (std::uint32_t cid = 0; cid < cs.size(); ++cid) {
        const auto boundary = trace_outer_boundary(cid, cs, soup, resolution);
        REQUIRE(boundary.has_value());
        // Rebuild the cluster's trace cells on the same padded geometry.
        RasterGrid base = RasterGrid::over(soup.config.domain.bbox(), resolution);
        RasterGrid work;
        work.nx = base.nx + 2;
        work.ny = base.ny + 2;
        work.cell_size = base.cell_size;
        work.origin = {base.origin.x - base.cell_size, base.origin.y - base.cell_size};
        work.roles.assign(static_cast<std::size_t>(work.nx) * work.ny, 0);
        for (const auto li : cs.clusters[cid]) rasterize_loop(work, soup.loops[li]);

        for (int iy = 0; iy < work.ny; ++iy)
            for (int ix = 0; ix < work.nx; ++ix)
                if (work.roles[work.index(ix, iy)])
                    CHECK(point_in_polygon(work.cell_center(ix, iy), boundary->polyline));
    }
}

TEST_CASE("trace_outer_boundary: consecutive boundary cells are 8-adjacent") {
    LoopSoup soup = one_loop_soup(circle_loop({0.5, 0.5}, 0.21, 360));
    const ClusterSet cs = build_clusters_bruteforce(soup);
    const auto boundary = trace_outer_boundary(0, cs, soup, 128);
    REQUIRE(boundary.has_value());
    const double step_limit = std::sqrt(2.0) * boundary->polyline.size();
    (void)step_limit;
    for (std::size_t i = 0; i + 1 < boundary->polyline.size(); ++i) {
        const Vec2 d = boundary->polyline[i + 1] - boundary->polyline[i];
        CHECK(std::max(std::abs(d.x), std::abs(d.y)) <= (1.0 / 128.0) + 1e-12);
    }
}

TEST_CASE("crossing_exists: trivial cases and the BFS oracle") {
    LoopSoup empty;
    empty.config.domain = Domain::unit_square();
    CHECK(crossing_exists(empty, 32, CrossingSide::left_right));
    CHECK(crossing_exists(empty, 32, CrossingSide::top_bottom));

    // A full horizontal bar blocks top-bottom but not left-right.
    LoopSoup bar = one_loop_soup(
        make_loop({{0.0, 0.5}, {1.0, 0.5}, {1.0, 0.52}, {0.0, 0.52}, {0.0, 0.5}}));
    CHECK(crossing_exists(bar, 32, CrossingSide::left_right));
    CHECK_FALSE(crossing_exists(bar, 32, CrossingSide::top_bottom));

    // Space-filling boustrophedon: nothing crosses.
    std::vector<Vec2> snake;
    for (int k = 0; k <= 16; ++k) {
        const double y = static_cast<double>(k) / 16.0;
        if (k % 2 == 0) {
            snake.push_back({0.0, y});
            snake.push_back({1.0, y});
        } else {
            snake.push_back({1.0, y});
            snake.push_back({0.0, y});
        }
    }
    snake.push_back(snake.front());
    LoopSoup full = one_loop_soup(make_loop(std::move(snake)));
    CHECK_FALSE(crossing_exists(full, 16, CrossingSide::left_right));
    CHECK_FALSE(crossing_exists(full, 16, CrossingSide::top_bottom));

    // Random masks against the independent BFS.
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(derive_seed(515, trial), 0);
        RasterGrid grid = RasterGrid::over({{0, 0}, {1, 1}}, 24);
        for (int k = 0; k < 30; ++k) {
            const Vec2 a{rng.uniform(), rng.uniform()};
            const Vec2 b{a.x + 0.3 * (rng.uniform() - 0.5), a.y + 0.3 * (rng.uniform() - 0.5)};
            mark_segment(grid, a, b);
        }
        CHECK(crossing_exists(grid, CrossingSide::left_right) ==
              crossing_oracle(grid, CrossingSide::left_right));
        CHECK(crossing_exists(grid, CrossingSide::top_bottom) ==
              crossing_oracle(grid, CrossingSide::top_bottom));
    }
}

TEST_CASE("crossing_exists is monotone under adding loops") {
    SoupConfig cfg;
    cfg.domain = Domain::unit_square();
    cfg.intensity_c = 0.4;
    cfg.t_min = 0.01;
    cfg.t_max = 1.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        cfg.seed = derive_seed(606, s);
        const LoopSoup soup = sample_soup(cfg);
        LoopSoup partial;
        partial.config = cfg;
        bool crossed_before = crossing_exists(partial, 48, CrossingSide::left_right);
        for (const auto& loop : soup.loops) {
            partial.loops.push_back(loop);
            const bool crossed_now = crossing_exists(partial, 48, CrossingSide::left_right);
            CHECK((crossed_before || !crossed_now));  // false never flips back to true
            crossed_before = crossed_now;
        }
    }
}
