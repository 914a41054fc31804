#include "loopsoup/chordal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loopsoup/fractal.hpp"
#include "loopsoup/rng.hpp"

namespace loopsoup {

namespace {
constexpr std::uint64_t kGammaSeedSalt = 0x67616D6D61ULL;  // gamma stream
constexpr std::uint64_t kSoupSeedSalt = 0x736F7570ULL;     // soup stream
}  // namespace

ChordalSetup ChordalSetup::for_kappa(double kappa, std::uint64_t seed) {
    ChordalSetup s;
    s.kappa = kappa;
    s.alpha = alpha_of_kappa(kappa);
    s.c = c_of_kappa(kappa);
    s.seed = seed;
    s.validate();
    return s;
}

void ChordalSetup::validate() const {
    if (!(kappa > 8.0 / 3.0) || !(kappa > 0.0) || !(kappa <= 4.0))
        throw std::invalid_argument("chordal setup: kappa must lie in (8/3, 4]");
    if (box.kind != Domain::Kind::half_plane_box)
        throw std::invalid_argument("chordal setup: box must be a half_plane_box");
    // c is always tied to kappa; alpha defaults to (6 - kappa)/(2 kappa) but
    // may be overridden (then eta is the SLE(kappa, rho) generalization).
    if (std::abs(c - c_of_kappa(kappa)) > 1e-9)
        throw std::invalid_argument("chordal setup: c inconsistent with kappa");
    if (!(alpha > 0.0)) throw std::invalid_argument("chordal setup: alpha must be > 0");
    if (resolution < 16) throw std::invalid_argument("chordal setup: resolution must be >= 16");
    if (!(driving_dt > 0.0)) throw std::invalid_argument("chordal setup: driving_dt must be > 0");
}

SoupConfig ChordalSetup::soup_config() const {
    SoupConfig cfg;
    cfg.domain = box;
    cfg.intensity_c = c;
    cfg.t_min = t_min;
    cfg.t_max = t_max;
    cfg.step_scale = step_scale;
    cfg.seed = derive_seed(seed, kSoupSeedSalt);
    return cfg;
}

std::vector<Vec2> sample_restriction_curve(const ChordalSetup& setup) {
    setup.validate();
    const double kappa_gen = 8.0 / 3.0;
    const double rho = rho_for_alpha(kappa_gen, setup.alpha);
    const std::uint64_t gamma_seed = derive_seed(setup.seed, kGammaSeedSalt);
    const double top = setup.box.height;
    const double half_width = setup.box.width / 2.0;

    // Grow the horizon until the trace leaves the box through the top.  The
    // plain slit height 2 sqrt(T) makes T ~ (top/2)^2 the natural unit.
    double horizon = top * top;
    for (int attempt = 0; attempt < 6; ++attempt) {
        const DrivingPath driving =
            sample_driving(kappa_gen, rho, horizon, setup.driving_dt, gamma_seed);
        const SleTrace trace = loewner_trace(driving);

        std::vector<Vec2> gamma;
        gamma.reserve(trace.points.size());
        bool hit_top = false;
        for (const auto& p : trace.points) {
            gamma.push_back(p);
            if (p.y >= top) {
                hit_top = true;
                break;
            }
            if (std::abs(p.x) >= half_width) break;  // left/right exit: clip here
        }
        if (hit_top) return gamma;
        if (gamma.size() < trace.points.size()) return gamma;  // side exit
        horizon *= 2.0;
    }
    throw std::runtime_error("sample_restriction_curve: trace never left the box");
}

std::vector<std::uint32_t> attach_clusters(const std::vector<Vec2>& gamma, const LoopSoup& soup,
                                           const ClusterSet& clusters, double touch_distance) {
    const BBox gamma_box = bbox_of(gamma).inflated(touch_distance);
    std::vector<std::uint8_t> attached(clusters.size(), 0);
    for (std::size_t li = 0; li < soup.loops.size(); ++li) {
        const Loop& loop = soup.loops[li];
        if (attached[clusters.labels[li]]) continue;
        if (!gamma_box.overlaps(loop.bbox)) continue;
        bool hit = false;
        for (std::size_t i = 0; i + 1 < gamma.size() && !hit; ++i) {
            for (std::size_t j = 0; j + 1 < loop.points.size(); ++j) {
                if (touch_distance > 0.0
                        ? segment_distance(gamma[i], gamma[i + 1], loop.points[j],
                                           loop.points[j + 1]) <= touch_distance
                        : segments_intersect(gamma[i], gamma[i + 1], loop.points[j],
                                             loop.points[j + 1])) {
                    hit = true;
                    break;
                }
            }
        }
        if (hit) attached[clusters.labels[li]] = 1;
    }
    std::vector<std::uint32_t> ids;
    for (std::uint32_t cid = 0; cid < attached.size(); ++cid)
        if (attached[cid]) ids.push_back(cid);
    return ids;
}

std::optional<HullSample> right_boundary(const ChordalSetup& setup, const std::vector<Vec2>& gamma,
                                         const LoopSoup& soup, const ClusterSet& clusters) {
    if (gamma.size() < 2) return std::nullopt;

    HullSample hull;
    hull.gamma = gamma;
    hull.attached_cluster_ids = attach_clusters(gamma, soup, clusters, setup.touch_distance);

    RasterGrid grid = RasterGrid::over(setup.box.bbox(), setup.resolution);
    for (std::size_t i = 0; i + 1 < gamma.size(); ++i)
        mark_segment(grid, gamma[i], gamma[i + 1]);
    for (const auto cid : hull.attached_cluster_ids)
        for (const auto li : clusters.clusters[cid]) rasterize_loop(grid, soup.loops[li]);

    const int nx = grid.nx, ny = grid.ny;
    auto is_hull = [&](int ix, int iy) {
        return grid.roles[grid.index(ix, iy)] == static_cast<std::uint8_t>(CellRole::loop_trace);
    };

    // Flood the region right of the hull from the right edge, 4-connected.
    std::vector<std::uint8_t> mask(grid.roles.size(), 0);  // 1 hull, 2 right region
    for (std::size_t i = 0; i < grid.roles.size(); ++i)
        if (grid.roles[i] != 0) mask[i] = 1;
    std::vector<std::uint32_t> frontier;
    for (int iy = 0; iy < ny; ++iy) {
        const std::size_t j = grid.index(nx - 1, iy);
        if (mask[j] == 0) {
            mask[j] = 2;
            frontier.push_back(static_cast<std::uint32_t>(j));
        }
    }
    if (frontier.empty()) return std::nullopt;
    while (!frontier.empty()) {
        const std::uint32_t idx = frontier.back();
        frontier.pop_back();
        const int ix = static_cast<int>(idx % nx);
        const int iy = static_cast<int>(idx / nx);
        const int nbr[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
        for (const auto& [jx, jy] : nbr) {
            if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
            const std::size_t j = grid.index(jx, jy);
            if (mask[j] == 0) {
                mask[j] = 2;
                frontier.push_back(static_cast<std::uint32_t>(j));
            }
        }
    }

    // Start: first right-region cell right of the rightmost bottom-row hull
    // cell (gamma is rooted at the bottom edge).
    int start_x = -1;
    for (int ix = nx - 1; ix >= 0; --ix)
        if (is_hull(ix, 0)) {
            start_x = ix + 1;
            break;
        }
    if (start_x < 0 || start_x >= nx) return std::nullopt;
    while (start_x < nx && mask[grid.index(start_x, 0)] != 2) ++start_x;
    if (start_x >= nx) return std::nullopt;

    // Wall follower on the right region, hull kept on the left hand while
    // heading up; 4-connected moves.  dir: 0 = +x, 1 = +y, 2 = -x, 3 = -y.
    static const int mdx[4] = {1, 0, -1, 0};
    static const int mdy[4] = {0, 1, 0, -1};
    int cx = start_x, cy = 0, dir = 1;
    std::vector<std::pair<int, int>> path;
    path.emplace_back(cx, cy);
    const std::size_t limit = 8 * grid.roles.size() + 64;
    bool reached_top = false;
    auto open = [&](int ix, int iy) {
        return ix >= 0 && ix < nx && iy >= 0 && iy < ny && mask[grid.index(ix, iy)] == 2;
    };
    for (std::size_t step = 0; step < limit; ++step) {
        if (cy == ny - 1) {
            reached_top = true;
            break;
        }
        // Left-hand rule: try left turn, straight, right turn, back.
        bool moved = false;
        for (int turn = 1; turn >= -2; --turn) {
            const int nd = (dir + turn + 4) % 4;
            const int jx = cx + mdx[nd];
            const int jy = cy + mdy[nd];
            if (open(jx, jy)) {
                cx = jx;
                cy = jy;
                dir = nd;
                path.emplace_back(cx, cy);
                moved = true;
                break;
            }
        }
        if (!moved) break;  // trapped
    }
    if (!reached_top) return std::nullopt;

    hull.grid_nx = nx;
    hull.grid_ny = ny;
    hull.grid_cell = grid.cell_size;
    hull.eta.reserve(path.size());
    for (const auto& [ix, iy] : path) {
        hull.eta.push_back(grid.cell_center(ix, iy));
        hull.eta_cells.push_back(static_cast<std::uint32_t>(grid.index(ix, iy)));
    }
    std::sort(hull.eta_cells.begin(), hull.eta_cells.end());
    hull.eta_cells.erase(std::unique(hull.eta_cells.begin(), hull.eta_cells.end()),
                         hull.eta_cells.end());
    return hull;
}

std::optional<HullSample> run_chordal_sample(const ChordalSetup& setup) {
    const std::vector<Vec2> gamma = sample_restriction_curve(setup);
    if (gamma.empty() || gamma.back().y < setup.box.height) return std::nullopt;  // side exit
    const LoopSoup soup = sample_soup(setup.soup_config());
    const ClusterSet clusters = build_clusters(soup, setup.touch_distance);
    return right_boundary(setup, gamma, soup, clusters);
}

std::optional<double> crossing_abscissa(std::span<const Vec2> curve, double height) {
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (curve[i].y >= height) {
            if (i == 0) return curve[i].x;
            const Vec2& a = curve[i - 1];
            const Vec2& b = curve[i];
            const double t = (b.y > a.y) ? (height - a.y) / (b.y - a.y) : 1.0;
            return a.x + t * (b.x - a.x);
        }
    }
    return std::nullopt;
}

std::vector<Vec2> inverted_curve(std::span<const Vec2> curve) {
    std::vector<Vec2> out;
    out.reserve(curve.size());
    for (std::size_t i = curve.size(); i > 0; --i) {
        const Vec2& p = curve[i - 1];
        const double n2 = p.norm2();
        if (n2 <= 0.0) continue;  // the origin maps to infinity; skip it
        out.push_back({-p.x / n2, p.y / n2});
    }
    return out;
}

ReversibilityReport reversibility_statistic(const std::vector<std::vector<Vec2>>& etas,
                                            double height) {
    ReversibilityReport report;
    for (const auto& eta : etas) {
        const auto direct = crossing_abscissa(eta, height);
        if (!direct) {
            ++report.n_dropped;
            continue;
        }
        const auto image = inverted_curve(eta);
        const auto transformed = crossing_abscissa(image, height);
        if (!transformed) {
            ++report.n_dropped;
            continue;
        }
        report.crossing_abscissas.push_back(*direct);
        report.transformed_abscissas.push_back(*transformed);
        ++report.n_used;
    }
    if (report.n_used >= 2)
        report.ks = ks_two_sample(report.crossing_abscissas, report.transformed_abscissas);
    return report;
}

}  // namespace loopsoup
