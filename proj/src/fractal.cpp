#include "loopsoup/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>


#include "loopsoup/parallel.hpp"
#include "loopsoup/raster.hpp"
#include "loopsoup/stats.hpp"

namespace loopsoup {

double c_of_kappa(double kappa) {
    if (!(kappa > 8.0 / 3.0) || !(kappa <= 4.0))
        throw std::invalid_argument("c_of_kappa: kappa must lie in (8/3, 4]");
    return (3.0 * kappa - 8.0) * (6.0 - kappa) / (2.0 * kappa);
}

double kappa_of_c(double c) {
    if (!(c > 0.0) || !(c <= 1.0)) throw std::invalid_argument("kappa_of_c: c must lie in (0, 1]");
    // Root of 3 k^2 + (2c - 26) k + 48 = 0 lying in (8/3, 4].
    const double b = 26.0 - 2.0 * c;
    const double disc = b * b - 576.0;
    return (b - std::sqrt(std::max(disc, 0.0))) / 6.0;
}

double alpha_of_kappa(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("alpha_of_kappa: kappa must be > 0");
    return (6.0 - kappa) / (2.0 * kappa);
}

double alpha_of_kappa_rho(double kappa, double rho) {
    if (!(kappa > 0.0)) throw std::invalid_argument("alpha_of_kappa_rho: kappa must be > 0");
    return (rho + 2.0) * (rho + 6.0 - kappa) / (4.0 * kappa);
}

double rho_for_alpha(double kappa, double alpha) {
    if (!(kappa > 0.0)) throw std::invalid_argument("rho_for_alpha: kappa must be > 0");
    // (rho + 2)(rho + 6 - kappa) = 4 kappa alpha, root with rho > -2.
    const double b = 8.0 - kappa;
    const double c0 = 12.0 - 2.0 * kappa - 4.0 * kappa * alpha;
    const double disc = b * b - 4.0 * c0;
    if (disc < 0.0) throw std::invalid_argument("rho_for_alpha: no real root");
    const double rho = (-b + std::sqrt(disc)) / 2.0;
    if (!(rho > -2.0)) throw std::invalid_argument("rho_for_alpha: no admissible root > -2");
    return rho;
}

std::optional<DimensionEstimate> box_counting_dimension(const std::vector<std::uint32_t>& cells,
                                                        int nx, int ny, double cell_size,
                                                        const std::vector<int>& box_sizes) {
    if (cells.empty()) return std::nullopt;
    if (box_sizes.size() < 4)
        throw std::invalid_argument("box_counting_dimension: need >= 4 scales");
    std::vector<int> sizes = box_sizes;
    std::sort(sizes.begin(), sizes.end(), std::greater<int>());
    if (sizes.back() < 1) throw std::invalid_argument("box_counting_dimension: box size < 1");

    // ny is implied by the index range; boxes are marked in a coarse bitmap.
    std::uint32_t max_iy = 0;
    for (const auto idx : cells) max_iy = std::max(max_iy, idx / static_cast<std::uint32_t>(nx));
    const std::uint32_t rows = std::max<std::uint32_t>(max_iy + 1, ny > 0 ? ny : 1);

    DimensionEstimate est;
    std::vector<double> log_inv_size, log_count;
    std::vector<std::uint8_t> bitmap;
    for (const int s : sizes) {
        const std::uint32_t bx_count = (static_cast<std::uint32_t>(nx) + s - 1) / s;
        const std::uint32_t by_count = (rows + s - 1) / s;
        bitmap.assign(static_cast<std::size_t>(bx_count) * by_count, 0);
        std::size_t occupied = 0;
        for (const auto idx : cells) {
            const std::uint32_t bx = (idx % static_cast<std::uint32_t>(nx)) / s;
            const std::uint32_t by = (idx / static_cast<std::uint32_t>(nx)) / s;
            std::uint8_t& bit = bitmap[static_cast<std::size_t>(by) * bx_count + bx];
            occupied += 1 - bit;
            bit = 1;
        }
        est.scales.emplace_back(s * cell_size, occupied);
        log_inv_size.push_back(std::log(1.0 / (s * cell_size)));
        log_count.push_back(std::log(static_cast<double>(occupied)));
    }

    const LinearFit full = linear_fit(log_inv_size, log_count);
    est.slope_full = full.slope;
    est.r2_full = full.r2;
    est.slope = full.slope;
    est.stderr_ = full.slope_stderr;
    est.r2 = full.r2;

    // Cutoff guard: the two smallest boxes may sit below the UV cutoff of
    // whatever produced the set; drop them when the fit genuinely improves.
    if (sizes.size() >= 6) {
        const std::span<const double> xs(log_inv_size.data(), log_inv_size.size() - 2);
        const std::span<const double> ys(log_count.data(), log_count.size() - 2);
        const LinearFit trimmed = linear_fit(xs, ys);
        if (trimmed.r2 > full.r2) {
            est.slope = trimmed.slope;
            est.stderr_ = trimmed.slope_stderr;
            est.r2 = trimmed.r2;
            est.trimmed = true;
        }
    }
    return est;
}

std::optional<DimensionEstimate> polyline_box_dimension(std::span<const Vec2> polyline,
                                                        int resolution,
                                                        const std::vector<int>& box_sizes) {
    if (polyline.size() < 2) return std::nullopt;
    BBox box = bbox_of(polyline);
    // Square the box up so cells are square.
    const double side = std::max(box.width(), box.height());
    if (!(side > 0.0)) return std::nullopt;
    const Vec2 mid{(box.lo.x + box.hi.x) / 2.0, (box.lo.y + box.hi.y) / 2.0};
    box = {{mid.x - side / 2.0, mid.y - side / 2.0}, {mid.x + side / 2.0, mid.y + side / 2.0}};
    box = box.inflated(side * 1e-9);

    RasterGrid grid = RasterGrid::over(box, resolution);
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
        mark_segment(grid, polyline[i], polyline[i + 1]);

    std::vector<std::uint32_t> cells;
    for (std::size_t i = 0; i < grid.roles.size(); ++i)
        if (grid.roles[i] != 0) cells.push_back(static_cast<std::uint32_t>(i));
    return box_counting_dimension(cells, grid.nx, grid.ny, grid.cell_size, box_sizes);
}

SweepSamples percolation_sweep_samples(const std::vector<double>& c_grid, const SoupConfig& base,
                                       int resolution, std::size_t n_samples,
                                       unsigned n_threads) {
    if (c_grid.empty()) throw std::invalid_argument("percolation_sweep: empty c grid");
    for (std::size_t k = 1; k < c_grid.size(); ++k)
        if (!(c_grid[k] > c_grid[k - 1]))
            throw std::invalid_argument("percolation_sweep: c grid must increase");

    SweepSamples out;
    out.crossed.assign(n_samples, std::vector<std::uint8_t>(c_grid.size(), 0));
    out.free_fraction.assign(n_samples, std::vector<double>(c_grid.size(), 1.0));
    parallel_for(
        n_samples,
        [&](std::size_t sample) {
            // Monotone coupling: grow one soup by superposing independent
            // increments, rasterizing into the same grid.
            RasterGrid grid = RasterGrid::over(base.domain.bbox(), resolution);
            double c_prev = 0.0;
            for (std::size_t k = 0; k < c_grid.size(); ++k) {
                SoupConfig inc = base;
                inc.intensity_c = c_grid[k] - c_prev;
                inc.seed = derive_seed(base.seed, sample * 1000003ULL + k);
                c_prev = c_grid[k];
                const LoopSoup soup = sample_soup(inc);
                for (const auto& loop : soup.loops) rasterize_loop(grid, loop);
                out.crossed[sample][k] = crossing_exists(grid, CrossingSide::left_right) ? 1 : 0;
                const std::size_t covered = grid.count_role(CellRole::loop_trace);
                out.free_fraction[sample][k] =
                    1.0 - static_cast<double>(covered) / static_cast<double>(grid.roles.size());
            }
        },
        n_threads);
    return out;
}

std::vector<std::vector<std::uint8_t>> percolation_sweep_matrix(const std::vector<double>& c_grid,
                                                                const SoupConfig& base,
                                                                int resolution,
                                                                std::size_t n_samples,
                                                                unsigned n_threads) {
    return percolation_sweep_samples(c_grid, base, resolution, n_samples, n_threads).crossed;
}

std::optional<double> sweep_midpoint(const std::vector<double>& c_values,
                                     const std::vector<double>& probabilities) {
    for (std::size_t k = 0; k + 1 < c_values.size(); ++k) {
        const double p0 = probabilities[k];
        const double p1 = probabilities[k + 1];
        if (p0 >= 0.5 && p1 < 0.5) {
            const double t = (p0 - 0.5) / (p0 - p1);
            return c_values[k] + t * (c_values[k + 1] - c_values[k]);
        }
    }
    return std::nullopt;
}

SweepResult percolation_sweep(const std::vector<double>& c_grid, const SoupConfig& base,
                              int resolution, std::size_t n_samples, unsigned n_threads) {
    const auto crossed = percolation_sweep_matrix(c_grid, base, resolution, n_samples, n_threads);

    SweepResult result;
    result.c_values = c_grid;
    result.n_samples = n_samples;
    result.t_min = base.t_min;
    result.t_max = base.t_max;
    result.resolution = resolution;
    result.crossing_probability.assign(c_grid.size(), 0.0);
    for (std::size_t k = 0; k < c_grid.size(); ++k) {
        std::size_t hits = 0;
        for (std::size_t s = 0; s < n_samples; ++s) hits += crossed[s][k];
        result.crossing_probability[k] =
            n_samples == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(n_samples);
    }
    result.midpoint = sweep_midpoint(result.c_values, result.crossing_probability);
    return result;
}

std::vector<std::uint32_t> sierpinski_carpet_cells(int depth) {
    if (depth < 1 || depth > 8) throw std::invalid_argument("sierpinski: depth in [1, 8]");
    int side = 1;
    for (int i = 0; i < depth; ++i) side *= 3;
    std::vector<std::uint32_t> cells;
    for (int iy = 0; iy < side; ++iy) {
        for (int ix = 0; ix < side; ++ix) {
            int x = ix, y = iy;
            bool keep = true;
            while (x > 0 || y > 0) {
                if (x % 3 == 1 && y % 3 == 1) {
                    keep = false;
                    break;
                }
                x /= 3;
                y /= 3;
            }
            if (keep)
                cells.push_back(static_cast<std::uint32_t>(iy) * static_cast<std::uint32_t>(side) +
                                static_cast<std::uint32_t>(ix));
        }
    }
    return cells;
}

}  // namespace loopsoup
