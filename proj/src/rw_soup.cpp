#include "loopsoup/rw_soup.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "loopsoup/rng.hpp"

namespace loopsoup {

namespace {

void enumerate_recursive(int remaining, int x, int y, std::vector<std::pair<std::int8_t, std::int8_t>>& walk,
                         std::vector<LatticeShape>& out) {
    if (remaining == 0) {
        if (x == 0 && y == 0) {
            LatticeShape shape;
            shape.points = walk;
            for (const auto& [px, py] : walk) {
                shape.min_x = std::min(shape.min_x, px);
                shape.max_x = std::max(shape.max_x, px);
                shape.min_y = std::min(shape.min_y, py);
                shape.max_y = std::max(shape.max_y, py);
            }
            out.push_back(std::move(shape));
        }
        return;
    }
    if (std::abs(x) + std::abs(y) > remaining) return;  // cannot return in time
    static const int dx[4] = {1, -1, 0, 0};
    static const int dy[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
        walk.emplace_back(static_cast<std::int8_t>(x + dx[d]), static_cast<std::int8_t>(y + dy[d]));
        enumerate_recursive(remaining - 1, x + dx[d], y + dy[d], walk, out);
        walk.pop_back();
    }
}

std::map<int, std::vector<LatticeShape>> g_shape_cache;
std::mutex g_shape_mutex;

}  // namespace

const std::vector<LatticeShape>& enumerate_closed_walks(int length) {
    if (length < 4 || length % 2 != 0 || length > 16)
        throw std::invalid_argument("enumerate_closed_walks: even length in [4, 16] required");
    std::lock_guard<std::mutex> lock(g_shape_mutex);
    auto it = g_shape_cache.find(length);
    if (it != g_shape_cache.end()) return it->second;

    std::vector<LatticeShape> shapes;
    std::vector<std::pair<std::int8_t, std::int8_t>> walk;
    walk.emplace_back(0, 0);
    enumerate_recursive(length, 0, 0, walk, shapes);
    return g_shape_cache.emplace(length, std::move(shapes)).first->second;
}

std::pair<double, double> rw_matched_continuum_cutoffs(double lattice_step, int l_min, int l_max) {
    const double unit = lattice_step * lattice_step / 2.0;
    return {(l_min - 0.5) * unit, (l_max + 1.5) * unit};
}

RwSoupResult sample_rw_loop_soup(double lattice_step, const SoupConfig& config, int max_length) {
    if (!(lattice_step > 0.0))
        throw std::invalid_argument("sample_rw_loop_soup: lattice_step must be > 0");
    config.validate();

    const double eps = lattice_step;
    const double unit = eps * eps / 2.0;  // duration of one lattice step

    auto even_up = [](int v) { return v % 2 == 0 ? v : v + 1; };
    auto even_down = [](int v) { return v % 2 == 0 ? v : v - 1; };
    int l_min = std::max(4, even_up(static_cast<int>(std::ceil(config.t_min / unit - 1e-9))));
    int l_max = std::min(max_length,
                         even_down(static_cast<int>(std::floor(config.t_max / unit + 1e-9))));

    RwSoupResult result;
    result.soup.config = config;
    result.l_min = l_min;
    result.l_max = l_max;
    if (l_max < l_min) {
        result.no_loops_warning = true;
        return result;
    }

    // Bucket shapes of each length by bounding box; all shapes in a bucket
    // fit or fail together at a given site, so one Poisson draw per
    // (site, length) with mean (#fitting shapes) * c (1/4)^L / L suffices.
    struct BucketedLength {
        int length;
        double per_shape_mean;
        std::vector<std::pair<std::array<std::int8_t, 4>, std::vector<std::uint32_t>>> buckets;
    };
    std::vector<BucketedLength> lengths;
    for (int L = l_min; L <= l_max; L += 2) {
        const auto& shapes = enumerate_closed_walks(L);
        BucketedLength bl;
        bl.length = L;
        bl.per_shape_mean =
            config.intensity_c * std::pow(0.25, L) / static_cast<double>(L);
        std::map<std::array<std::int8_t, 4>, std::vector<std::uint32_t>> grouping;
        for (std::uint32_t s = 0; s < shapes.size(); ++s) {
            grouping[{shapes[s].min_x, shapes[s].max_x, shapes[s].min_y, shapes[s].max_y}]
                .push_back(s);
        }
        bl.buckets.assign(grouping.begin(), grouping.end());
        lengths.push_back(std::move(bl));
    }

    // Lattice sites strictly inside the domain bounding box.
    const BBox box = config.domain.bbox();
    const auto ix0 = static_cast<long>(std::ceil(box.lo.x / eps));
    const auto ix1 = static_cast<long>(std::floor(box.hi.x / eps));
    const auto iy0 = static_cast<long>(std::ceil(box.lo.y / eps));
    const auto iy1 = static_cast<long>(std::floor(box.hi.y / eps));

    std::uint64_t site_counter = 0;
    for (long sy = iy0; sy <= iy1; ++sy) {
        for (long sx = ix0; sx <= ix1; ++sx, ++site_counter) {
            const Vec2 site{static_cast<double>(sx) * eps, static_cast<double>(sy) * eps};
            if (!config.domain.point_in(site)) continue;
            for (std::size_t lidx = 0; lidx < lengths.size(); ++lidx) {
                const auto& bl = lengths[lidx];
                // Bucket fits iff its bbox corners stay inside the domain.
                std::vector<std::uint32_t> fit_sizes;
                std::vector<std::size_t> fit_buckets;
                std::uint64_t total_fit = 0;
                for (std::size_t b = 0; b < bl.buckets.size(); ++b) {
                    const auto& key = bl.buckets[b].first;
                    const Vec2 lo{site.x + key[0] * eps, site.y + key[2] * eps};
                    const Vec2 hi{site.x + key[1] * eps, site.y + key[3] * eps};
                    if (config.domain.point_in(lo) && config.domain.point_in(hi) &&
                        config.domain.point_in({lo.x, hi.y}) &&
                        config.domain.point_in({hi.x, lo.y})) {
                        fit_buckets.push_back(b);
                        fit_sizes.push_back(static_cast<std::uint32_t>(bl.buckets[b].second.size()));
                        total_fit += bl.buckets[b].second.size();
                    }
                }
                if (total_fit == 0) continue;

                Rng rng(config.seed,
                        streams::kLatticeBase + site_counter * 64 + lidx);
                const std::uint64_t count =
                    rng.poisson(static_cast<double>(total_fit) * bl.per_shape_mean);
                for (std::uint64_t k = 0; k < count; ++k) {
                    // Uniform over fitting rooted shapes.
                    std::uint64_t pick =
                        static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(total_fit));
                    if (pick >= total_fit) pick = total_fit - 1;
                    std::size_t b = 0;
                    while (pick >= fit_sizes[b]) {
                        pick -= fit_sizes[b];
                        ++b;
                    }
                    const auto& shapes = enumerate_closed_walks(bl.length);
                    const LatticeShape& shape =
                        shapes[bl.buckets[fit_buckets[b]].second[pick]];

                    Loop loop;
                    loop.root = site;
                    loop.duration = static_cast<double>(bl.length) * unit;
                    loop.points.reserve(shape.points.size());
                    for (const auto& [px, py] : shape.points)
                        loop.points.push_back({site.x + px * eps, site.y + py * eps});
                    loop.bbox = bbox_of(loop.points);
                    result.soup.loops.push_back(std::move(loop));
                }
            }
        }
    }
    return result;
}

}  // namespace loopsoup
