#include "loopsoup/soup.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loopsoup {

void SoupConfig::validate() const {
    if (intensity_c < 0.0) throw std::invalid_argument("soup config: intensity_c must be >= 0");
    if (!(t_min > 0.0)) throw std::invalid_argument("soup config: t_min must be > 0");
    if (!(t_max > 0.0)) throw std::invalid_argument("soup config: t_max must be > 0");
    if (!(t_min < t_max)) throw std::invalid_argument("soup config: t_min must be < t_max");
    if (!(step_scale > 0.0)) throw std::invalid_argument("soup config: step_scale must be > 0");
}

double expected_loop_count(const SoupConfig& config) {
    config.validate();
    const double area = config.domain.bbox().area();
    return config.intensity_c * area * (1.0 / config.t_min - 1.0 / config.t_max) /
           (2.0 * std::numbers::pi);
}

std::size_t loop_point_count(double duration, double step_scale) {
    const double n = std::ceil(duration / step_scale);
    return std::max<std::size_t>(64, static_cast<std::size_t>(n));
}

double sample_duration(double t_min, double t_max, double u) {
    return 1.0 / (1.0 / t_min - u * (1.0 / t_min - 1.0 / t_max));
}

Loop sample_brownian_bridge_loop(const Vec2& root, double duration, std::size_t n_points,
                                 Rng& rng) {
    if (!(duration > 0.0)) throw std::invalid_argument("bridge loop: duration must be > 0");
    if (n_points < 3) throw std::invalid_argument("bridge loop: need at least 3 points");

    const std::size_t steps = n_points - 1;
    const double sd = std::sqrt(duration / static_cast<double>(steps));

    // Free walk first, both coordinates independent.
    std::vector<Vec2> walk(n_points);
    walk[0] = {0.0, 0.0};
    for (std::size_t k = 1; k < n_points; ++k) {
        walk[k].x = walk[k - 1].x + sd * rng.gaussian();
        walk[k].y = walk[k - 1].y + sd * rng.gaussian();
    }

    // Bridge correction: subtract (k/steps) * endpoint drift.
    Loop loop;
    loop.root = root;
    loop.duration = duration;
    loop.points.resize(n_points);
    const Vec2 drift = walk[steps];
    for (std::size_t k = 0; k < n_points; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(steps);
        loop.points[k] = root + walk[k] - drift * frac;
    }
    loop.points[0] = root;
    loop.points[steps] = root;  // closes exactly
    loop.bbox = bbox_of(loop.points);
    return loop;
}

LoopSoup sample_soup(const SoupConfig& config) {
    config.validate();
    LoopSoup soup;
    soup.config = config;

    Rng meta(config.seed, streams::kSoupMeta);
    const std::uint64_t n_candidates = meta.poisson(expected_loop_count(config));
    const BBox box = config.domain.bbox();

    for (std::uint64_t i = 0; i < n_candidates; ++i) {
        Rng rng(config.seed, streams::kLoopBase + i);
        const Vec2 root{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y)};
        const double duration = sample_duration(config.t_min, config.t_max, rng.uniform());
        Loop loop = sample_brownian_bridge_loop(root, duration,
                                                loop_point_count(duration, config.step_scale), rng);

        bool inside = true;
        for (const auto& p : loop.points) {
            if (!config.domain.point_in(p)) {
                inside = false;
                break;
            }
        }
        if (inside) soup.loops.push_back(std::move(loop));
    }
    return soup;
}

LoopSoup restrict_soup(const LoopSoup& soup, const Domain& sub) {
    if (!domain_contains(soup.config.domain, sub))
        throw std::invalid_argument("restrict_soup: subdomain not contained in soup domain");

    LoopSoup out;
    out.config = soup.config;
    out.config.domain = sub;
    for (const auto& loop : soup.loops) {
        bool inside = true;
        for (const auto& p : loop.points) {
            if (!sub.point_in(p)) {
                inside = false;
                break;
            }
        }
        if (inside) out.loops.push_back(loop);
    }
    return out;
}

LoopSoup merge_soups(const LoopSoup& a, const LoopSoup& b) {
    if (a.config.domain.kind != b.config.domain.kind || a.config.t_min != b.config.t_min ||
        a.config.t_max != b.config.t_max)
        throw std::invalid_argument("merge_soups: configs must share domain and cutoffs");
    LoopSoup out;
    out.config = a.config;
    out.config.intensity_c = a.config.intensity_c + b.config.intensity_c;
    out.loops = a.loops;
    out.loops.insert(out.loops.end(), b.loops.begin(), b.loops.end());
    return out;
}

}  // namespace loopsoup
