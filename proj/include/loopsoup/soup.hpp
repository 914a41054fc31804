// Brownian loop soup sampler.
//
// A soup is a Poisson collection of Brownian bridge loops in a bounded
// domain.  The rooted loop measure is dz (x) dt/(2 pi t^2) (x) bridge law,
// truncated to durations [t_min, t_max]; intensity c multiplies it.
// Superposing two independent soups of intensity c yields a soup of
// intensity 2c, and restricting to loops that stay in a subdomain yields a
// soup of the subdomain -- both properties are exercised by the test suite.

#pragma once

#include <cstdint>
#include <vector>

#include "loopsoup/domain.hpp"
#include "loopsoup/geometry.hpp"
#include "loopsoup/rng.hpp"

namespace loopsoup {

// A rooted closed path, stored as a polyline with points.front() ==
// points.back() == root exactly.
struct Loop {
    Vec2 root;
    double duration = 0.0;
    std::vector<Vec2> points;
    BBox bbox;

    std::size_t segment_count() const { return points.empty() ? 0 : points.size() - 1; }
};

struct SoupConfig {
    Domain domain;
    double intensity_c = 1.0;
    double t_min = 0.01;       // UV duration cutoff
    double t_max = 1.0;        // upper duration cutoff
    double step_scale = 1.0 / 4096.0;  // points per loop: max(64, ceil(duration/step_scale))
    std::uint64_t seed = 1;

    void validate() const;
    bool operator==(const SoupConfig&) const = default;
};

struct LoopSoup {
    SoupConfig config;
    std::vector<Loop> loops;
};

// Mean of the Poisson candidate count before domain rejection,
// c * Area(domain bbox) * (1/t_min - 1/t_max) / (2 pi); an upper bound on
// the accepted count.
double expected_loop_count(const SoupConfig& config);

// Points-per-loop rule shared by all samplers.
std::size_t loop_point_count(double duration, double step_scale);

// Inverse-CDF draw of a duration with density proportional to 1/t^2 on
// [t_min, t_max]:  t = 1 / (1/t_min - u * (1/t_min - 1/t_max)).
double sample_duration(double t_min, double t_max, double u);

// Discrete Brownian bridge from root back to root: Gaussian increments of
// variance duration/(n-1) per coordinate, then the linear correction that
// closes the path exactly.
Loop sample_brownian_bridge_loop(const Vec2& root, double duration, std::size_t n_points, Rng& rng);

// Draws N ~ Poisson(expected_loop_count), samples N candidate loops rooted
// uniformly in the domain bounding box, and keeps those whose points all lie
// inside the domain.  Deterministic given config.
LoopSoup sample_soup(const SoupConfig& config);

// Loops of soup that stay inside sub; config rewritten with domain = sub.
// Throws std::invalid_argument if sub is not contained in the soup's domain.
LoopSoup restrict_soup(const LoopSoup& soup, const Domain& sub);

// Superposition of two soups (intensity adds). Configs must share domain and
// cutoffs; the left seed is kept.
LoopSoup merge_soups(const LoopSoup& a, const LoopSoup& b);

}  // namespace loopsoup
