// The chordal pipeline: sample a one-sided restriction curve gamma, attach
// the loop-soup clusters it intersects, extract the right boundary eta, and
// test eta's SLE(kappa) statistics.
//
// The restriction sample with exponent alpha is realized as an SLE(8/3, rho)
// trace with rho solving (rho + 2)(rho + 6 - 8/3) = (32/3) alpha; alpha and
// the soup intensity are tied to the target kappa by alpha = (6 - kappa) /
// (2 kappa) and c = (3 kappa - 8)(6 - kappa) / (2 kappa).  gamma runs upward
// from the bottom of a truncated half-plane box; "right" is the +Re side.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "loopsoup/cluster.hpp"
#include "loopsoup/raster.hpp"
#include "loopsoup/sle.hpp"
#include "loopsoup/soup.hpp"
#include "loopsoup/stats.hpp"

namespace loopsoup {

struct ChordalSetup {
    double kappa = 3.0;   // target, in (8/3, 4]
    double alpha = 0.0;   // defaults to (6 - kappa) / (2 kappa)
    double c = 0.0;       // defaults to c_of_kappa(kappa)
    Domain box = Domain::half_plane_box(6.0, 2.0);
    double t_min = 0.01;
    double t_max = 1.0;
    double step_scale = 1.0 / 4096.0;
    double driving_dt = 1e-4;
    double touch_distance = 0.0;
    int resolution = 512;
    std::uint64_t seed = 1;

    // Fills defaulted fields and checks mutual consistency.
    static ChordalSetup for_kappa(double kappa, std::uint64_t seed);
    void validate() const;

    SoupConfig soup_config() const;
};

struct HullSample {
    std::vector<Vec2> gamma;                        // restriction curve sample
    std::vector<std::uint32_t> attached_cluster_ids;
    std::vector<Vec2> eta;                          // right boundary, bottom to top
    std::vector<std::uint32_t> eta_cells;           // raster cells of eta, sorted
    int grid_nx = 0;
    int grid_ny = 0;
    double grid_cell = 0.0;
};

// SLE(8/3, rho_for_alpha(8/3, alpha)) trace clipped to the box; the driving
// horizon doubles until the trace reaches the top edge (a few times at most).
// gamma and the soup consume disjoint RNG streams.
std::vector<Vec2> sample_restriction_curve(const ChordalSetup& setup);

// Ids of clusters owning at least one loop whose polyline meets gamma.
std::vector<std::uint32_t> attach_clusters(const std::vector<Vec2>& gamma, const LoopSoup& soup,
                                           const ClusterSet& clusters, double touch_distance = 0.0);

// Right boundary of gamma plus the attached clusters: the interface between
// the region flooded from the right edge of the box and the hull, walked
// bottom to top with the hull on the left.  nullopt when the geometry
// degenerates (gamma does not span the box, or the right region vanishes).
std::optional<HullSample> right_boundary(const ChordalSetup& setup, const std::vector<Vec2>& gamma,
                                         const LoopSoup& soup, const ClusterSet& clusters);

// Full pipeline for one seed; nullopt when any stage degenerates.
std::optional<HullSample> run_chordal_sample(const ChordalSetup& setup);

struct ReversibilityReport {
    KsResult ks;
    std::size_t n_used = 0;
    std::size_t n_dropped = 0;  // curves that never reach the reference height
    std::vector<double> crossing_abscissas;
    std::vector<double> transformed_abscissas;
};

// Crossing abscissa where a curve first reaches the given height.
std::optional<double> crossing_abscissa(std::span<const Vec2> curve, double height);

// Applies z -> -1/z pointwise and reverses orientation, so a curve from 0
// toward infinity maps to another such curve.
std::vector<Vec2> inverted_curve(std::span<const Vec2> curve);

// Two-sample KS between the height-1 crossing abscissas of the curves and of
// their inverted images.
ReversibilityReport reversibility_statistic(const std::vector<std::vector<Vec2>>& etas,
                                            double height = 1.0);

}  // namespace loopsoup
