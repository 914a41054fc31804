// Chordal SLE(kappa) and SLE(kappa, rho) traces via the discrete Loewner
// (vertical slit / zipper) scheme.
//
// Driving: plain SLE has W Brownian with variance kappa t.  SLE(kappa, rho)
// adds the force-point drift  dW = sqrt(kappa) dB + rho dt / (W - O),
// dO = 2 dt / (O - W), with O started just left of W; substeps halve when
// W - O gets small, up to a bounded depth.
//
// Trace: gamma(t_k) is the composition of inverse slit maps
// z -> w_j + sqrt((z - w_j)^2 - 4 dt_j) applied from step k down to step 1,
// evaluated at the tip w_k + 2 i sqrt(dt_k).  Constant driving reproduces
// the vertical slit of height 2 sqrt(t) exactly.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "loopsoup/fractal.hpp"
#include "loopsoup/geometry.hpp"

namespace loopsoup {

struct DrivingPath {
    std::vector<double> times;   // strictly increasing, starts at 0
    std::vector<double> values;  // W at those times, W(0) = 0
    double kappa = 0.0;
    std::optional<double> rho;
    std::optional<double> force_point;  // initial O for SLE(kappa, rho)
    std::vector<double> force_values;   // O at the grid times (kappa, rho only)
};

// Thrown when a (kappa, rho) substep still violates the closeness guard at
// the maximum halving depth.
struct StepFailure : std::runtime_error {
    double time;
    explicit StepFailure(double t)
        : std::runtime_error("sle driving: step failure at t = " + std::to_string(t)), time(t) {}
};

// Driving path on the uniform grid dt, 2dt, ..., horizon.  rho, if given,
// must exceed -2.
DrivingPath sample_driving(double kappa, std::optional<double> rho, double horizon, double dt,
                           std::uint64_t seed);

struct SleTrace {
    std::vector<Vec2> points;  // gamma(t_k), starts at the origin, Im >= 0
    DrivingPath driving;
    double capacity_step = 0.0;
};

// Trace of the Loewner evolution driven by `driving`.  capacity_step > 0
// resamples W onto that uniform capacity grid first; 0 keeps the driving's
// own grid.  Branch failures (NaN) report the offending step.
SleTrace loewner_trace(const DrivingPath& driving, double capacity_step = 0.0,
                       unsigned n_threads = 0);

// Forward unzipping: recovers the driving values from a trace produced by
// the same discretization (the inverse-algorithm oracle).
std::vector<double> recover_driving(const SleTrace& trace);

// Box-counting dimension of the rasterized trace; requires >= 1e4 points.
std::optional<DimensionEstimate> trace_dimension(const SleTrace& trace,
                                                 const std::vector<int>& box_sizes,
                                                 int resolution = 1024);

}  // namespace loopsoup
