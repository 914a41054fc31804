// Intensity/kappa/alpha dictionary, box-counting dimension estimation and
// the percolation sweep in c.
//
// The dictionary on (8/3, 4]:
//   c(kappa)          = (3 kappa - 8)(6 - kappa) / (2 kappa)
//   alpha(kappa)      = (6 - kappa) / (2 kappa)
//   alpha(kappa, rho) = (rho + 2)(rho + 6 - kappa) / (4 kappa)
// kappa_of_c inverts the first relation on c in (0, 1]; rho_for_alpha solves
// the third for rho > -2.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "loopsoup/soup.hpp"

namespace loopsoup {

double c_of_kappa(double kappa);
double kappa_of_c(double c);
double alpha_of_kappa(double kappa);
double alpha_of_kappa_rho(double kappa, double rho);
double rho_for_alpha(double kappa, double alpha);

struct DimensionEstimate {
    double slope = 0.0;    // estimated dimension (trimmed fit when it helps)
    double stderr_ = 0.0;
    double r2 = 0.0;
    std::vector<std::pair<double, std::size_t>> scales;  // (box size, box count), size decreasing
    // Full-range fit kept alongside the cutoff-guarded one.
    double slope_full = 0.0;
    double r2_full = 0.0;
    bool trimmed = false;
};

// Box counts of occupied cells of an nx * ny base grid at the given box
// sizes (in base cells, each >= 1), least-squares slope of log(count)
// against log(1/size).  At least 4 scales; the two smallest scales are
// excluded when doing so improves r^2 (UV-cutoff guard), with both fits
// reported.  nullopt when the cell set is empty.
std::optional<DimensionEstimate> box_counting_dimension(const std::vector<std::uint32_t>& cells,
                                                        int nx, int ny, double cell_size,
                                                        const std::vector<int>& box_sizes);

// Convenience: rasterize a polyline on a resolution^2 grid over its bounding
// box (squared up), then box count with power-of-two scales.
std::optional<DimensionEstimate> polyline_box_dimension(std::span<const Vec2> polyline,
                                                        int resolution,
                                                        const std::vector<int>& box_sizes);

struct SweepResult {
    std::vector<double> c_values;
    std::vector<double> crossing_probability;
    std::size_t n_samples = 0;
    double t_min = 0.0;
    double t_max = 0.0;
    int resolution = 0;
    std::optional<double> midpoint;  // c where the probability crosses 1/2
};

// Crossing probability as a function of c under monotone coupling: for each
// seed the soup at c_{k+1} is the soup at c_k plus an independent increment,
// so crossings can only switch off as c grows.  base.intensity_c is ignored.
SweepResult percolation_sweep(const std::vector<double>& c_grid, const SoupConfig& base,
                              int resolution, std::size_t n_samples, unsigned n_threads = 0);

// Per-seed crossing indicators and trace-free area fractions for the same
// coupling (row-major seed x c); used by the monotonicity checks and the
// CSV report.
struct SweepSamples {
    std::vector<std::vector<std::uint8_t>> crossed;
    std::vector<std::vector<double>> free_fraction;
};

SweepSamples percolation_sweep_samples(const std::vector<double>& c_grid, const SoupConfig& base,
                                       int resolution, std::size_t n_samples,
                                       unsigned n_threads = 0);

std::vector<std::vector<std::uint8_t>> percolation_sweep_matrix(const std::vector<double>& c_grid,
                                                                const SoupConfig& base,
                                                                int resolution,
                                                                std::size_t n_samples,
                                                                unsigned n_threads = 0);

std::optional<double> sweep_midpoint(const std::vector<double>& c_values,
                                     const std::vector<double>& probabilities);

// Occupied cells of a Sierpinski-carpet raster at side 3^depth; calibration
// target log 8 / log 3.
std::vector<std::uint32_t> sierpinski_carpet_cells(int depth);

}  // namespace loopsoup
