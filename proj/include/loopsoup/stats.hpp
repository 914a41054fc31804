// Small statistics toolbox: summaries, least-squares fits, two-sample
// Kolmogorov-Smirnov tests.  All tests here are the generic machinery; the
// physics assertions live with the experiments that use them.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace loopsoup {

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double stderr_mean = 0.0;
};

Summary summarize(std::span<const double> xs);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares of y against x.  Requires >= 3 points for a
// finite slope stderr.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct KsResult {
    double statistic = 0.0;  // sup |F_a - F_b|
    double p_value = 1.0;    // asymptotic, Stephens-corrected
    std::size_t n_a = 0;
    std::size_t n_b = 0;
};

// Two-sample Kolmogorov-Smirnov test. Ties are handled by comparing the
// empirical CDFs at pooled jump points (conservative for discrete data).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Complement of the Kolmogorov distribution, Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

}  // namespace loopsoup
