#include <doctest.h>

#include <cmath>

#include "loopsoup/fractal.hpp"
#include "loopsoup/rng.hpp"

using namespace loopsoup;

TEST_CASE("conversions: pinned values of the kappa/c dictionary") {
    CHECK(c_of_kappa(4.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c_of_kappa(3.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(kappa_of_c(1.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(kappa_of_c(0.5) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(c_of_kappa(8.0 / 3.0 + 1e-9) < 1e-8);  // vanishing at the left endpoint

    CHECK_THROWS_AS(c_of_kappa(8.0 / 3.0), std::invalid_argument);
    CHECK_THROWS_AS(c_of_kappa(4.0 + 1e-12), std::invalid_argument);
    CHECK_THROWS_AS(kappa_of_c(0.0), std::invalid_argument);
    CHECK_THROWS_AS(kappa_of_c(1.0 + 1e-12), std::invalid_argument);
}

TEST_CASE("conversions: strict monotonicity and inverse round trips") {
    Rng rng(606, 0);
    double prev_c = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double kappa = 8.0 / 3.0 + (4.0 - 8.0 / 3.0) * i / 100.0;
        const double c = c_of_kappa(kappa);
        CHECK(c > prev_c);
        prev_c = c;
    }
    double prev_k = 8.0 / 3.0;
    for (int i = 1; i <= 100; ++i) {
        const double c = static_cast<double>(i) / 100.0;
        const double k = kappa_of_c(c);
        CHECK(k > prev_k);
        prev_k = k;
    }
    for (int i = 0; i < 1000; ++i) {
        const double c = 1e-6 + (1.0 - 1e-6) * rng.uniform();
        CHECK(std::abs(c_of_kappa(kappa_of_c(c)) - c) < 1e-10);
    }
    for (int i = 0; i < 1000; ++i) {
        const double kappa = 8.0 / 3.0 + (4.0 - 8.0 / 3.0) * (1e-6 + (1.0 - 1e-6) * rng.uniform());
        CHECK(std::abs(kappa_of_c(c_of_kappa(kappa)) - kappa) < 1e-9);
    }
}

TEST_CASE("alpha formulas: endpoints, rho = 0 consistency, root recovery") {
    CHECK(alpha_of_kappa(8.0 / 3.0) == doctest::Approx(5.0 / 8.0).epsilon(1e-12));
    CHECK(alpha_of_kappa(4.0) == doctest::Approx(0.25).epsilon(1e-12));

    Rng rng(607, 0);
    for (int i = 0; i < 1000; ++i) {
        const double kappa = 0.5 + 7.5 * rng.uniform();
        CHECK(std::abs(alpha_of_kappa_rho(kappa, 0.0) - alpha_of_kappa(kappa)) < 1e-12);
    }
    CHECK(std::abs(rho_for_alpha(8.0 / 3.0, 5.0 / 8.0)) < 1e-10);

    // alpha is strictly decreasing in kappa.
    double prev = alpha_of_kappa(1.0);
    for (double kappa = 1.5; kappa <= 8.0; kappa += 0.5) {
        CHECK(alpha_of_kappa(kappa) < prev);
        prev = alpha_of_kappa(kappa);
    }

    // rho_for_alpha solves the defining quadratic.
    for (int i = 0; i < 200; ++i) {
        const double kappa = 2.0 + 3.0 * rng.uniform();
        const double alpha = 0.05 + rng.uniform();
        const double rho = rho_for_alpha(kappa, alpha);
        CHECK(rho > -2.0);
        CHECK(std::abs((rho + 2.0) * (rho + 6.0 - kappa) - 4.0 * kappa * alpha) < 1e-10);
    }
}

TEST_CASE("box counting: smooth curve, filled square, Sierpinski carpet") {
    // Axis-aligned segment: one row of 512 cells.
    std::vector<std::uint32_t> segment;
    for (int ix = 0; ix < 512; ++ix) segment.push_back(200 * 512 + ix);
    const auto seg_est =
        box_counting_dimension(segment, 512, 512, 1.0 / 512.0, {1, 2, 4, 8, 16, 32});
    REQUIRE(seg_est.has_value());
    CHECK(seg_est->slope == doctest::Approx(1.0).epsilon(0.05));

    // Filled square block.
    std::vector<std::uint32_t> filled;
    for (int iy = 0; iy < 512; ++iy)
        for (int ix = 0; ix < 512; ++ix) filled.push_back(iy * 512 + ix);
    const auto fill_est =
        box_counting_dimension(filled, 512, 512, 1.0 / 512.0, {1, 2, 4, 8, 16, 32});
    CHECK(fill_est->slope == doctest::Approx(2.0).epsilon(0.05));

    // Sierpinski carpet at depth 6 (side 729), scales in powers of 3.
    const auto cells = sierpinski_carpet_cells(6);
    CHECK(cells.size() == 262144);  // 8^6
    const auto carpet =
        box_counting_dimension(cells, 729, 729, 1.0 / 729.0, {1, 3, 9, 27, 81});
    const double target = std::log(8.0) / std::log(3.0);
    CHECK(carpet->slope == doctest::Approx(target).epsilon(0.03));
    CHECK(std::abs(carpet->slope - target) < 0.05);

    // Empty set: undefined dimension.
    CHECK_FALSE(
        box_counting_dimension({}, 64, 64, 1.0 / 64.0, {1, 2, 4, 8}).has_value());
    CHECK_THROWS_AS(box_counting_dimension(segment, 512, 512, 1.0, {1, 2, 4}),
                    std::invalid_argument);
}

TEST_CASE("sweep midpoint interpolation") {
    const auto mid = sweep_midpoint({0.2, 0.4, 0.6, 0.8}, {1.0, 0.8, 0.4, 0.2});
    REQUIRE(mid.has_value());
    CHECK(*mid == doctest::Approx(0.55));
    CHECK_FALSE(sweep_midpoint({0.2, 0.4}, {0.9, 0.8}).has_value());
}

TEST_CASE("percolation sweep: c -> 0 crosses surely, coupling is monotone") {
    SoupConfig base;
    base.domain = Domain::unit_square();
    base.t_min = 0.01;
    base.t_max = 1.0;
    base.seed = 2027;

    const std::vector<double> c_grid = {1e-9, 0.6, 1.2, 2.0, 3.0};
    const auto samples = percolation_sweep_samples(c_grid, base, 16, 30);
    for (std::size_t s = 0; s < samples.crossed.size(); ++s) {
        // Non-increasing in c for every seed (exact coupling property)...
        for (std::size_t k = 1; k < c_grid.size(); ++k) {
            CHECK(samples.crossed[s][k] <= samples.crossed[s][k - 1]);
            CHECK(samples.free_fraction[s][k] <= samples.free_fraction[s][k - 1]);
        }
    }
    // ...and c ~ 0 always crosses.
    const SweepResult sweep = percolation_sweep(c_grid, base, 16, 30);
    CHECK(sweep.crossing_probability.front() == 1.0);
}

TEST_CASE("percolation sweep is independent of the thread count") {
    SoupConfig base;
    base.domain = Domain::unit_square();
    base.t_min = 0.02;
    base.t_max = 0.5;
    base.seed = 11;
    const std::vector<double> c_grid = {0.3, 0.9, 1.5};
    const auto serial = percolation_sweep_samples(c_grid, base, 16, 12, 1);
    const auto parallel = percolation_sweep_samples(c_grid, base, 16, 12, 4);
    CHECK(serial.crossed == parallel.crossed);
    CHECK(serial.free_fraction == parallel.free_fraction);
}
