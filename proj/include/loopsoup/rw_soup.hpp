// Random-walk loop soup on the square lattice: the discrete cross-check for
// the continuum sampler.
//
// Loops are closed nearest-neighbor walks of even length L >= 4 (length-2
// edge retraces are excluded as degenerate).  Each rooted walk carries the
// standard measure (1/4)^L / L, i.e. rooted counts thinned by 1/length, so
// an unrooted loop class receives c * (#rooted representatives) * (1/4)^L / L
// in total.  A length-L walk at mesh eps maps to duration L * eps^2 / 2
// (per-coordinate variance of the simple walk), which reproduces the
// continuum count density 2c / (pi L^2) per site for large L.

#pragma once

#include <cstdint>
#include <vector>

#include "loopsoup/soup.hpp"

namespace loopsoup {

struct LatticeShape {
    std::vector<std::pair<std::int8_t, std::int8_t>> points;  // closed, points.front()==back()==0
    std::int8_t min_x = 0, max_x = 0, min_y = 0, max_y = 0;
};

// All closed walks of the given even length from the origin (C(L, L/2)^2 of
// them); enumerated once per length and cached.
const std::vector<LatticeShape>& enumerate_closed_walks(int length);

struct RwSoupResult {
    LoopSoup soup;
    bool no_loops_warning = false;  // length window admitted no loop class
    int l_min = 0;
    int l_max = 0;
};

// Samples the lattice soup at mesh lattice_step inside config.domain.  The
// duration cutoffs of config map to the even-length window
// [max(4, 2 t_min / eps^2), min(max_length, 2 t_max / eps^2)].
RwSoupResult sample_rw_loop_soup(double lattice_step, const SoupConfig& config,
                                 int max_length = 12);

// Continuum cutoffs matched to an even-length window: the half-integer
// offsets [(l_min - 1/2) eps^2 / 2, (l_max + 3/2) eps^2 / 2] align the
// discrete per-length masses with the 1/(2 pi t^2) density to a few percent.
std::pair<double, double> rw_matched_continuum_cutoffs(double lattice_step, int l_min, int l_max);

}  // namespace loopsoup
