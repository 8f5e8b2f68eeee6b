#pragma once

#include <cstddef>
#include <vector>

#include "nhspec/numeric_core.hpp"

namespace nhspec {

enum class NormConvention { raw, unit_l2, unit_max };

// Continuous grids use trapezoid weights for norms and moments; lattice sites
// use plain sums.
enum class Sampling { grid, sites };

// A sampled complex wavefunction.
struct WaveField {
  std::vector<double> positions;
  std::vector<cplx> amplitudes;
  NormConvention norm = NormConvention::raw;
  Sampling sampling = Sampling::grid;

  std::size_t size() const noexcept { return amplitudes.size(); }
};

// sqrt(sum w_i |psi_i|^2) with trapezoid weights (grid) or unit weights (sites).
double l2_norm(const WaveField& wf);

double max_abs(const WaveField& wf);

// Rescale to the requested convention; raw leaves amplitudes untouched.
// Throws InputError for an all-zero field.
WaveField normalized(WaveField wf, NormConvention convention);

GridFunction as_grid_function(const WaveField& wf);

}  // namespace nhspec
