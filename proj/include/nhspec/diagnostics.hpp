#pragma once

// Localisation measures for sampled eigenstates.

#include <cstddef>
#include <vector>

#include "nhspec/wave_field.hpp"

namespace nhspec::diagnostics {

struct EnvelopeFit {
  double center = 0.0;        // NaN when the envelope has no curvature
  double rate = 0.0;          // Gaussian rate; log envelope ~ -rate (x - center)^2 / 2
  double rms_residual = 0.0;  // in log-amplitude units
  std::size_t samples_used = 0;
  double sample_spacing = 0.0;  // mean distance between the fitted samples
  bool from_maxima = true;      // false: fitted |psi| directly (zero-free modulus)
  bool anti_gaussian = false;   // curvature >= 0
};

// Indices of strict local maxima of |psi| with non-zero amplitude; a maximum
// must exceed both neighbours by a relative margin of 1e-12.
std::vector<std::size_t> local_maxima(const WaveField& wf);

// Least-squares fit log|psi| = a + b x + w x^2 through the local maxima of
// |psi| (standing waves) or, when |psi| never vanishes and has fewer than
// three maxima, through every sample (travelling waves).
// Throws InsufficientStructureError otherwise.
EnvelopeFit envelope_fit(const WaveField& wf);

// Position of the first global maximum of |psi|.
double pinning_position(const WaveField& wf);

// sum x |psi|^2 / sum |psi|^2, trapezoid-weighted on grids.
double center_of_mass(const WaveField& wf);

// sum |psi|^4 / (sum |psi|^2)^2. Throws InputError for a zero vector.
double ipr(const WaveField& wf);

}  // namespace nhspec::diagnostics
