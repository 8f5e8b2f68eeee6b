#pragma once

// Closed-form solutions of -[d/dx + gamma (x - x0)^m]^2 psi = E psi on [0, L].
// The imaginary gauge factor exp[-gamma (x - x0)^(m+1) / (m+1)] maps the
// problem onto a free particle, so for m = 1:
//   OBC: E_n = (n pi / L)^2,               psi_n ~ exp[-gamma (x-x0)^2 / 2] sin(n pi x / L)
//   PBC: E_n = [2 n pi / L + i gamma (x0 - L/2)]^2,
//        psi_n ~ exp[-gamma (x - L/2)^2 / 2 + 2 pi i n x / L]

#include <cstddef>

#include "nhspec/numeric_core.hpp"
#include "nhspec/spectrum.hpp"
#include "nhspec/wave_field.hpp"

namespace nhspec::continuum {

inline constexpr std::size_t kDefaultPoints = 2001;

struct ContinuumModel {
  double gamma = 0.0;   // rate of the imaginary vector potential
  double x0 = 0.0;      // zero of the potential
  double length = 1.0;  // domain is [0, length]
  unsigned order = 1;   // potential ~ (x - x0)^order

  // Throws InputError on non-finite values or length <= 0.
  void validate() const;
};

double obc_energy(const ContinuumModel& model, int n);

WaveField obc_state(const ContinuumModel& model, int n,
                    std::size_t points = kDefaultPoints,
                    NormConvention norm = NormConvention::unit_l2);

cplx pbc_energy(const ContinuumModel& model, int n);

WaveField pbc_state(const ContinuumModel& model, int n,
                    std::size_t points = kDefaultPoints,
                    NormConvention norm = NormConvention::unit_l2);

// n = 1..count, analytic provenance, sorted.
Spectrum obc_spectrum(const ContinuumModel& model, int count);

// n = -n_max..n_max, analytic provenance, sorted.
Spectrum pbc_spectrum(const ContinuumModel& model, int n_max);

// exp[-gamma (x - x0)^(m+1) / (m+1)]; its log-derivative is -gamma (x-x0)^m.
double gauge_factor(const ContinuumModel& model, double x);

// Discrete L2 norm of -[d/dx + A]^2 psi - E psi over interior grid points,
// divided by ||psi||, with A = gamma (x - x0)^m and second-order central
// differences for psi'' and psi'.
double residual_norm(const ContinuumModel& model, const WaveField& wf, cplx energy);

}  // namespace nhspec::continuum
