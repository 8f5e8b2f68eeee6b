#pragma once

// PBC energy curves E(k), their winding numbers around a base energy, and the
// geometric interior tests for the continuum parabola and the lattice ellipse.

#include <cstddef>
#include <functional>
#include <numbers>

#include "nhspec/continuum.hpp"
#include "nhspec/lattice.hpp"
#include "nhspec/numeric_core.hpp"

namespace nhspec::topology {

inline constexpr std::size_t kDefaultSamples = 4096;

struct SpectralCurve {
  std::function<cplx(double)> energy;
  double k_min = -std::numbers::pi;
  double k_max = std::numbers::pi;
  bool closed = false;  // closed curves wrap from k_max back to k_min
};

// E(k) = [k + i gamma (x0 - L/2)]^2 on [-cutoff, cutoff]; open curve.
SpectralCurve continuum_curve(const continuum::ContinuumModel& model,
                              double cutoff = std::numbers::pi);

// E(k) = 2t cos(k + i delta) on [-pi, pi]; closed ellipse.
SpectralCurve lattice_curve(double t, double delta);
SpectralCurve lattice_curve(const lattice::LatticeModel& model);

struct WindingReport {
  cplx base_energy;
  double winding = 0.0;
  std::size_t samples = 0;
  bool interior = false;      // |winding| > 1/2
  double min_distance = 0.0;  // distance from the base to the curve
};

// (1/2pi) * sum of principal-value phase increments of E(k_i) - E_B over a
// uniform k grid. Open curves are integrated over their range only, so the
// result is close to, not exactly, an integer.
// The distance to the curve is refined around the closest sample.
// Throws InputError for samples < 64 and SingularBaseError if E_B is within
// 1e-9 of the curve.
WindingReport winding_number(const SpectralCurve& curve, cplx base,
                             std::size_t samples = kDefaultSamples);

// Strictly inside the PBC parabola a = (b / 2c)^2 - c^2, c = gamma (x0 - L/2).
// Throws DegenerateError when c == 0.
bool interior_parabola(const continuum::ContinuumModel& model, cplx base);

// Strictly inside the ellipse with semi-axes 2t cosh(delta), 2t |sinh(delta)|.
// Throws DegenerateError when delta == 0.
bool interior_ellipse(double t, double delta, cplx base);
bool interior_ellipse(const lattice::LatticeModel& model, cplx base);

}  // namespace nhspec::topology
