#pragma once

// Edge states of H_g2 = -[d/dx + g2 (x - x0)]^2 on the half line x >= 0 with
// psi(0) = 0 and psi -> 0 at infinity, for base energies inside the PBC
// parabola of H_g2.
//
// An interior E_B lies on the PBC parabola of some H_g1 with 0 < g1 < g2:
// E_B = [k + i g1 (x0 - L/2)]^2. The PBC eigenstate f of H_g1 times the
// Gaussian exp[-(g2 - g1)(x - x0)^2 / 2] is a decaying solution psi1 of
// H_g2 psi = E_B psi. Reduction of order gives the second solution
//   psi2(x) = psi1(x) * int_0^x W(y) / psi1(y)^2 dy,  W(y) = exp[-g2 (y - x0)^2],
// and the boundary condition selects the combination that vanishes at 0.

#include <span>
#include <vector>

#include "nhspec/numeric_core.hpp"
#include "nhspec/wave_field.hpp"

namespace nhspec::edge {

struct EdgeGeometry {
  double length = 100.0;  // L of the reference PBC system
  double x0 = 0.0;
};

struct EdgeDecomposition {
  double k = 0.0;
  double gamma1 = 0.0;
  bool valid = false;  // 0 < gamma1 < gamma2
};

// Square root of E_B split into k + i gamma1 (x0 - L/2). The branch is the one
// giving gamma1 >= 0 (the principal root when Im E_B < 0 and x0 < L/2).
// Throws InputError for gamma2 <= 0, DegenerateError for E_B == 0 or
// x0 == L/2.
EdgeDecomposition decompose_energy(cplx base, double gamma2, const EdgeGeometry& geometry);

// Default half-line truncation 2L.
double default_x_max(const EdgeGeometry& geometry);

// psi1 sampled on the grid (raw amplitudes, psi1(0) = exp[-g1 (L/2)^2 / 2]
// for x0 = 0). Throws InputError if the decomposition is invalid.
WaveField psi1(const EdgeDecomposition& dec, double gamma2, const EdgeGeometry& geometry,
               std::span<const double> grid);

// Second solution by reduction of order; psi2(0) = 0. The grid must start at
// the wall x = 0 and be uniform.
WaveField psi2(const EdgeDecomposition& dec, double gamma2, const EdgeGeometry& geometry,
               std::span<const double> grid);

// exp[-g2 (x - x0)^2], the Wronskian of any solution pair up to a constant.
double wronskian_weight(double gamma2, const EdgeGeometry& geometry, double x);

// a b' - a' b with sixth-order central differences, on grid points 3..n-4.
GridFunction wronskian(const WaveField& a, const WaveField& b);

struct EdgeState {
  WaveField state;  // unit L2
  EdgeDecomposition decomposition;
  double boundary_value = 0.0;  // |psi(0)| / max|psi|
  double decay_position = 0.0;  // first x past the peak with |psi| < 1e-6 max
  double tail_ratio = 0.0;      // |psi(x_max)| / max|psi|
};

// C (psi1 - psi2_tail), where psi2_tail is the second solution scaled to
// equal psi1 at the wall, so the combination vanishes at x = 0.
// Throws InputError for exterior E_B (with the parabola verdict) or if the
// state has not decayed below 1e-6 of its maximum by the end of the grid.
EdgeState edge_state(cplx base, double gamma2, const EdgeGeometry& geometry,
                     std::span<const double> grid);

}  // namespace nhspec::edge
