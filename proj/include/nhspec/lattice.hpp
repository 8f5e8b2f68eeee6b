#pragma once

// Tight-binding chain with linearly varying asymmetric hopping:
//   H = sum_j t e^{ g_j} c_j^+ c_{j+1} + t e^{-g_j} c_{j+1}^+ c_j,
//   g_j = gamma (j - j0 + 1/2),  sites j = 1..N.
// Matrix rows/columns are 0-based internally; site j lives at index j-1.

#include <cstddef>
#include <vector>

#include "nhspec/numeric_core.hpp"
#include "nhspec/spectrum.hpp"
#include "nhspec/wave_field.hpp"

namespace nhspec::lattice {

enum class Boundary { open, periodic };

struct LatticeModel {
  double t = 1.0;
  double gamma = 0.0;
  double j0 = 0.0;  // reference site, any real
  std::size_t sites = 2;
  Boundary bc = Boundary::open;

  // Throws InputError unless sites >= 2, t != 0 and all values are finite.
  void validate() const;
};

// Off-diagonal entries (j, j+1) = t e^{g_j}, (j+1, j) = t e^{-g_j}; under PBC
// the bond j = N closes the ring: (N, 1) = t e^{g_N}, (1, N) = t e^{-g_N}.
// Throws ParameterRangeError if any |g_j| > 700.
ComplexMatrix build_hamiltonian(const LatticeModel& model);

// Gaussian centre (N + 2) / 2 of the PBC eigenstates; this is the centre for
// which a Gaussian times a plane wave satisfies the ring's wrap bond exactly.
double pbc_center(const LatticeModel& model);

// Imaginary part delta of the complex momentum k + i delta of the PBC band,
// delta = gamma (j0 - pbc_center).
double pbc_imaginary_shift(const LatticeModel& model);

// OBC: 2t cos(n pi / (N+1)); PBC: 2t cos(2 pi n / N + i delta); n = 1..N.
Spectrum analytic_energies(const LatticeModel& model);

struct AnalyticState {
  WaveField state;
  cplx energy;
};

// OBC: exp[-gamma (j-j0)^2 / 2 + i pi j] sin(n pi j / (N+1)) paired with
// -2t cos(n pi / (N+1)) (the staggering phase flips the band).
// PBC: exp[-gamma (j - c)^2 / 2 + 2 pi i n j / N] with c = pbc_center.
// Amplitudes normalised to unit L2; sites are 1..N.
AnalyticState analytic_state(const LatticeModel& model, int n);

// ||H psi - E psi|| / ||psi||.
double lattice_residual(const LatticeModel& model, const WaveField& wf, cplx energy);

// s(1) = 1 - j0 + 1/2, s(j) = s(j-1) + (j-1) - j0 + 1/2.
std::vector<double> similarity_scale(const LatticeModel& model);

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;
};

// S H S^-1 with S = diag(e^{gamma s(j)}), checked to be the uniform chain.
// OBC only. Throws ParameterRangeError if |gamma s(j)| > 700 and
// ConsistencyError if the transformed matrix is not uniform.
Tridiagonal hermitize(const LatticeModel& model);

// Eigenvalues of the hermitized chain (exactly real), numeric provenance.
Spectrum hermitized_spectrum(const LatticeModel& model);

// Direct dense QR eigenvalues of build_hamiltonian, numeric provenance.
Spectrum numeric_spectrum(const LatticeModel& model, const EigOptions& opts = {});

// Eigenvalues and unit eigenvectors of build_hamiltonian.
EigenDecomposition numeric_eigenpairs(const LatticeModel& model, std::size_t max_dimension = 2048);

// Greedy nearest-neighbour matching of a against b; max matched distance.
double compare_spectra(const Spectrum& a, const Spectrum& b);

// Largest |Im E| in a spectrum.
double max_abs_imag(const Spectrum& s);

}  // namespace nhspec::lattice
