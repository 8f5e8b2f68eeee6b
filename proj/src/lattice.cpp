#include "nhspec/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nhspec/error.hpp"

namespace nhspec::lattice {
namespace {

using std::numbers::pi;

constexpr double kMaxExponent = 700.0;

double bond_exponent(const LatticeModel& m, std::size_t j) {
  return m.gamma * (static_cast<double>(j) - m.j0 + 0.5);
}

void check_exponent(double e) {
  if (std::abs(e) > kMaxExponent) {
    throw ParameterRangeError("hopping exponent " + std::to_string(e) +
                              " outside [-700, 700]");
  }
}

WaveField site_field(std::size_t n) {
  WaveField wf;
  wf.sampling = Sampling::sites;
  wf.positions.resize(n);
  wf.amplitudes.resize(n);
  for (std::size_t j = 0; j < n; ++j) wf.positions[j] = static_cast<double>(j + 1);
  return wf;
}

Spectrum from_values(const std::vector<cplx>& values) {
  Spectrum s;
  s.entries.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.entries.push_back({static_cast<long>(i + 1), values[i], Provenance::numeric});
  }
  s.sort();
  return s;
}

}  // namespace

void LatticeModel::validate() const {
  if (sites < 2) throw InputError("lattice needs at least 2 sites");
  if (!std::isfinite(t) || !std::isfinite(gamma) || !std::isfinite(j0)) {
    throw InputError("lattice parameters must be finite");
  }
  if (t == 0.0) throw InputError("hopping t must be non-zero");
}

ComplexMatrix build_hamiltonian(const LatticeModel& model) {
  model.validate();
  const std::size_t n = model.sites;
  const std::size_t last_bond = model.bc == Boundary::periodic ? n : n - 1;
  for (std::size_t j = 1; j <= last_bond; ++j) check_exponent(bond_exponent(model, j));

  ComplexMatrix h(n);
  for (std::size_t j = 1; j < n; ++j) {
    const double g = bond_exponent(model, j);
    h(j - 1, j) += model.t * std::exp(g);
    h(j, j - 1) += model.t * std::exp(-g);
  }
  if (model.bc == Boundary::periodic) {
    const double g = bond_exponent(model, n);
    h(n - 1, 0) += model.t * std::exp(g);
    h(0, n - 1) += model.t * std::exp(-g);
  }
  return h;
}

double pbc_center(const LatticeModel& model) {
  return 0.5 * (static_cast<double>(model.sites) + 2.0);
}

double pbc_imaginary_shift(const LatticeModel& model) {
  return model.gamma * (model.j0 - pbc_center(model));
}

Spectrum analytic_energies(const LatticeModel& model) {
  model.validate();
  const auto n_sites = static_cast<double>(model.sites);
  Spectrum s;
  s.entries.reserve(model.sites);
  const double delta = pbc_imaginary_shift(model);
  for (std::size_t n = 1; n <= model.sites; ++n) {
    cplx e;
    if (model.bc == Boundary::open) {
      e = 2.0 * model.t * std::cos(static_cast<double>(n) * pi / (n_sites + 1.0));
    } else {
      e = 2.0 * model.t * std::cos(cplx(2.0 * pi * static_cast<double>(n) / n_sites, delta));
    }
    s.entries.push_back({static_cast<long>(n), e, Provenance::analytic});
  }
  s.sort();
  return s;
}

AnalyticState analytic_state(const LatticeModel& model, int n) {
  model.validate();
  if (n < 1 || static_cast<std::size_t>(n) > model.sites) {
    throw InputError("state index " + std::to_string(n) + " outside 1.." +
                     std::to_string(model.sites));
  }
  const std::size_t size = model.sites;
  const auto n_sites = static_cast<double>(size);
  WaveField wf = site_field(size);
  cplx energy;
  if (model.bc == Boundary::open) {
    const double theta = static_cast<double>(n) * pi / (n_sites + 1.0);
    for (std::size_t j = 1; j <= size; ++j) {
      const double d = static_cast<double>(j) - model.j0;
      const double stagger = (j % 2 == 0) ? 1.0 : -1.0;  // e^{i pi j}
      wf.amplitudes[j - 1] =
          stagger * std::exp(-0.5 * model.gamma * d * d) * std::sin(theta * static_cast<double>(j));
    }
    energy = -2.0 * model.t * std::cos(theta);
  } else {
    const double c = pbc_center(model);
    for (std::size_t j = 1; j <= size; ++j) {
      const double d = static_cast<double>(j) - c;
      const auto turns = static_cast<double>((static_cast<std::size_t>(n) * j) % size);
      wf.amplitudes[j - 1] = std::polar(std::exp(-0.5 * model.gamma * d * d),
                                        2.0 * pi * turns / n_sites);
    }
    energy = 2.0 * model.t *
             std::cos(cplx(2.0 * pi * static_cast<double>(n) / n_sites, pbc_imaginary_shift(model)));
  }
  return {normalized(std::move(wf), NormConvention::unit_l2), energy};
}

double lattice_residual(const LatticeModel& model, const WaveField& wf, cplx energy) {
  if (wf.size() != model.sites) {
    throw InputError("wavefunction has " + std::to_string(wf.size()) + " amplitudes, lattice has " +
                     std::to_string(model.sites) + " sites");
  }
  const ComplexMatrix h = build_hamiltonian(model);
  auto r = h.apply(wf.amplitudes);
  double rn = 0.0;
  double pn = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    rn += std::norm(r[i] - energy * wf.amplitudes[i]);
    pn += std::norm(wf.amplitudes[i]);
  }
  if (!(pn > 0.0)) throw InputError("lattice_residual: zero wavefunction");
  return std::sqrt(rn / pn);
}

std::vector<double> similarity_scale(const LatticeModel& model) {
  std::vector<double> s(model.sites);
  if (s.empty()) return s;
  s[0] = 1.0 - model.j0 + 0.5;
  for (std::size_t j = 2; j <= model.sites; ++j) {
    s[j - 1] = s[j - 2] + static_cast<double>(j - 1) - model.j0 + 0.5;
  }
  return s;
}

Tridiagonal hermitize(const LatticeModel& model) {
  model.validate();
  if (model.bc != Boundary::open) throw InputError("hermitize requires open boundaries");
  const ComplexMatrix h = build_hamiltonian(model);
  const auto s = similarity_scale(model);
  const std::size_t n = model.sites;

  std::vector<double> scale(n);
  for (std::size_t j = 0; j < n; ++j) {
    check_exponent(model.gamma * s[j]);
    scale[j] = std::exp(model.gamma * s[j]);
  }

  // Entries of S H S^-1 accumulate a few roundings of exp(gamma s);
  // their relative error is bounded by ~eps * |gamma s|.
  double max_gs = 0.0;
  for (double v : s) max_gs = std::max(max_gs, std::abs(model.gamma * v));
  const double tol = 1e-10 * std::abs(model.t) +
                     64.0 * std::numeric_limits<double>::epsilon() * (1.0 + max_gs) * std::abs(model.t);

  Tridiagonal out;
  out.diag.assign(n, 0.0);
  out.offdiag.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx v = scale[i] * h(i, j) / scale[j];
      const bool neighbour = (i + 1 == j) || (j + 1 == i);
      const double target = neighbour ? model.t : 0.0;
      if (std::abs(v - target) > tol) {
        throw ConsistencyError("similarity transform is not uniform at (" + std::to_string(i + 1) +
                               ", " + std::to_string(j + 1) + ")");
      }
      if (i + 1 == j) out.offdiag[i] += 0.5 * v.real();
      if (j + 1 == i) out.offdiag[j] += 0.5 * v.real();
    }
  }
  return out;
}

Spectrum hermitized_spectrum(const LatticeModel& model) {
  const Tridiagonal tri = hermitize(model);
  const auto values = eig_sym_tridiag(tri.diag, tri.offdiag);
  std::vector<cplx> as_complex(values.begin(), values.end());
  return from_values(as_complex);
}

Spectrum numeric_spectrum(const LatticeModel& model, const EigOptions& opts) {
  EigOptions o = opts;
  o.want_vectors = false;
  return from_values(eig_complex_dense(build_hamiltonian(model), o).eigenvalues);
}

EigenDecomposition numeric_eigenpairs(const LatticeModel& model, std::size_t max_dimension) {
  return eig_complex_dense(build_hamiltonian(model), EigOptions{true, max_dimension});
}

double compare_spectra(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size()) {
    throw InputError("compare_spectra: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + " entries");
  }
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& ea : a.entries) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(ea.energy - b.entries[j].energy);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    if (!b.entries.empty()) used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

double max_abs_imag(const Spectrum& s) {
  double m = 0.0;
  for (const auto& e : s.entries) m = std::max(m, std::abs(e.energy.imag()));
  return m;
}

}  // namespace nhspec::lattice
