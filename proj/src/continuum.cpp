#include "nhspec/continuum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nhspec/error.hpp"

namespace nhspec::continuum {
namespace {

using std::numbers::pi;

void require_linear(const ContinuumModel& model) {
  if (model.order != 1) {
    throw UnsupportedOrderError("closed form only for potential order 1, got " +
                                std::to_string(model.order));
  }
}

void require_points(std::size_t points) {
  if (points < 5) throw InputError("need at least 5 grid points");
}

// (x - x0)^m with 0^0 = 1.
double shifted_power(double x, double x0, unsigned m) {
  return m == 0 ? 1.0 : std::pow(x - x0, static_cast<double>(m));
}

}  // namespace

void ContinuumModel::validate() const {
  if (!std::isfinite(gamma) || !std::isfinite(x0) || !std::isfinite(length)) {
    throw InputError("continuum model parameters must be finite");
  }
  if (!(length > 0.0)) throw InputError("continuum model length must be positive");
}

double obc_energy(const ContinuumModel& model, int n) {
  model.validate();
  require_linear(model);
  if (n < 1) throw InputError("OBC index must be >= 1");
  const double k = n * pi / model.length;
  return k * k;
}

WaveField obc_state(const ContinuumModel& model, int n, std::size_t points,
                    NormConvention norm) {
  obc_energy(model, n);
  require_points(points);
  WaveField wf;
  wf.positions = uniform_grid(0.0, model.length, points);
  wf.amplitudes.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = wf.positions[i];
    const double d = x - model.x0;
    // Phase from the integer grid index keeps sin exact at both walls.
    const double arg = pi * static_cast<double>(n) * static_cast<double>(i) /
                       static_cast<double>(points - 1);
    wf.amplitudes[i] = std::exp(-0.5 * model.gamma * d * d) * std::sin(arg);
  }
  wf.amplitudes.front() = 0.0;
  wf.amplitudes.back() = 0.0;
  return normalized(std::move(wf), norm);
}

cplx pbc_energy(const ContinuumModel& model, int n) {
  model.validate();
  require_linear(model);
  const cplx kappa(2.0 * n * pi / model.length, model.gamma * (model.x0 - 0.5 * model.length));
  return kappa * kappa;
}

WaveField pbc_state(const ContinuumModel& model, int n, std::size_t points,
                    NormConvention norm) {
  pbc_energy(model, n);
  require_points(points);
  WaveField wf;
  wf.positions = uniform_grid(0.0, model.length, points);
  wf.amplitudes.resize(points);
  const auto cells = static_cast<long long>(points - 1);
  const double mid = 0.5 * model.length;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = wf.positions[i];
    // n*x/L reduced modulo 1 on the integer lattice, so psi(0) == psi(L).
    long long turns = (static_cast<long long>(n) * static_cast<long long>(i)) % cells;
    if (turns < 0) turns += cells;
    const double phase = 2.0 * pi * static_cast<double>(turns) / static_cast<double>(cells);
    const double envelope = std::exp(-0.5 * model.gamma * (x - mid) * (x - mid));
    wf.amplitudes[i] = std::polar(envelope, phase);
  }
  return normalized(std::move(wf), norm);
}

Spectrum obc_spectrum(const ContinuumModel& model, int count) {
  Spectrum s;
  for (int n = 1; n <= count; ++n) s.entries.push_back({n, obc_energy(model, n), Provenance::analytic});
  s.sort();
  return s;
}

Spectrum pbc_spectrum(const ContinuumModel& model, int n_max) {
  Spectrum s;
  for (int n = -n_max; n <= n_max; ++n) {
    s.entries.push_back({n, pbc_energy(model, n), Provenance::analytic});
  }
  s.sort();
  return s;
}

double gauge_factor(const ContinuumModel& model, double x) {
  const double m1 = static_cast<double>(model.order + 1);
  return std::exp(-model.gamma * std::pow(x - model.x0, m1) / m1);
}

double residual_norm(const ContinuumModel& model, const WaveField& wf, cplx energy) {
  const GridFunction psi = as_grid_function(wf);
  validate_grid(psi, 5);
  const GridFunction d2 = second_derivative(psi);
  const GridFunction d1 = first_derivative(psi);
  const double h = psi.spacing();
  const unsigned m = model.order;

  double r2 = 0.0;
  for (std::size_t i = 1; i + 1 < psi.values.size(); ++i) {
    const double x = psi.positions[i];
    const double a = model.gamma * shifted_power(x, model.x0, m);
    const double da = m == 0 ? 0.0 : model.gamma * m * shifted_power(x, model.x0, m - 1);
    // [d/dx + A]^2 psi = psi'' + 2 A psi' + (A' + A^2) psi
    const cplx op = d2.values[i] + 2.0 * a * d1.values[i] + (da + a * a) * psi.values[i];
    r2 += std::norm(-op - energy * psi.values[i]);
  }
  WaveField as_grid = wf;
  as_grid.sampling = Sampling::grid;
  const double norm = l2_norm(as_grid);
  if (!(norm > 0.0)) throw InputError("residual_norm: zero wavefunction");
  return std::sqrt(h * r2) / norm;
}

}  // namespace nhspec::continuum
