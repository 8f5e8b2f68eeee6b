#include "nhspec/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nhspec/error.hpp"

namespace nhspec::topology {

using std::numbers::pi;

SpectralCurve continuum_curve(const continuum::ContinuumModel& model, double cutoff) {
  model.validate();
  if (model.order != 1) throw UnsupportedOrderError("continuum curve needs potential order 1");
  if (!(cutoff > 0.0)) throw InputError("curve cutoff must be positive");
  const double c = model.gamma * (model.x0 - 0.5 * model.length);
  SpectralCurve curve;
  curve.energy = [c](double k) {
    const cplx kappa(k, c);
    return kappa * kappa;
  };
  curve.k_min = -cutoff;
  curve.k_max = cutoff;
  curve.closed = false;
  return curve;
}

SpectralCurve lattice_curve(double t, double delta) {
  SpectralCurve curve;
  curve.energy = [t, delta](double k) { return 2.0 * t * std::cos(cplx(k, delta)); };
  curve.k_min = -pi;
  curve.k_max = pi;
  curve.closed = true;
  return curve;
}

SpectralCurve lattice_curve(const lattice::LatticeModel& model) {
  model.validate();
  if (model.bc != lattice::Boundary::periodic) {
    throw InputError("lattice curve is defined for periodic boundaries");
  }
  return lattice_curve(model.t, lattice::pbc_imaginary_shift(model));
}

namespace {

// Golden-section minimum of |E(k) - base| within one step of k.
double refine_distance(const SpectralCurve& curve, cplx base, double k, double step) {
  double a = std::max(curve.k_min, k - step);
  double b = std::min(curve.k_max, k + step);
  auto dist = [&](double q) { return std::abs(curve.energy(q) - base); };
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = dist(c);
  double fd = dist(d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = dist(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = dist(d);
    }
  }
  return std::min(fc, fd);
}

}  // namespace

WindingReport winding_number(const SpectralCurve& curve, cplx base, std::size_t samples) {
  if (samples < 64) throw InputError("winding_number needs at least 64 samples");
  const double span = curve.k_max - curve.k_min;
  // Closed: k_i = k_min + i*span/samples, i < samples, plus the wrap step.
  // Open: samples points including both ends.
  const double step = span / static_cast<double>(curve.closed ? samples : samples - 1);

  double total = 0.0;
  const cplx first = curve.energy(curve.k_min) - base;
  cplx prev = first;
  double min_dist = std::abs(first);
  std::size_t closest = 0;
  for (std::size_t i = 1; i < samples; ++i) {
    const cplx cur = curve.energy(curve.k_min + step * static_cast<double>(i)) - base;
    if (std::abs(cur) < min_dist) {
      min_dist = std::abs(cur);
      closest = i;
    }
    total += std::arg(cur / prev);
    prev = cur;
  }
  if (curve.closed) total += std::arg(first / prev);
  min_dist = std::min(min_dist, refine_distance(curve, base, curve.k_min + step * static_cast<double>(closest), step));

  if (min_dist <= 1e-9) {
    throw SingularBaseError("base energy lies on the spectral curve");
  }
  WindingReport report;
  report.base_energy = base;
  report.winding = total / (2.0 * pi);
  report.samples = samples;
  report.interior = std::abs(report.winding) > 0.5;
  report.min_distance = min_dist;
  return report;
}

bool interior_parabola(const continuum::ContinuumModel& model, cplx base) {
  model.validate();
  if (model.order != 1) throw UnsupportedOrderError("parabola test needs potential order 1");
  const double c = model.gamma * (model.x0 - 0.5 * model.length);
  if (c == 0.0) throw DegenerateError("PBC parabola collapses to a half-line (gamma (x0 - L/2) = 0)");
  const double q = base.imag() / (2.0 * c);
  return base.real() > q * q - c * c;
}

bool interior_ellipse(double t, double delta, cplx base) {
  if (delta == 0.0) throw DegenerateError("PBC ellipse collapses to a segment (delta = 0)");
  const double ax = 2.0 * t * std::cosh(delta);
  const double ay = 2.0 * t * std::sinh(delta);
  const double u = base.real() / ax;
  const double v = base.imag() / ay;
  return u * u + v * v < 1.0;
}

bool interior_ellipse(const lattice::LatticeModel& model, cplx base) {
  model.validate();
  return interior_ellipse(model.t, lattice::pbc_imaginary_shift(model), base);
}

}  // namespace nhspec::topology
