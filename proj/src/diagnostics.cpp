#include "nhspec/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nhspec/error.hpp"

namespace nhspec::diagnostics {
namespace {

struct Quadratic {
  double a, b, w;  // in the scaled variable t = (x - shift) / scale
  double shift, scale;
  double rms;
};

// Least squares y ~ a + b t + w t^2 via 3x3 normal equations.
Quadratic fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v - mean));
  if (scale == 0.0) scale = 1.0;

  std::array<double, 5> p{};  // sums of t^0..t^4
  std::array<double, 3> r{};  // sums of y t^0..t^2
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (x[i] - mean) / scale;
    double tp = 1.0;
    for (std::size_t k = 0; k < 5; ++k) {
      p[k] += tp;
      if (k < 3) r[k] += y[i] * tp;
      tp *= t;
    }
  }
  // Solve [[p0 p1 p2] [p1 p2 p3] [p2 p3 p4]] c = r by Cramer's rule.
  auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23,
                 double a31, double a32, double a33) {
    return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
           a13 * (a21 * a32 - a22 * a31);
  };
  const double d = det3(p[0], p[1], p[2], p[1], p[2], p[3], p[2], p[3], p[4]);
  if (d == 0.0) throw InsufficientStructureError("envelope fit is singular");
  Quadratic q{};
  q.a = det3(r[0], p[1], p[2], r[1], p[2], p[3], r[2], p[3], p[4]) / d;
  q.b = det3(p[0], r[0], p[2], p[1], r[1], p[3], p[2], r[2], p[4]) / d;
  q.w = det3(p[0], p[1], r[0], p[1], p[2], r[1], p[2], p[3], r[2]) / d;
  q.shift = mean;
  q.scale = scale;

  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (x[i] - mean) / scale;
    const double e = y[i] - (q.a + q.b * t + q.w * t * t);
    ss += e * e;
  }
  q.rms = std::sqrt(ss / static_cast<double>(n));
  return q;
}

}  // namespace

std::vector<std::size_t> local_maxima(const WaveField& wf) {
  std::vector<std::size_t> out;
  const auto& a = wf.amplitudes;
  // Differences at rounding level do not make a maximum.
  constexpr double rel = 1.0 + 1e-12;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    const double v = std::abs(a[i]);
    if (v > 0.0 && v > rel * std::abs(a[i - 1]) && v > rel * std::abs(a[i + 1])) out.push_back(i);
  }
  return out;
}

EnvelopeFit envelope_fit(const WaveField& wf) {
  if (wf.positions.size() != wf.size()) throw InputError("envelope_fit: length mismatch");
  EnvelopeFit fit;
  std::vector<double> xs;
  std::vector<double> ys;

  const auto peaks = local_maxima(wf);
  if (peaks.size() >= 3) {
    for (std::size_t i : peaks) {
      xs.push_back(wf.positions[i]);
      ys.push_back(std::log(std::abs(wf.amplitudes[i])));
    }
    fit.from_maxima = true;
  } else {
    const bool zero_free = wf.size() >= 3 &&
                           std::all_of(wf.amplitudes.begin(), wf.amplitudes.end(),
                                       [](cplx v) { return std::abs(v) > 0.0; });
    if (!zero_free) {
      throw InsufficientStructureError("envelope fit needs at least 3 local maxima, found " +
                                       std::to_string(peaks.size()));
    }
    for (std::size_t i = 0; i < wf.size(); ++i) {
      xs.push_back(wf.positions[i]);
      ys.push_back(std::log(std::abs(wf.amplitudes[i])));
    }
    fit.from_maxima = false;
  }

  const Quadratic q = fit_quadratic(xs, ys);
  const double curvature = q.w / (q.scale * q.scale);  // omega in log|psi| = ... + omega x^2
  fit.rate = -2.0 * curvature;
  fit.rms_residual = q.rms;
  fit.samples_used = xs.size();
  fit.sample_spacing = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  fit.anti_gaussian = curvature >= 0.0;
  // Curvature below rounding level over the fitted span: no centre.
  if (std::abs(q.w) <= 1e-10 * (1.0 + std::abs(q.a) + std::abs(q.b))) {
    fit.center = std::numeric_limits<double>::quiet_NaN();
  } else {
    fit.center = q.shift - q.b * q.scale / (2.0 * q.w);
  }
  return fit;
}

double pinning_position(const WaveField& wf) {
  if (wf.size() == 0) throw InputError("pinning_position: empty wavefunction");
  std::size_t best = 0;
  for (std::size_t i = 1; i < wf.size(); ++i) {
    if (std::abs(wf.amplitudes[i]) > std::abs(wf.amplitudes[best])) best = i;
  }
  return wf.positions[best];
}

double center_of_mass(const WaveField& wf) {
  const std::size_t n = wf.size();
  if (n == 0) throw InputError("center_of_mass: empty wavefunction");
  double num = 0.0;
  double den = 0.0;
  if (wf.sampling == Sampling::sites || n < 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::norm(wf.amplitudes[i]);
      num += wf.positions[i] * p;
      den += p;
    }
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = 0.5 * (wf.positions[i + 1] - wf.positions[i]);
      const double p0 = std::norm(wf.amplitudes[i]);
      const double p1 = std::norm(wf.amplitudes[i + 1]);
      num += h * (wf.positions[i] * p0 + wf.positions[i + 1] * p1);
      den += h * (p0 + p1);
    }
  }
  if (!(den > 0.0)) throw InputError("center_of_mass: zero wavefunction");
  return num / den;
}

double ipr(const WaveField& wf) {
  double s2 = 0.0;
  double s4 = 0.0;
  for (const auto& a : wf.amplitudes) {
    const double p = std::norm(a);
    s2 += p;
    s4 += p * p;
  }
  if (!(s2 > 0.0)) throw InputError("ipr: zero wavefunction");
  return s4 / (s2 * s2);
}

}  // namespace nhspec::diagnostics
