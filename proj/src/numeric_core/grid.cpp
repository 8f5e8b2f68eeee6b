#include <array>
#include <cmath>
#include <string>

#include "nhspec/error.hpp"
#include "nhspec/numeric_core.hpp"

namespace nhspec {

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  if (n < 2) throw InputError("uniform_grid: need at least 2 points");
  if (!(b > a)) throw InputError("uniform_grid: empty interval");
  std::vector<double> x(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + h * static_cast<double>(i);
  x.back() = b;
  return x;
}

void validate_grid(const GridFunction& f, std::size_t min_points) {
  const std::size_t n = f.positions.size();
  if (n < min_points) {
    throw InputError("grid needs at least " + std::to_string(min_points) +
                     " points, got " + std::to_string(n));
  }
  if (f.values.size() != n) throw InputError("grid positions/values length mismatch");
  const double h = (f.positions.back() - f.positions.front()) / static_cast<double>(n - 1);
  if (!(h > 0.0)) throw InputError("grid is not ascending");
  for (std::size_t i = 1; i < n; ++i) {
    const double d = f.positions[i] - f.positions[i - 1];
    if (std::abs(d - h) > 1e-12 * std::abs(h) * std::max(1.0, std::abs(f.positions[i]) / h)) {
      throw InputError("grid spacing is not uniform");
    }
  }
}

cplx integrate_samples(const GridFunction& f) {
  validate_grid(f, 3);
  const std::size_t n = f.values.size();
  const double h = (f.positions.back() - f.positions.front()) / static_cast<double>(n - 1);
  const auto& y = f.values;

  // Simpson needs an even number of intervals.
  const std::size_t simpson_end = (n % 2 == 1) ? n - 1 : n - 2;
  cplx s = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    s += y[i] + 4.0 * y[i + 1] + y[i + 2];
  }
  s *= h / 3.0;
  if (simpson_end != n - 1) s += 0.5 * h * (y[n - 2] + y[n - 1]);
  return s;
}

GridFunction second_derivative(const GridFunction& f) {
  validate_grid(f, 5);
  const std::size_t n = f.values.size();
  const double h = f.spacing();
  const double h2 = h * h;
  const auto& y = f.values;
  GridFunction d{f.positions, std::vector<cplx>(n)};
  for (std::size_t i = 1; i + 1 < n; ++i) d.values[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / h2;
  d.values[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / h2;
  d.values[n - 1] = (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) / h2;
  return d;
}

GridFunction first_derivative(const GridFunction& f) {
  validate_grid(f, 3);
  const std::size_t n = f.values.size();
  const double h = f.spacing();
  const auto& y = f.values;
  GridFunction d{f.positions, std::vector<cplx>(n)};
  for (std::size_t i = 1; i + 1 < n; ++i) d.values[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
  d.values[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
  d.values[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
  return d;
}

std::vector<cplx> cumulative_integral(const std::function<cplx(double)>& f,
                                      std::span<const double> positions) {
  // Gauss-Legendre nodes/weights on [-1, 1].
  static constexpr std::array<double, 5> nodes = {
      -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
      0.9061798459386640};
  static constexpr std::array<double, 5> weights = {
      0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
      0.2369268850561891};

  std::vector<cplx> out(positions.size(), cplx{});
  for (std::size_t i = 1; i < positions.size(); ++i) {
    const double a = positions[i - 1];
    const double b = positions[i];
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    cplx s = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) s += weights[q] * f(mid + half * nodes[q]);
    out[i] = out[i - 1] + half * s;
  }
  return out;
}

}  // namespace nhspec
