#include "nhspec/edge_modes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nhspec/continuum.hpp"
#include "nhspec/error.hpp"
#include "nhspec/topology.hpp"

namespace nhspec::edge {
namespace {

cplx log_psi1(const EdgeDecomposition& dec, double gamma2, const EdgeGeometry& g, double x) {
  const double dm = x - 0.5 * g.length;
  const double d0 = x - g.x0;
  return cplx(-0.5 * dec.gamma1 * dm * dm - 0.5 * (gamma2 - dec.gamma1) * d0 * d0, dec.k * x);
}

void require_valid(const EdgeDecomposition& dec) {
  if (!dec.valid) throw InputError("edge construction needs 0 < gamma1 < gamma2");
}

void require_half_line_grid(std::span<const double> grid) {
  GridFunction probe{std::vector<double>(grid.begin(), grid.end()),
                     std::vector<cplx>(grid.size())};
  validate_grid(probe, 5);
  if (grid.front() != 0.0) throw InputError("half-line grid must start at the wall x = 0");
}

WaveField field_on(std::span<const double> grid) {
  WaveField wf;
  wf.positions.assign(grid.begin(), grid.end());
  wf.amplitudes.resize(grid.size());
  wf.sampling = Sampling::grid;
  wf.norm = NormConvention::raw;
  return wf;
}

// Running integral of W / psi1^2 from the wall.
std::vector<cplx> reduction_integral(const EdgeDecomposition& dec, double gamma2,
                                     const EdgeGeometry& g, std::span<const double> grid) {
  auto integrand = [&](double x) {
    const double d0 = x - g.x0;
    return std::exp(cplx(-gamma2 * d0 * d0, 0.0) - 2.0 * log_psi1(dec, gamma2, g, x));
  };
  auto out = cumulative_integral(integrand, grid);
  for (const auto& v : out) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InputError("reduction-of-order quadrature produced a non-finite value");
    }
  }
  return out;
}

}  // namespace

EdgeDecomposition decompose_energy(cplx base, double gamma2, const EdgeGeometry& geometry) {
  if (!(gamma2 > 0.0)) throw InputError("edge construction needs gamma2 > 0");
  if (base == cplx{}) throw DegenerateError("E_B = 0 gives gamma1 = 0");
  const double lever = geometry.x0 - 0.5 * geometry.length;
  if (lever == 0.0) throw DegenerateError("x0 = L/2 leaves gamma1 undetermined");

  cplx root = std::sqrt(base);
  if (root.imag() * lever < 0.0) root = -root;

  EdgeDecomposition dec;
  dec.k = root.real();
  dec.gamma1 = root.imag() / lever;
  dec.valid = dec.gamma1 > 0.0 && dec.gamma1 < gamma2;
  return dec;
}

double default_x_max(const EdgeGeometry& geometry) { return 2.0 * geometry.length; }

WaveField psi1(const EdgeDecomposition& dec, double gamma2, const EdgeGeometry& geometry,
               std::span<const double> grid) {
  require_valid(dec);
  WaveField wf = field_on(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    wf.amplitudes[i] = std::exp(log_psi1(dec, gamma2, geometry, grid[i]));
  }
  return wf;
}

WaveField psi2(const EdgeDecomposition& dec, double gamma2, const EdgeGeometry& geometry,
               std::span<const double> grid) {
  require_valid(dec);
  require_half_line_grid(grid);
  const WaveField first = psi1(dec, gamma2, geometry, grid);
  const auto integral = reduction_integral(dec, gamma2, geometry, grid);

  WaveField wf = field_on(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) wf.amplitudes[i] = first.amplitudes[i] * integral[i];

  const GridFunction w = wronskian(first, wf);
  const bool independent = std::any_of(w.values.begin(), w.values.end(),
                                       [](cplx v) { return std::abs(v) > 0.0; });
  if (!independent) throw ConsistencyError("psi1 and psi2 are linearly dependent on this grid");
  return wf;
}

double wronskian_weight(double gamma2, const EdgeGeometry& geometry, double x) {
  const double d0 = x - geometry.x0;
  return std::exp(-gamma2 * d0 * d0);
}

GridFunction wronskian(const WaveField& a, const WaveField& b) {
  const GridFunction fa = as_grid_function(a);
  const GridFunction fb = as_grid_function(b);
  validate_grid(fa, 7);
  validate_grid(fb, 7);
  if (fa.positions != fb.positions) throw InputError("wronskian: grids differ");

  const double h = fa.spacing();
  const std::size_t n = fa.values.size();
  auto d1 = [h](const std::vector<cplx>& f, std::size_t i) {
    return (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] - 9.0 * f[i + 2] +
            f[i + 3]) /
           (60.0 * h);
  };
  GridFunction w;
  for (std::size_t i = 3; i + 3 < n; ++i) {
    w.positions.push_back(fa.positions[i]);
    w.values.push_back(fa.values[i] * d1(fb.values, i) - d1(fa.values, i) * fb.values[i]);
  }
  return w;
}

EdgeState edge_state(cplx base, double gamma2, const EdgeGeometry& geometry,
                     std::span<const double> grid) {
  const EdgeDecomposition dec = decompose_energy(base, gamma2, geometry);
  if (!dec.valid) {
    const continuum::ContinuumModel model{gamma2, geometry.x0, geometry.length, 1};
    const bool inside = topology::interior_parabola(model, base);
    std::ostringstream msg;
    msg << "base energy (" << base.real() << ", " << base.imag() << ") is "
        << (inside ? "on the gamma1 -> 0 boundary of" : "outside") << " the PBC parabola of gamma2 = "
        << gamma2 << " (interior test: " << (inside ? "true" : "false") << ", gamma1 = " << dec.gamma1
        << ")";
    throw InputError(msg.str());
  }
  require_half_line_grid(grid);

  const WaveField first = psi1(dec, gamma2, geometry, grid);
  const auto integral = reduction_integral(dec, gamma2, geometry, grid);
  const cplx total = integral.back();

  EdgeState out;
  out.decomposition = dec;
  out.state = field_on(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx tail = first.amplitudes[i] * (1.0 - integral[i] / total);
    out.state.amplitudes[i] = first.amplitudes[i] - tail;
  }
  out.state = normalized(std::move(out.state), NormConvention::unit_l2);

  const auto& amp = out.state.amplitudes;
  std::size_t peak = 0;
  for (std::size_t i = 1; i < amp.size(); ++i) {
    if (std::abs(amp[i]) > std::abs(amp[peak])) peak = i;
  }
  const double top = std::abs(amp[peak]);
  out.boundary_value = std::abs(amp.front()) / top;
  out.tail_ratio = std::abs(amp.back()) / top;
  if (out.tail_ratio >= 1e-6) {
    throw InputError("edge state has not decayed below 1e-6 of its maximum by x = " +
                     std::to_string(grid.back()) + "; enlarge the half-line domain");
  }
  out.decay_position = grid.back();
  for (std::size_t i = peak; i < amp.size(); ++i) {
    if (std::abs(amp[i]) < 1e-6 * top) {
      out.decay_position = grid[i];
      break;
    }
  }
  return out;
}

}  // namespace nhspec::edge
