#include <algorithm>
#include <cmath>

#include "nhspec/error.hpp"
#include "nhspec/spectrum.hpp"
#include "nhspec/wave_field.hpp"

namespace nhspec {

double l2_norm(const WaveField& wf) {
  const std::size_t n = wf.size();
  if (n == 0) return 0.0;
  double s = 0.0;
  if (wf.sampling == Sampling::sites || n < 2) {
    for (const auto& a : wf.amplitudes) s += std::norm(a);
    return std::sqrt(s);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = wf.positions[i + 1] - wf.positions[i];
    s += 0.5 * h * (std::norm(wf.amplitudes[i]) + std::norm(wf.amplitudes[i + 1]));
  }
  return std::sqrt(s);
}

double max_abs(const WaveField& wf) {
  double m = 0.0;
  for (const auto& a : wf.amplitudes) m = std::max(m, std::abs(a));
  return m;
}

WaveField normalized(WaveField wf, NormConvention convention) {
  if (convention == NormConvention::raw) {
    wf.norm = convention;
    return wf;
  }
  const double scale = convention == NormConvention::unit_l2 ? l2_norm(wf) : max_abs(wf);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InputError("cannot normalise a zero or non-finite wavefunction");
  }
  for (auto& a : wf.amplitudes) a /= scale;
  wf.norm = convention;
  return wf;
}

GridFunction as_grid_function(const WaveField& wf) {
  return GridFunction{wf.positions, wf.amplitudes};
}

std::string_view to_string(Provenance p) {
  return p == Provenance::analytic ? "analytic" : "numeric";
}

void Spectrum::sort() {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SpectrumEntry& a, const SpectrumEntry& b) {
                     if (a.energy.real() != b.energy.real())
                       return a.energy.real() < b.energy.real();
                     return a.energy.imag() < b.energy.imag();
                   });
}

}  // namespace nhspec
