#pragma once

#include <string_view>
#include <vector>

#include "nhspec/numeric_core.hpp"

namespace nhspec {

enum class Provenance { analytic, numeric };

std::string_view to_string(Provenance p);

struct SpectrumEntry {
  long index = 0;
  cplx energy;
  Provenance provenance = Provenance::analytic;
};

// Eigenenergies kept sorted by real part, then imaginary part.
struct Spectrum {
  std::vector<SpectrumEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  void sort();
};

}  // namespace nhspec
