#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ghostsim/grid.hpp"

namespace ghostsim {

using cdouble = std::complex<double>;

// Real phase samples (radians) on a centered grid.
struct PhaseMap {
  GridGeometry grid;
  std::vector<double> values;
};

// Complex scalar amplitude on a centered grid.
struct ComplexField {
  GridGeometry grid;
  std::vector<cdouble> values;
};

inline PhaseMap make_phase_map(const GridGeometry& grid) {
  return PhaseMap{grid, std::vector<double>(grid.size(), 0.0)};
}

inline void require_finite(const PhaseMap& phi, const char* what = "phase map") {
  for (double v : phi.values)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " contains non-finite values");
}

inline void require_finite(const ComplexField& f, const char* what = "field") {
  for (const cdouble& v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument(std::string(what) + " contains non-finite values");
}

inline void require_same_grid(const GridGeometry& a, const GridGeometry& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace ghostsim
