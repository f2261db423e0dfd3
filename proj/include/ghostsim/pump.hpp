#pragma once

#include <cmath>
#include <stdexcept>

#include "ghostsim/field.hpp"
#include "ghostsim/grid.hpp"

namespace ghostsim {

// Source illumination profile E_p sampled on the source plane. The quadratic
// free-propagation phase is not part of the profile; engines that model it
// apply it themselves.
struct PumpModel {
  enum class Kind { plane, gaussian };
  Kind kind = Kind::plane;
  double width = 0;                 // 1/e field radius, gaussian only
  cdouble amplitude = {1.0, 0.0};
};

inline PumpModel plane_pump(cdouble amplitude = {1.0, 0.0}) {
  return PumpModel{PumpModel::Kind::plane, 0.0, amplitude};
}

inline PumpModel gaussian_pump(double width, cdouble amplitude = {1.0, 0.0}) {
  PumpModel p{PumpModel::Kind::gaussian, width, amplitude};
  if (!(p.width > 0)) throw std::invalid_argument("gaussian pump width must be positive");
  return p;
}

inline ComplexField sample_pump(const PumpModel& pump, const GridGeometry& grid) {
  if (pump.kind == PumpModel::Kind::gaussian && !(pump.width > 0))
    throw std::invalid_argument("gaussian pump width must be positive");
  ComplexField out{grid, std::vector<cdouble>(grid.size())};
  const int n = grid.n;
  for (std::size_t idx = 0; idx < out.values.size(); ++idx) {
    if (pump.kind == PumpModel::Kind::plane) {
      out.values[idx] = pump.amplitude;
    } else {
      const int ix = int(idx % std::size_t(n));
      const int iy = grid.dims == 2 ? int(idx / std::size_t(n)) : 0;
      const double x = grid.coord(ix);
      const double y = grid.dims == 2 ? grid.coord(iy) : 0.0;
      const double r2 = x * x + y * y;
      out.values[idx] = pump.amplitude * std::exp(-r2 / (pump.width * pump.width));
    }
  }
  return out;
}

}  // namespace ghostsim
