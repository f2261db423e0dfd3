#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghostsim/field.hpp"
#include "ghostsim/grid.hpp"

namespace ghostsim {

// Complex transmittance of the object in the bucket-detector arm, |t| <= 1.
struct ObjectMask {
  GridGeometry grid;
  std::vector<cdouble> transmittance;
};

inline void require_mask_bound(const ObjectMask& mask) {
  for (const cdouble& t : mask.transmittance)
    if (std::abs(t) > 1.0 + 1e-12)
      throw std::invalid_argument("object mask transmittance must satisfy |t| <= 1");
}

inline const std::vector<std::string>& standard_object_names() {
  static const std::vector<std::string> names = {"uniform", "point", "double-slit",
                                                 "bar-target", "letter-E"};
  return names;
}

// Built-in deterministic test targets.
//   uniform     all-ones
//   point       single nonzero sample at the grid point nearest `offset`
//   double-slit two slits of width L/16 centered at +-L/8 (pattern along x)
//   bar-target  four bars of width L/20 on an L/10 pitch (pattern along x)
//   letter-E    block glyph spanning the central half of the grid (2D only)
inline ObjectMask standard_object(const std::string& name, const GridGeometry& grid,
                                  double offset = 0.0) {
  ObjectMask mask{grid, std::vector<cdouble>(grid.size(), cdouble(0, 0))};
  const int n = grid.n;
  const double L = grid.extent;
  const double d = grid.spacing();

  auto fill_x_profile = [&](auto&& profile) {
    for (int ix = 0; ix < n; ++ix) {
      const cdouble v = profile(grid.coord(ix));
      if (grid.dims == 1) {
        mask.transmittance[std::size_t(ix)] = v;
      } else {
        for (int iy = 0; iy < n; ++iy) mask.transmittance[grid.flat(iy, ix)] = v;
      }
    }
  };

  if (name == "uniform") {
    for (auto& t : mask.transmittance) t = cdouble(1, 0);
  } else if (name == "point") {
    const int ix = n / 2 + int(std::lround(offset / d));
    if (ix < 0 || ix >= n) throw std::invalid_argument("point object offset outside the grid");
    mask.transmittance[grid.dims == 1 ? std::size_t(ix) : grid.flat(n / 2, ix)] = cdouble(1, 0);
  } else if (name == "double-slit") {
    const double w = L / 16.0, s = L / 4.0;
    fill_x_profile([&](double x) {
      const bool open = std::abs(x - s / 2) <= w / 2 || std::abs(x + s / 2) <= w / 2;
      return cdouble(open ? 1.0 : 0.0, 0.0);
    });
  } else if (name == "bar-target") {
    const double w = L / 20.0, pitch = L / 10.0;
    fill_x_profile([&](double x) {
      const double u = x + 2.0 * pitch;  // four bars centered on the axis
      const bool open = u >= 0 && u < 4.0 * pitch && std::fmod(u, pitch) < w;
      return cdouble(open ? 1.0 : 0.0, 0.0);
    });
  } else if (name == "letter-E") {
    if (grid.dims != 2) throw std::invalid_argument("letter-E object requires a 2D grid");
    const double h = L / 2.0, w = L / 4.0, bar = h / 5.0;
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const double x = grid.coord(ix), y = grid.coord(iy);
        if (std::abs(y) > h / 2 || x < -w / 2 || x > w / 2) continue;
        const bool spine = x <= -w / 2 + bar;
        const bool arm = std::abs(y) >= h / 2 - bar || std::abs(y) <= bar / 2;
        if (spine || arm) mask.transmittance[grid.flat(iy, ix)] = cdouble(1, 0);
      }
    }
  } else {
    throw std::invalid_argument("unknown standard object '" + name + "'");
  }
  return mask;
}

}  // namespace ghostsim
