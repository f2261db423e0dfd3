#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ghostsim/aberration.hpp"
#include "ghostsim/field.hpp"
#include "ghostsim/grid.hpp"
#include "ghostsim/layout.hpp"

namespace testutil {

using ghostsim::cdouble;

// Slow DTFT oracle, independent of the library transform path.
inline std::vector<cdouble> naive_lattice_dtft(const std::vector<cdouble>& x, std::size_t count,
                                               double theta0, double dtheta, long i0) {
  std::vector<cdouble> out(count, cdouble(0, 0));
  for (std::size_t m = 0; m < count; ++m) {
    const double theta = theta0 + double(m) * dtheta;
    cdouble acc(0, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double arg = -theta * (double(i) - double(i0));
      acc += x[i] * cdouble(std::cos(arg), std::sin(arg));
    }
    out[m] = acc;
  }
  return out;
}

inline double rel_rms(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0, den = 0;
  double pa = 0, pb = 0;
  for (double v : a) pa = std::max(pa, v);
  for (double v : b) pb = std::max(pb, v);
  if (pa == 0) pa = 1;
  if (pb == 0) pb = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] / pa - b[i] / pb;
    num += d * d;
    den += (b[i] / pb) * (b[i] / pb);
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Grid whose spacing satisfies spacing^2 = lambda z1 / n, so the sampled
// frequency lattice coincides with the DFT lattice (exact discrete deltas).
inline ghostsim::GridGeometry matched_grid(int n, double wavelength, double z1, int dims = 1) {
  const double spacing = std::sqrt(wavelength * z1 / n);
  return ghostsim::make_grid(dims, n, n * spacing);
}

// Cubic phase with the stated peak phase at half-extent; odd_projection zeroes
// the self-paired boundary samples so the map is exactly odd under the grid's
// reflection convention.
inline ghostsim::PhaseMap cubic_phase(const ghostsim::GridGeometry& grid, double rad_at_half,
                                      bool odd_projection = true) {
  ghostsim::PhaseMap phi = ghostsim::make_phase_map(grid);
  const double half = grid.extent / 2.0;
  for (int i = 0; i < grid.n; ++i) {
    const double t = grid.coord(i) / half;
    phi.values[std::size_t(i)] = rad_at_half * t * t * t;
  }
  if (odd_projection) phi = ghostsim::decompose_parity(phi).odd;
  return phi;
}

inline ghostsim::PhaseMap quadratic_phase(const ghostsim::GridGeometry& grid,
                                          double rad_at_half) {
  ghostsim::PhaseMap phi = ghostsim::make_phase_map(grid);
  const double half = grid.extent / 2.0;
  for (int i = 0; i < grid.n; ++i) {
    const double t = grid.coord(i) / half;
    phi.values[std::size_t(i)] = rad_at_half * t * t;
  }
  return phi;
}

// Random monomial mixture on the grid (1D or 2D), optionally parity-pure.
inline ghostsim::PhaseMap random_monomial_phase(const ghostsim::GridGeometry& grid,
                                                std::mt19937_64& rng, int max_power = 5) {
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  std::uniform_int_distribution<int> power(0, max_power);
  ghostsim::AberrationSpec spec;
  spec.aperture_radius = grid.extent / 2.0;
  const int terms = 2 + int(rng() % 4);
  const double half = grid.extent / 2.0;
  for (int t = 0; t < terms; ++t) {
    ghostsim::MonomialTerm m;
    m.px = power(rng);
    m.py = grid.dims == 2 ? power(rng) : 0;
    m.coefficient = coeff(rng) / std::pow(half, double(m.px + m.py));
    spec.terms.push_back(m);
  }
  return ghostsim::synthesize_phase(spec, grid);
}

}  // namespace testutil
