#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ghostsim/field.hpp"
#include "ghostsim/grid.hpp"

namespace ghostsim {

// Highest supported Noll single index (radial degree n <= 10).
inline constexpr int kMaxNollIndex = 66;

struct ZernikeTerm {
  int noll_index = 1;
  double coefficient = 0;  // radians at the unit disk edge (Noll normalization)
};

struct MonomialTerm {
  int px = 0;
  int py = 0;
  double coefficient = 0;  // radians per length^(px+py)
};

using AberrationTerm = std::variant<ZernikeTerm, MonomialTerm>;

struct AberrationSpec {
  std::vector<AberrationTerm> terms;
  double aperture_radius = 1.0;  // unit-disk scale for Zernike evaluation
};

// Noll single index -> (radial degree n, azimuthal order m >= 0, sine flag).
// Within Noll ordering, odd j carries the sin(m theta) term, even j the cosine.
inline void noll_to_nm(int j, int& n, int& m, bool& sine) {
  if (j < 1) throw std::invalid_argument("Zernike Noll index must be >= 1");
  if (j > kMaxNollIndex)
    throw std::invalid_argument("Zernike Noll index " + std::to_string(j) +
                                " above supported maximum " + std::to_string(kMaxNollIndex));
  n = 0;
  int len = 1;
  while (len < j) {
    ++n;
    len += n + 1;
  }
  const int dl = n + 1 - len + j;
  m = 2 * ((dl + (n % 2)) / 2) + ((n % 2) ? 0 : 1) - 1;
  sine = (j % 2) != 0;
}

// Zernike polynomial in Noll convention, evaluated as a polynomial on the
// whole plane (no clipping at the unit disk, so parity identities hold on the
// full grid). (xh, yh) are coordinates already scaled by the aperture radius.
inline double zernike_noll(int j, double xh, double yh) {
  int n, m;
  bool sine;
  noll_to_nm(j, n, m, sine);
  const double r2 = xh * xh + yh * yh;
  // radial part: R_n^m(r) = sum_s (-1)^s (n-s)! / (s! ((n+m)/2-s)! ((n-m)/2-s)!) r^(n-2s)
  double radial = 0.0;
  {
    auto fact = [](int k) {
      double f = 1.0;
      for (int i = 2; i <= k; ++i) f *= i;
      return f;
    };
    const int smax = (n - m) / 2;
    const double r = std::sqrt(r2);
    for (int s = 0; s <= smax; ++s) {
      const double c = ((s % 2) ? -1.0 : 1.0) * fact(n - s) /
                       (fact(s) * fact((n + m) / 2 - s) * fact((n - m) / 2 - s));
      radial += c * std::pow(r, double(n - 2 * s));
    }
  }
  double norm = std::sqrt(double(n + 1));
  if (m != 0) norm *= std::sqrt(2.0);
  if (m == 0) return norm * radial;
  const double theta = std::atan2(yh, xh);
  return norm * radial * (sine ? std::sin(m * theta) : std::cos(m * theta));
}

// Sample the summed aberration phase on the grid. Zernike terms are 2D-only
// and take the argument x / aperture_radius; monomial terms apply in either
// dimensionality (py must be 0 in 1D).
inline PhaseMap synthesize_phase(const AberrationSpec& spec, const GridGeometry& grid) {
  if (!(spec.aperture_radius > 0))
    throw std::invalid_argument("aberration: aperture_radius must be positive");
  for (const auto& term : spec.terms) {
    if (const auto* z = std::get_if<ZernikeTerm>(&term)) {
      int n, m;
      bool sine;
      noll_to_nm(z->noll_index, n, m, sine);  // validates the index range
      if (grid.dims != 2)
        throw std::invalid_argument("aberration: Zernike terms require a 2D grid");
    } else {
      const auto& mt = std::get<MonomialTerm>(term);
      if (mt.px < 0 || mt.py < 0)
        throw std::invalid_argument("aberration: monomial exponents must be non-negative");
      if (grid.dims == 1 && mt.py != 0)
        throw std::invalid_argument("aberration: monomial py must be 0 on a 1D grid");
    }
  }

  PhaseMap phi = make_phase_map(grid);
  const int n = grid.n;
  auto accumulate = [&](int iy, int ix, std::size_t idx) {
    const double x = grid.coord(ix);
    const double y = grid.dims == 2 ? grid.coord(iy) : 0.0;
    double v = 0.0;
    for (const auto& term : spec.terms) {
      if (const auto* z = std::get_if<ZernikeTerm>(&term)) {
        v += z->coefficient *
             zernike_noll(z->noll_index, x / spec.aperture_radius, y / spec.aperture_radius);
      } else {
        const auto& mt = std::get<MonomialTerm>(term);
        double t = mt.coefficient;
        for (int p = 0; p < mt.px; ++p) t *= x;
        for (int p = 0; p < mt.py; ++p) t *= y;
        v += t;
      }
    }
    phi.values[idx] = v;
  };
  if (grid.dims == 1) {
    for (int i = 0; i < n; ++i) accumulate(0, i, std::size_t(i));
  } else {
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) accumulate(iy, ix, grid.flat(iy, ix));
  }
  require_finite(phi, "synthesized phase");
  return phi;
}

struct ParityParts {
  PhaseMap even;
  PhaseMap odd;
};

// Split into reflection-symmetric and antisymmetric parts under the grid's
// reflection convention: even + odd reconstructs the input exactly.
inline ParityParts decompose_parity(const PhaseMap& phi) {
  ParityParts parts{make_phase_map(phi.grid), make_phase_map(phi.grid)};
  const std::size_t total = phi.grid.size();
  for (std::size_t i = 0; i < total; ++i) {
    const double a = phi.values[i];
    const double b = phi.values[phi.grid.reflect_flat(i)];
    parts.even.values[i] = (a + b) / 2.0;
    parts.odd.values[i] = (a - b) / 2.0;
  }
  return parts;
}

// Unimodular pupil phase factor e^{i phi}; with `doubled` set, e^{2 i phi}
// (the two-photon case where both beams accumulate the symmetric phase).
inline ComplexField pupil_factor(const PhaseMap& phi, bool doubled = false) {
  ComplexField out{phi.grid, std::vector<cdouble>(phi.grid.size())};
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    const double a = doubled ? 2.0 * phi.values[i] : phi.values[i];
    out.values[i] = cdouble(std::cos(a), std::sin(a));
  }
  return out;
}

}  // namespace ghostsim
