#pragma once

#include <cstddef>
#include <stdexcept>

namespace ghostsim {

// Centered uniform sampling of a transverse plane (square in 2D).
// Coordinates are (i - n/2) * spacing for i = 0..n-1. The reflection partner
// of index i is (n - i) mod n, so index 0 (the lone -L/2 edge sample) is its
// own partner; this matches discrete-Fourier symmetry and makes parity
// decomposition exactly involutive.
struct GridGeometry {
  int dims = 1;        // 1 or 2
  int n = 0;           // samples per axis, positive and even
  double extent = 0;   // physical full width L

  double spacing() const { return extent / n; }
  std::size_t size() const {
    return dims == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n);
  }
  double coord(int i) const { return (i - n / 2) * spacing(); }
  int reflect(int i) const { return (n - i) % n; }

  std::size_t flat(int iy, int ix) const { return std::size_t(iy) * n + ix; }

  // Point reflection x -> -x of a flat sample index.
  std::size_t reflect_flat(std::size_t idx) const {
    if (dims == 1) return std::size_t(reflect(int(idx)));
    const int iy = int(idx / std::size_t(n));
    const int ix = int(idx % std::size_t(n));
    return flat(reflect(iy), reflect(ix));
  }

  bool operator==(const GridGeometry&) const = default;
};

inline GridGeometry make_grid(int dims, int n, double extent) {
  if (dims != 1 && dims != 2)
    throw std::invalid_argument("grid dims must be 1 or 2");
  if (n <= 0 || n % 2 != 0)
    throw std::invalid_argument("grid samples per axis must be positive and even");
  if (!(extent > 0))
    throw std::invalid_argument("grid extent must be positive");
  return GridGeometry{dims, n, extent};
}

}  // namespace ghostsim
