#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ghostsim/fft.hpp"
#include "ghostsim/field.hpp"

namespace ghostsim {

// Complex transform of a pupil field sampled on the detector offset lattice:
//   F[j] = sum_i P[i] exp(-i theta_step (j - n/2)(i - n/2)) * spacing^dims
// with j running over the same centered index range as the grid. theta_step
// is the phase advance per index pair, k * spacing^2 / z for a transform
// argument u = k x / z. Exact sampled transform (CZT), no interpolation; on a
// Fourier-matched grid (theta_step = 2 pi / n) this coincides with the DFT.
inline std::vector<cdouble> pupil_transform_on_lattice(const ComplexField& pupil,
                                                       double theta_step) {
  const int n = pupil.grid.n;
  const long double theta0 = -(long double)theta_step * (long double)(n / 2);
  if (pupil.grid.dims == 1) {
    auto out = lattice_dtft(pupil.values, std::size_t(n), theta0, theta_step, n / 2);
    const double d = pupil.grid.spacing();
    for (auto& v : out) v *= d;
    return out;
  }
  // separable: transform rows, then columns
  std::vector<cdouble> tmp(pupil.values);
  std::vector<cdouble> line(std::size_t(n), cdouble(0, 0));
  for (int r = 0; r < n; ++r) {
    line.assign(tmp.begin() + std::size_t(r) * n, tmp.begin() + std::size_t(r + 1) * n);
    auto t = lattice_dtft(line, std::size_t(n), theta0, theta_step, n / 2);
    std::copy(t.begin(), t.end(), tmp.begin() + std::size_t(r) * n);
  }
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) line[std::size_t(r)] = tmp[std::size_t(r) * n + c];
    auto t = lattice_dtft(line, std::size_t(n), theta0, theta_step, n / 2);
    for (int r = 0; r < n; ++r) tmp[std::size_t(r) * n + c] = t[std::size_t(r)];
  }
  const double d = pupil.grid.spacing();
  for (auto& v : tmp) v *= d * d;
  return tmp;
}

// |transform|^2 on the offset lattice — the imaging kernel of the coincidence
// and incoherent integrals, centered (offset 0 at index n/2 per axis).
inline std::vector<double> kernel_on_offset_lattice(const ComplexField& pupil,
                                                    double theta_step) {
  auto f = pupil_transform_on_lattice(pupil, theta_step);
  std::vector<double> k(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) k[i] = std::norm(f[i]);
  return k;
}

// Cyclic convolution of a centered kernel with a nonnegative weight array on
// the shared grid; the kernel is rotated so that offset 0 sits at index 0
// before the transform.
inline std::vector<double> cyclic_convolve_centered(const std::vector<double>& weights,
                                                    const std::vector<double>& kernel_centered,
                                                    const GridGeometry& grid) {
  const int n = grid.n;
  std::vector<cdouble> w(grid.size()), kc(grid.size());
  if (grid.dims == 1) {
    for (int i = 0; i < n; ++i) {
      w[std::size_t(i)] = weights[std::size_t(i)];
      kc[std::size_t(i)] = kernel_centered[std::size_t((i + n / 2) % n)];
    }
    auto fw = dft(std::move(w), false);
    auto fk = dft(std::move(kc), false);
    for (std::size_t i = 0; i < fw.size(); ++i) fw[i] *= fk[i];
    auto conv = dft(std::move(fw), true);
    std::vector<double> out(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i) out[std::size_t(i)] = std::max(0.0, conv[std::size_t(i)].real());
    return out;
  }
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      w[grid.flat(iy, ix)] = weights[grid.flat(iy, ix)];
      kc[grid.flat(iy, ix)] = kernel_centered[grid.flat((iy + n / 2) % n, (ix + n / 2) % n)];
    }
  }
  dft2_inplace(w, n, false);
  dft2_inplace(kc, n, false);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] *= kc[i];
  dft2_inplace(w, n, true);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(0.0, w[i].real());
  return out;
}

// Width of the centered box (max-norm) holding the given energy fraction.
inline double kernel_energy_width(const std::vector<double>& kernel_centered,
                                  const GridGeometry& grid, double fraction) {
  const int n = grid.n;
  double total = 0;
  for (double v : kernel_centered) total += v;
  if (!(total > 0)) return 0.0;
  double cum = 0;
  for (int w = 0; w <= n / 2; ++w) {
    if (grid.dims == 1) {
      if (w == 0) {
        cum += kernel_centered[std::size_t(n / 2)];
      } else {
        const int lo = n / 2 - w, hi = n / 2 + w;
        if (lo >= 0) cum += kernel_centered[std::size_t(lo)];
        if (hi < n) cum += kernel_centered[std::size_t(hi)];
      }
    } else {
      // add the square ring at max-norm radius w
      for (int iy = n / 2 - w; iy <= n / 2 + w; ++iy) {
        if (iy < 0 || iy >= n) continue;
        for (int ix = n / 2 - w; ix <= n / 2 + w; ++ix) {
          if (ix < 0 || ix >= n) continue;
          if (std::max(std::abs(iy - n / 2), std::abs(ix - n / 2)) != w) continue;
          cum += kernel_centered[grid.flat(iy, ix)];
        }
      }
    }
    if (cum >= fraction * total) return (2 * w + 1) * grid.spacing();
  }
  return grid.extent;
}

// Fine frequency-resolved kernel profile |transform(pupil)|^2 for resampling
// at scattered arguments. `refine` oversamples the native frequency spacing.
struct KernelProfile {
  int dims = 1;
  std::size_t n = 0;   // samples per axis (centered)
  double du = 0;       // frequency spacing, rad / length
  std::vector<double> value;
};

inline KernelProfile fine_kernel_profile(const ComplexField& pupil, int refine) {
  using fft_detail::kTwoPi;
  const int n = pupil.grid.n;
  const double d = pupil.grid.spacing();
  const std::size_t nf = fft_detail::next_pow2(std::size_t(refine) * std::size_t(n));
  const long double dtheta = kTwoPi / (long double)nf;
  const long double theta0 = -dtheta * (long double)(nf / 2);
  KernelProfile prof;
  prof.dims = pupil.grid.dims;
  prof.n = nf;
  prof.du = double(dtheta) / d;
  if (pupil.grid.dims == 1) {
    auto f = lattice_dtft(pupil.values, nf, theta0, dtheta, n / 2);
    prof.value.resize(nf);
    for (std::size_t i = 0; i < nf; ++i) prof.value[i] = std::norm(f[i]) * d * d;
    return prof;
  }
  // rows (n -> nf), then columns (n -> nf)
  std::vector<cdouble> mid(std::size_t(n) * nf);
  std::vector<cdouble> line(std::size_t(n), cdouble(0, 0));
  for (int r = 0; r < n; ++r) {
    line.assign(pupil.values.begin() + std::size_t(r) * n,
                pupil.values.begin() + std::size_t(r + 1) * n);
    auto t = lattice_dtft(line, nf, theta0, dtheta, n / 2);
    std::copy(t.begin(), t.end(), mid.begin() + std::size_t(r) * nf);
  }
  prof.value.resize(nf * nf);
  for (std::size_t c = 0; c < nf; ++c) {
    for (int r = 0; r < n; ++r) line[std::size_t(r)] = mid[std::size_t(r) * nf + c];
    auto t = lattice_dtft(line, nf, theta0, dtheta, n / 2);
    for (std::size_t r = 0; r < nf; ++r)
      prof.value[r * nf + c] = std::norm(t[r]) * d * d * d * d;
  }
  return prof;
}

inline double sample_profile(const KernelProfile& prof, double ux) {
  const double pos = ux / prof.du + double(prof.n / 2);
  if (pos < 0 || pos > double(prof.n - 1)) return 0.0;
  const std::size_t i = std::size_t(pos);
  const double frac = pos - double(i);
  const double a = prof.value[i];
  const double b = i + 1 < prof.n ? prof.value[i + 1] : 0.0;
  return a + frac * (b - a);
}

inline double sample_profile(const KernelProfile& prof, double ux, double uy) {
  const double px = ux / prof.du + double(prof.n / 2);
  const double py = uy / prof.du + double(prof.n / 2);
  if (px < 0 || px > double(prof.n - 1) || py < 0 || py > double(prof.n - 1)) return 0.0;
  const std::size_t ix = std::size_t(px), iy = std::size_t(py);
  const double fx = px - double(ix), fy = py - double(iy);
  auto at = [&](std::size_t r, std::size_t c) {
    if (r >= prof.n || c >= prof.n) return 0.0;
    return prof.value[r * prof.n + c];
  };
  const double v00 = at(iy, ix), v01 = at(iy, ix + 1);
  const double v10 = at(iy + 1, ix), v11 = at(iy + 1, ix + 1);
  return (1 - fy) * ((1 - fx) * v00 + fx * v01) + fy * ((1 - fx) * v10 + fx * v11);
}

}  // namespace ghostsim
