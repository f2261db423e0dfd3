#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghostsim/aberration.hpp"
#include "ghostsim/field.hpp"
#include "ghostsim/grid.hpp"
#include "ghostsim/kernel.hpp"
#include "ghostsim/layout.hpp"
#include "ghostsim/objects.hpp"
#include "ghostsim/parallel.hpp"
#include "ghostsim/pump.hpp"

namespace ghostsim {

enum class Provenance { fast_path, oracle, classical, baseline };

inline const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::fast_path: return "fast-path";
    case Provenance::oracle: return "oracle";
    case Provenance::classical: return "classical";
    case Provenance::baseline: return "baseline";
  }
  return "?";
}

// Nonnegative coincidence (or intensity) image on the detection grid.
struct CoincidenceImage {
  GridGeometry grid;
  std::vector<double> rate;
  bool peak_normalized = false;
  Provenance provenance = Provenance::fast_path;
  std::vector<std::string> warnings;
};

// Joint detection amplitude psi(x1, x2) for 1D scenes, row-major [x1][x2].
struct TwoPhotonAmplitude {
  GridGeometry grid;
  std::vector<cdouble> values;
};

inline void peak_normalize(std::vector<double>& rate) {
  double peak = 0;
  for (double v : rate) peak = std::max(peak, v);
  if (peak > 0)
    for (double& v : rate) v /= peak;
}

namespace ghost_detail {

// Cyclic convolution wrap-around guard: warn when the kernel is wide enough
// for tails from one side of the image to re-enter on the other.
inline void attach_wrap_warning(CoincidenceImage& image,
                                const std::vector<double>& kernel_centered) {
  const double w99 = kernel_energy_width(kernel_centered, image.grid, 0.99);
  if (w99 >= image.grid.extent / 4.0) {
    image.warnings.push_back(
        "kernel 99% energy width " + std::to_string(w99) +
        " m exceeds a quarter of the grid extent; cyclic convolution wrap-around "
        "may distort the image");
  }
}

inline CoincidenceImage image_from_kernel(const OpticalLayout& layout, const ObjectMask& object,
                                          const std::vector<double>& kernel_centered,
                                          Provenance provenance) {
  const GridGeometry& grid = object.grid;
  std::vector<double> weights(grid.size());
  for (std::size_t i = 0; i < weights.size(); ++i)
    weights[i] = std::norm(object.transmittance[i]);
  auto rate = cyclic_convolve_centered(weights, kernel_centered, grid);
  const double d = grid.spacing();
  const double measure = grid.dims == 1 ? d : d * d;
  for (double& v : rate) v *= measure;
  CoincidenceImage image{grid, std::move(rate), false, provenance, {}};
  attach_wrap_warning(image, kernel_centered);
  peak_normalize(image.rate);
  image.peak_normalized = true;
  (void)layout;
  return image;
}

}  // namespace ghost_detail

// Coincidence imaging kernel |FT e^{2 i phi_even}|^2 sampled on the detector
// offset lattice u = k x / z2. Only the reflection-even part of the pupil
// phase enters, doubled: both photons traverse the lens at mirror points, so
// odd contributions cancel and even ones add.
inline std::vector<double> ghost_kernel(const OpticalLayout& layout, const PhaseMap& phi) {
  require_finite(phi);
  const ComplexField pupil = pupil_factor(decompose_parity(phi).even, /*doubled=*/true);
  const double d = phi.grid.spacing();
  return kernel_on_offset_lattice(pupil, layout.wavenumber() * d * d / layout.z2);
}

// Far-field two-photon coincidence image: R(x1) = sum_x2 |G(x2)|^2 K(x1-x2),
// evaluated as a cyclic FFT convolution and peak-normalized.
inline CoincidenceImage ghost_fast(const OpticalLayout& layout, const ObjectMask& object,
                                   const PhaseMap& phi) {
  require_same_grid(object.grid, phi.grid, "ghost_fast");
  return ghost_detail::image_from_kernel(layout, object, ghost_kernel(layout, phi),
                                         Provenance::fast_path);
}

struct OracleOptions {
  int max_n = 512;          // cost guard: the quadrature is O(n^3)
  bool source_chirp = false;  // include e^{i k xi^2 / z1} in the source sum
  int threads = 1;
};

struct OracleResult {
  TwoPhotonAmplitude amplitude;
  CoincidenceImage image;
};

// Brute-force quadrature of the two-photon amplitude over source and lens
// planes (1D only):
//   psi(x1,x2) = G(x2) e^{i k (x1^2+x2^2)/(2 z2)}
//                * sum_xi F(xi) A(xi,x1) A(xi,x2)
//   A(xi,x)    = sum_x' e^{-i k (xi/z1 + x/z2) x'} e^{i phi(x')} d
// with F(xi) the sampled pump. All sums are plain Riemann sums on the shared
// grid, so for a plane pump on a Fourier-matched grid (spacing^2 = lambda z1/n)
// the source sum collapses to an exact discrete delta pairing each lens point
// with its reflection partner. The source-plane quadratic phase is a far-field
// casualty and is omitted unless `source_chirp` is set; detection-plane
// quadratic phases are kept (they cancel in |psi|^2).
inline OracleResult ghost_oracle(const OpticalLayout& layout, const ObjectMask& object,
                                 const PhaseMap& phi, const PumpModel& pump,
                                 const OracleOptions& options = {}) {
  require_same_grid(object.grid, phi.grid, "ghost_oracle");
  const GridGeometry& grid = object.grid;
  if (grid.dims != 1)
    throw std::invalid_argument(
        "ghost_oracle requires a 1D grid (the 2D quadrature is a 6-dimensional sum)");
  if (grid.n > options.max_n)
    throw std::invalid_argument("ghost_oracle grid size " + std::to_string(grid.n) +
                                " exceeds the cost guard max_n = " + std::to_string(options.max_n));
  require_finite(phi);

  const int n = grid.n;
  const std::size_t un = std::size_t(n);
  const double d = grid.spacing();
  const double k = layout.wavenumber();
  std::vector<double> x(un);
  for (int i = 0; i < n; ++i) x[std::size_t(i)] = grid.coord(i);

  const ComplexField pupil = pupil_factor(phi);
  const ComplexField pump_field = sample_pump(pump, grid);
  std::vector<cdouble> source(un);
  for (int i = 0; i < n; ++i) {
    cdouble f = pump_field.values[std::size_t(i)];
    if (options.source_chirp)
      f *= fft_detail::unit_phasor((long double)k * x[std::size_t(i)] * x[std::size_t(i)] /
                                   (long double)layout.z1);
    source[std::size_t(i)] = f;
  }

  // A[xi][x] = sum_x' e^{-i k xi x'/z1} pupil(x') e^{-i k x x'/z2} d
  std::vector<cdouble> t1(un * un), t2(un * un), a(un * un);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const long double arg1 = -(long double)k * x[std::size_t(i)] * x[std::size_t(j)] / layout.z1;
      const long double arg2 = -(long double)k * x[std::size_t(i)] * x[std::size_t(j)] / layout.z2;
      t1[std::size_t(i) * un + std::size_t(j)] = fft_detail::unit_phasor(arg1);
      t2[std::size_t(i) * un + std::size_t(j)] = fft_detail::unit_phasor(arg2);
    }
  }
  parallel_chunks(un, options.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t xi = lo; xi < hi; ++xi) {
      for (std::size_t ix = 0; ix < un; ++ix) {
        cdouble acc(0, 0);
        const cdouble* row1 = &t1[xi * un];
        const cdouble* row2 = &t2[ix * un];
        for (std::size_t ip = 0; ip < un; ++ip) acc += row1[ip] * pupil.values[ip] * row2[ip];
        a[xi * un + ix] = acc * d;
      }
    }
  });

  // psi0[x1][x2] = sum_xi source(xi) A[xi][x1] A[xi][x2]
  std::vector<cdouble> psi(un * un, cdouble(0, 0));
  parallel_chunks(un, options.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i1 = lo; i1 < hi; ++i1) {
      cdouble* row = &psi[i1 * un];
      for (std::size_t xi = 0; xi < un; ++xi) {
        const cdouble w = source[xi] * a[xi * un + i1];
        const cdouble* arow = &a[xi * un];
        for (std::size_t i2 = 0; i2 < un; ++i2) row[i2] += w * arow[i2];
      }
    }
  });

  // attach the object modulation and the detection-plane quadratic phases
  std::vector<cdouble> chirp(un);
  for (int i = 0; i < n; ++i)
    chirp[std::size_t(i)] = fft_detail::unit_phasor(
        (long double)k * x[std::size_t(i)] * x[std::size_t(i)] / (2.0L * layout.z2));
  for (std::size_t i1 = 0; i1 < un; ++i1)
    for (std::size_t i2 = 0; i2 < un; ++i2)
      psi[i1 * un + i2] *= object.transmittance[i2] * chirp[i1] * chirp[i2];

  std::vector<double> rate(un, 0.0);
  for (std::size_t i1 = 0; i1 < un; ++i1) {
    double acc = 0;
    for (std::size_t i2 = 0; i2 < un; ++i2) acc += std::norm(psi[i1 * un + i2]);
    rate[i1] = acc * d;
  }
  CoincidenceImage image{grid, std::move(rate), false, Provenance::oracle, {}};
  peak_normalize(image.rate);
  image.peak_normalized = true;
  return OracleResult{TwoPhotonAmplitude{grid, std::move(psi)}, std::move(image)};
}

// Classical beam-steering engine. Each steering sample is an ideal ray pair
// striking the lens at mirror points +-x', so the pair amplitude carries
// phi(x') + phi(-x') directly; the coherent steering sum over the sample set
// replaces the source integral of the entangled engine. With n_steer = n the
// set covers the whole lens grid and the image coincides with the fast path.
inline CoincidenceImage classical_ghost(const OpticalLayout& layout, const ObjectMask& object,
                                        const PhaseMap& phi, long n_steer) {
  require_same_grid(object.grid, phi.grid, "classical_ghost");
  if (n_steer < 1) throw std::invalid_argument("classical_ghost requires n_steer >= 1");
  require_finite(phi);
  const GridGeometry& grid = object.grid;
  const int n = grid.n;

  // deterministic uniform steering set over the grid's frequency support,
  // centered so n_steer = 1 is the on-axis sample; duplicates accumulate
  std::vector<double> hits(std::size_t(n), 0.0);
  const double stride = double(n) / double(n_steer);
  for (long j = 0; j < n_steer; ++j) {
    const long idx = (n / 2 + std::lround(double(j) * stride)) % n;
    hits[std::size_t(idx < 0 ? idx + n : idx)] += 1.0;
  }

  ComplexField paired{grid, std::vector<cdouble>(grid.size(), cdouble(0, 0))};
  if (grid.dims == 1) {
    for (int i = 0; i < n; ++i) {
      if (hits[std::size_t(i)] == 0.0) continue;
      const double sym = phi.values[std::size_t(i)] + phi.values[std::size_t(grid.reflect(i))];
      paired.values[std::size_t(i)] =
          hits[std::size_t(i)] * cdouble(std::cos(sym), std::sin(sym));
    }
  } else {
    for (int iy = 0; iy < n; ++iy) {
      if (hits[std::size_t(iy)] == 0.0) continue;
      for (int ix = 0; ix < n; ++ix) {
        if (hits[std::size_t(ix)] == 0.0) continue;
        const std::size_t idx = grid.flat(iy, ix);
        const double sym = phi.values[idx] + phi.values[grid.reflect_flat(idx)];
        paired.values[idx] =
            hits[std::size_t(iy)] * hits[std::size_t(ix)] * cdouble(std::cos(sym), std::sin(sym));
      }
    }
  }
  const double d = grid.spacing();
  auto kernel = kernel_on_offset_lattice(paired, layout.wavenumber() * d * d / layout.z2);
  return ghost_detail::image_from_kernel(layout, object, kernel, Provenance::classical);
}

struct ImageMetrics {
  double rms_error = 0;               // RMS of the peak-normalized difference
  std::vector<double> peak_location;  // coordinate of the maximum (x, then y)
  double kernel_fwhm = 0;             // full width at half maximum along x
};

namespace ghost_detail {

// argmax with ties resolved toward the axis (smallest radius, then smallest
// coordinates) so symmetric and flat images report a stable central peak
inline std::size_t peak_index(const std::vector<double>& rate, const GridGeometry& grid) {
  std::size_t best = 0;
  double best_val = -1.0;
  double best_r2 = 0.0;
  const int n = grid.n;
  for (std::size_t i = 0; i < rate.size(); ++i) {
    const int ix = int(i % std::size_t(n));
    const int iy = grid.dims == 2 ? int(i / std::size_t(n)) : n / 2;
    const double x = grid.coord(ix);
    const double y = grid.dims == 2 ? grid.coord(iy) : 0.0;
    const double r2 = x * x + y * y;
    if (rate[i] > best_val || (rate[i] == best_val && r2 < best_r2)) {
      best = i;
      best_val = rate[i];
      best_r2 = r2;
    }
  }
  return best;
}

inline double fwhm_profile(const std::vector<double>& profile, const GridGeometry& grid,
                           int peak) {
  const int n = grid.n;
  const double d = grid.spacing();
  const double half = profile[std::size_t(peak)] / 2.0;
  if (!(profile[std::size_t(peak)] > 0)) return 0.0;
  double left = grid.coord(0);
  bool found_left = false;
  for (int i = peak; i-- > 0;) {
    if (profile[std::size_t(i)] < half) {
      const double frac = (profile[std::size_t(i + 1)] - half) /
                          (profile[std::size_t(i + 1)] - profile[std::size_t(i)]);
      left = grid.coord(i + 1) - frac * d;
      found_left = true;
      break;
    }
  }
  double right = grid.coord(n - 1);
  bool found_right = false;
  for (int i = peak + 1; i < n; ++i) {
    if (profile[std::size_t(i)] < half) {
      const double frac = (profile[std::size_t(i - 1)] - half) /
                          (profile[std::size_t(i - 1)] - profile[std::size_t(i)]);
      right = grid.coord(i - 1) + frac * d;
      found_right = true;
      break;
    }
  }
  if (!found_left && !found_right) return grid.extent;  // flat: no crossing
  return right - left;
}

}  // namespace ghost_detail

inline ImageMetrics image_metrics(const CoincidenceImage& image,
                                  const CoincidenceImage& reference) {
  require_same_grid(image.grid, reference.grid, "image_metrics");
  std::vector<double> a = image.rate, b = reference.rate;
  peak_normalize(a);
  peak_normalize(b);
  double sum2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum2 += diff * diff;
  }
  ImageMetrics m;
  m.rms_error = std::sqrt(sum2 / double(a.size()));

  const GridGeometry& grid = image.grid;
  const std::size_t p = ghost_detail::peak_index(a, grid);
  const int n = grid.n;
  const int ix = int(p % std::size_t(n));
  const int iy = grid.dims == 2 ? int(p / std::size_t(n)) : 0;
  m.peak_location.push_back(grid.coord(ix));
  if (grid.dims == 2) m.peak_location.push_back(grid.coord(iy));

  if (grid.dims == 1) {
    m.kernel_fwhm = ghost_detail::fwhm_profile(a, grid, ix);
  } else {
    std::vector<double> row(a.begin() + long(grid.flat(iy, 0)),
                            a.begin() + long(grid.flat(iy, 0)) + n);
    m.kernel_fwhm = ghost_detail::fwhm_profile(row, grid, ix);
  }
  return m;
}

}  // namespace ghostsim
