#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ghostsim/aberration.hpp"
#include "ghostsim/fft.hpp"
#include "ghostsim/ghost.hpp"
#include "ghostsim/kernel.hpp"
#include "ghostsim/layout.hpp"
#include "ghostsim/objects.hpp"
#include "ghostsim/pump.hpp"

namespace ghostsim {

// Single-beam coherent kernel |FT e^{i phi}|^2 on the detector offset lattice
// u = k x / z2 (same lattice as ghost_kernel, so the two are directly
// comparable as arrays).
inline std::vector<double> coherent_kernel(const OpticalLayout& layout, const PhaseMap& phi) {
  require_finite(phi);
  const ComplexField pupil = pupil_factor(phi);
  const double d = phi.grid.spacing();
  return kernel_on_offset_lattice(pupil, layout.wavenumber() * d * d / layout.z2);
}

namespace baseline_detail {

inline int profile_refine(int dims) { return dims == 1 ? 16 : 4; }

}  // namespace baseline_detail

// Incoherently illuminated single-lens image:
//   I(x1) = sum_xi |G(xi) E_p(xi)|^2 * |FT e^{i phi}|^2 ( k (xi/z1 + x1/z2) )
// The kernel is evaluated once on a fine frequency lattice and resampled
// linearly onto the shifted argument lattice; the sum is then a cyclic
// correlation on a zero-padded grid, with the output read off at
// (z1/z2) * x1 (exact whenever those points land on the lattice).
inline CoincidenceImage incoherent_image(const OpticalLayout& layout, const ObjectMask& object,
                                         const PumpModel& illumination, const PhaseMap& phi) {
  require_same_grid(object.grid, phi.grid, "incoherent_image");
  require_finite(phi);
  const GridGeometry& grid = object.grid;
  const int n = grid.n;
  const double d = grid.spacing();
  const double k = layout.wavenumber();
  const double ratio = layout.z1 / layout.z2;

  const KernelProfile prof =
      fine_kernel_profile(pupil_factor(phi), baseline_detail::profile_refine(grid.dims));

  const std::size_t m = fft_detail::next_pow2(std::size_t(std::ceil(n * (1.0 + ratio))) + 2);
  const int mi = int(m);

  const ComplexField pump_field = sample_pump(illumination, grid);
  auto weight_at = [&](std::size_t idx) {
    return std::norm(object.transmittance[idx] * pump_field.values[idx]);
  };

  std::vector<double> out(grid.size(), 0.0);
  if (grid.dims == 1) {
    std::vector<cdouble> kern(m, cdouble(0, 0)), wts(m, cdouble(0, 0));
    for (int j = 0; j < mi; ++j)
      kern[std::size_t(j)] = sample_profile(prof, k * (j - mi / 2) * d / layout.z1);
    for (int i = 0; i < n; ++i) wts[std::size_t(i + (mi - n) / 2)] = weight_at(std::size_t(i));
    auto fk = dft(std::move(kern), false);
    auto fw = dft(std::move(wts), false);
    for (std::size_t i = 0; i < m; ++i) fk[i] *= std::conj(fw[i]);
    auto corr = dft(std::move(fk), true);
    for (int i = 0; i < n; ++i) {
      const double r = ratio * (i - n / 2);
      const long lo = (long)std::floor(r);
      const double frac = r - double(lo);
      auto wrap = [&](long v) { return std::size_t(((v % (long)m) + (long)m) % (long)m); };
      const double c0 = corr[wrap(lo)].real();
      const double c1 = corr[wrap(lo + 1)].real();
      out[std::size_t(i)] = std::max(0.0, c0 + frac * (c1 - c0));
    }
  } else {
    std::vector<cdouble> kern(m * m, cdouble(0, 0)), wts(m * m, cdouble(0, 0));
    for (int jy = 0; jy < mi; ++jy)
      for (int jx = 0; jx < mi; ++jx)
        kern[std::size_t(jy) * m + std::size_t(jx)] =
            sample_profile(prof, k * (jx - mi / 2) * d / layout.z1,
                           k * (jy - mi / 2) * d / layout.z1);
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        wts[std::size_t(iy + (mi - n) / 2) * m + std::size_t(ix + (mi - n) / 2)] =
            weight_at(grid.flat(iy, ix));
    dft2_inplace(kern, mi, false);
    dft2_inplace(wts, mi, false);
    for (std::size_t i = 0; i < kern.size(); ++i) kern[i] *= std::conj(wts[i]);
    dft2_inplace(kern, mi, true);
    auto wrap = [&](long v) { return std::size_t(((v % (long)m) + (long)m) % (long)m); };
    auto corr_at = [&](long ry, long rx) { return kern[wrap(ry) * m + wrap(rx)].real(); };
    for (int iy = 0; iy < n; ++iy) {
      const double ry = ratio * (iy - n / 2);
      const long ly = (long)std::floor(ry);
      const double fy = ry - double(ly);
      for (int ix = 0; ix < n; ++ix) {
        const double rx = ratio * (ix - n / 2);
        const long lx = (long)std::floor(rx);
        const double fx = rx - double(lx);
        const double v = (1 - fy) * ((1 - fx) * corr_at(ly, lx) + fx * corr_at(ly, lx + 1)) +
                         fy * ((1 - fx) * corr_at(ly + 1, lx) + fx * corr_at(ly + 1, lx + 1));
        out[grid.flat(iy, ix)] = std::max(0.0, v);
      }
    }
  }

  const double measure = grid.dims == 1 ? d : d * d;
  for (double& v : out) v *= measure;
  CoincidenceImage image{grid, std::move(out), false, Provenance::baseline, {}};
  peak_normalize(image.rate);
  image.peak_normalized = true;
  return image;
}

struct ComparisonRecord {
  CoincidenceImage ghost;
  CoincidenceImage baseline;
  double ghost_rms_vs_ideal = 0;     // vs the respective aberration-free image
  double baseline_rms_vs_ideal = 0;
  double ghost_kernel_fwhm = 0;
  double baseline_kernel_fwhm = 0;
};

// Side-by-side run of the coincidence imager and the incoherent single-lens
// system on the same scene, with aberration-free references from the same
// engines.
inline ComparisonRecord compare_ghost_vs_baseline(const OpticalLayout& layout,
                                                  const ObjectMask& object,
                                                  const PumpModel& illumination,
                                                  const PhaseMap& phi) {
  ComparisonRecord rec{ghost_fast(layout, object, phi),
                       incoherent_image(layout, object, illumination, phi),
                       0, 0, 0, 0};
  const PhaseMap zero = make_phase_map(phi.grid);
  const CoincidenceImage ghost_ideal = ghost_fast(layout, object, zero);
  const CoincidenceImage base_ideal = incoherent_image(layout, object, illumination, zero);
  rec.ghost_rms_vs_ideal = image_metrics(rec.ghost, ghost_ideal).rms_error;
  rec.baseline_rms_vs_ideal = image_metrics(rec.baseline, base_ideal).rms_error;

  const GridGeometry& grid = phi.grid;
  auto kernel_image = [&](std::vector<double> kern) {
    CoincidenceImage img{grid, std::move(kern), false, Provenance::fast_path, {}};
    peak_normalize(img.rate);
    img.peak_normalized = true;
    return img;
  };
  const CoincidenceImage gk = kernel_image(ghost_kernel(layout, phi));
  const CoincidenceImage bk = kernel_image(coherent_kernel(layout, phi));
  rec.ghost_kernel_fwhm = image_metrics(gk, gk).kernel_fwhm;
  rec.baseline_kernel_fwhm = image_metrics(bk, bk).kernel_fwhm;
  return rec;
}

}  // namespace ghostsim
