#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ghostsim {

// Thin-lens imaging geometry: source plane at z1 before the lens, detection
// plane at z2 after it, with 1/z1 + 1/z2 = 1/f.
struct OpticalLayout {
  double wavelength = 0;  // meters
  double z1 = 0;          // source-to-lens distance
  double z2 = 0;          // lens-to-detector distance
  double f = 0;           // focal length

  double wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }
};

// f is derived from the imaging condition, so the invariant holds by construction.
inline OpticalLayout make_layout(double wavelength, double z1, double z2) {
  if (!(wavelength > 0) || !(z1 > 0) || !(z2 > 0))
    throw std::invalid_argument("layout: wavelength, z1, z2 must all be positive");
  return OpticalLayout{wavelength, z1, z2, z1 * z2 / (z1 + z2)};
}

// Explicit focal length; rejected unless it satisfies the imaging condition
// to 1e-9 relative.
inline OpticalLayout make_layout(double wavelength, double z1, double z2, double f) {
  OpticalLayout layout = make_layout(wavelength, z1, z2);
  if (!(f > 0)) throw std::invalid_argument("layout: focal length must be positive");
  if (std::abs(1.0 / z1 + 1.0 / z2 - 1.0 / f) > 1e-9 / f)
    throw std::invalid_argument(
        "layout: z1, z2, f violate the imaging condition 1/z1 + 1/z2 = 1/f");
  layout.f = f;
  return layout;
}

}  // namespace ghostsim
