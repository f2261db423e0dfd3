#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ghostsim {

using cdouble = std::complex<double>;

namespace fft_detail {

constexpr long double kTwoPi = 6.28318530717958647692528676655900577L;

// Unit phasor with long-double argument reduction. Chirp arguments grow like
// N * dtheta, so reducing in extended precision keeps phase errors ~1e-15
// even for large lattices.
inline cdouble unit_phasor(long double angle) {
  long double a = std::fmod(angle, kTwoPi);
  return cdouble(double(std::cos(a)), double(std::sin(a)));
}

inline bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

// Iterative radix-2 Cooley-Tukey, power-of-two length only.
// Forward:  X[k] = sum_n x[n] e^{-2 pi i k n / N}
// Inverse:  x[n] = (1/N) sum_k X[k] e^{+2 pi i k n / N}
inline void fft_pow2_inplace(std::vector<cdouble>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft_pow2_inplace: length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const long double ang = (inverse ? kTwoPi : -kTwoPi) / (long double)len;
    const cdouble wlen = unit_phasor(ang);
    for (std::size_t i = 0; i < n; i += len) {
      cdouble w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        cdouble u = a[i + j];
        cdouble v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / double(n);
    for (auto& v : a) v *= inv;
  }
}

}  // namespace fft_detail

// Sampled transform on an arbitrary uniform frequency lattice:
//   X[m] = sum_{i=0}^{N-1} x[i] * exp(-i (theta0 + m dtheta) (i - i0)),
//   m = 0..count-1.
// Evaluated exactly (to rounding) via the Bluestein chirp factorization, so no
// frequency-grid interpolation is ever involved.
inline std::vector<cdouble> lattice_dtft(const std::vector<cdouble>& x, std::size_t count,
                                         long double theta0, long double dtheta, long i0) {
  using namespace fft_detail;
  const std::size_t n = x.size();
  if (n == 0 || count == 0) return {};
  // y[i] = x[i] e^{-i theta0 (i - i0)}; then
  // X[m] = e^{+i dtheta m i0} sum_i y[i] e^{-i dtheta m i}
  //      = e^{+i dtheta m i0} e^{-i dtheta m^2/2} sum_i (y[i] e^{-i dtheta i^2/2}) e^{+i dtheta (m-i)^2/2}
  const std::size_t p = next_pow2(n + count - 1);
  std::vector<cdouble> a(p, cdouble(0, 0)), b(p, cdouble(0, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const long double li = (long double)(long long)i;
    const cdouble y = x[i] * unit_phasor(-theta0 * (li - (long double)i0));
    a[i] = y * unit_phasor(-dtheta * li * li / 2.0L);
  }
  for (long long l = -(long long)(n - 1); l < (long long)count; ++l) {
    const long double ll = (long double)l;
    const cdouble v = unit_phasor(dtheta * ll * ll / 2.0L);
    b[std::size_t((l + (long long)p) % (long long)p)] = v;
  }
  fft_pow2_inplace(a, false);
  fft_pow2_inplace(b, false);
  for (std::size_t i = 0; i < p; ++i) a[i] *= b[i];
  fft_pow2_inplace(a, true);
  std::vector<cdouble> out(count);
  for (std::size_t m = 0; m < count; ++m) {
    const long double lm = (long double)(long long)m;
    out[m] = a[m] * unit_phasor(dtheta * lm * (long double)i0 - dtheta * lm * lm / 2.0L);
  }
  return out;
}

// DFT of any length (radix-2 when possible, Bluestein otherwise).
inline std::vector<cdouble> dft(std::vector<cdouble> x, bool inverse = false) {
  using namespace fft_detail;
  const std::size_t n = x.size();
  if (is_pow2(n)) {
    fft_pow2_inplace(x, inverse);
    return x;
  }
  std::vector<cdouble> out;
  if (!inverse) {
    out = lattice_dtft(x, n, 0.0L, kTwoPi / (long double)n, 0);
  } else {
    for (auto& v : x) v = std::conj(v);
    out = lattice_dtft(x, n, 0.0L, kTwoPi / (long double)n, 0);
    const double inv = 1.0 / double(n);
    for (auto& v : out) v = std::conj(v) * inv;
  }
  return out;
}

// In-place 2D DFT of an n-by-n row-major array (rows, then columns).
inline void dft2_inplace(std::vector<cdouble>& a, int n, bool inverse) {
  if (a.size() != std::size_t(n) * std::size_t(n))
    throw std::invalid_argument("dft2_inplace: size mismatch");
  std::vector<cdouble> line(std::size_t(n), cdouble(0, 0));
  for (int r = 0; r < n; ++r) {
    line.assign(a.begin() + std::size_t(r) * n, a.begin() + std::size_t(r + 1) * n);
    line = dft(std::move(line), inverse);
    std::copy(line.begin(), line.end(), a.begin() + std::size_t(r) * n);
  }
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) line[std::size_t(r)] = a[std::size_t(r) * n + c];
    line = dft(std::move(line), inverse);
    for (int r = 0; r < n; ++r) a[std::size_t(r) * n + c] = line[std::size_t(r)];
  }
}

}  // namespace ghostsim
