#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "ghostsim/parallel.hpp"

namespace ghostsim {

// Per-shot detector current decomposed into mean and zero-mean fluctuation
// parts for the signal and dark components: I = signal_mean + dark_mean +
// signal_fluct + dark_fluct.
struct CurrentTrace {
  std::size_t n_samples = 0;
  double signal_mean = 0;
  double dark_mean = 0;
  std::vector<double> signal_fluct;
  std::vector<double> dark_fluct;
  std::uint64_t rng_seed = 0;

  double current(std::size_t i) const {
    return signal_mean + dark_mean + signal_fluct[i] + dark_fluct[i];
  }
};

struct TraceMeans {
  double signal_mean_1 = 1.0;
  double dark_mean_1 = 0.5;
  double signal_mean_2 = 1.0;
  double dark_mean_2 = 0.5;
};

struct TracePair {
  CurrentTrace first;
  CurrentTrace second;
};

namespace noise_detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace noise_detail

// Correlated gaussian current traces for two detectors. Signal fluctuations
// share a common gaussian component with cross-correlation rho * signal_std^2;
// dark fluctuations are independent of everything. Each component draws from
// its own deterministic stream, so zeroing a dark std never shifts the signal
// draws for the same seed.
inline TracePair generate_traces(std::size_t n, double signal_correlation, double signal_std,
                                 double dark_std_1, double dark_std_2, const TraceMeans& means,
                                 std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_traces requires n >= 2");
  if (!(std::abs(signal_correlation) <= 1.0))
    throw std::invalid_argument("signal correlation must satisfy |rho| <= 1");
  if (signal_std < 0 || dark_std_1 < 0 || dark_std_2 < 0)
    throw std::invalid_argument("standard deviations must be non-negative");

  using noise_detail::splitmix64;
  std::mt19937_64 rng_signal(splitmix64(seed ^ 0x5349474eULL));
  std::mt19937_64 rng_dark1(splitmix64(seed ^ 0x44524b31ULL));
  std::mt19937_64 rng_dark2(splitmix64(seed ^ 0x44524b32ULL));
  std::normal_distribution<double> gauss(0.0, 1.0);

  TracePair pair;
  pair.first = CurrentTrace{n, means.signal_mean_1, means.dark_mean_1,
                            std::vector<double>(n), std::vector<double>(n), seed};
  pair.second = CurrentTrace{n, means.signal_mean_2, means.dark_mean_2,
                             std::vector<double>(n), std::vector<double>(n), seed};
  const double rho = signal_correlation;
  const double ortho = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    const double g1 = gauss(rng_signal);
    const double g2 = gauss(rng_signal);
    pair.first.signal_fluct[i] = signal_std * g1;
    pair.second.signal_fluct[i] = signal_std * (rho * g1 + ortho * g2);
    pair.first.dark_fluct[i] = dark_std_1 * gauss(rng_dark1);
    pair.second.dark_fluct[i] = dark_std_2 * gauss(rng_dark2);
  }
  return pair;
}

struct CorrelationEstimate {
  double g2 = 0;
  double std_err = 0;
  std::size_t n_samples = 0;
};

// Covariance of the two reconstructed currents, <I1 I2> - <I1><I2>, with a
// leave-one-out jackknife standard error. Inputs are pre-centered by their
// sample means so the estimate is shift-stable.
inline CorrelationEstimate estimate_g2(const CurrentTrace& t1, const CurrentTrace& t2) {
  if (t1.n_samples != t2.n_samples)
    throw std::invalid_argument("estimate_g2: trace lengths differ");
  const std::size_t n = t1.n_samples;
  if (n < 2) throw std::invalid_argument("estimate_g2 requires n >= 2");
  const double dn = double(n);

  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m1 += t1.current(i);
    m2 += t2.current(i);
  }
  m1 /= dn;
  m2 /= dn;

  std::vector<double> a(n), b(n);
  double s1 = 0, s2 = 0, s12 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = t1.current(i) - m1;
    b[i] = t2.current(i) - m2;
    s1 += a[i];
    s2 += b[i];
    s12 += a[i] * b[i];
  }
  const double g2 = s12 / dn - (s1 / dn) * (s2 / dn);

  // leave-one-out values from the precomputed sums, O(n)
  const double dm = dn - 1.0;
  double jk_mean = 0;
  std::vector<double> jk(n);
  for (std::size_t i = 0; i < n; ++i) {
    jk[i] = (s12 - a[i] * b[i]) / dm - (s1 - a[i]) * (s2 - b[i]) / (dm * dm);
    jk_mean += jk[i];
  }
  jk_mean /= dn;
  double var = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = jk[i] - jk_mean;
    var += diff * diff;
  }
  return CorrelationEstimate{g2, std::sqrt(var * dm / dn), n};
}

struct CancellationConfig {
  std::vector<std::size_t> n_ladder = {1000, 10000, 100000, 1000000};
  int replicates = 20;
  double signal_correlation = 0.8;
  double signal_std = 1.0;
  double dark_std_1 = 5.0;
  double dark_std_2 = 5.0;
  TraceMeans means;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct CancellationRung {
  std::size_t n = 0;
  double g2_with_dark = 0;   // replicate mean
  double g2_without = 0;     // replicate mean
  double delta = 0;          // replicate mean of |g2_with - g2_without|
  double std_err = 0;        // replicate mean jackknife error of g2_with
};

struct CancellationReport {
  CancellationConfig config;
  std::vector<CancellationRung> rungs;
  std::vector<double> delta_ratios;  // rung-to-rung shrinkage of mean |delta|
};

// Paired with/without-dark experiments across the n ladder. Replicate r uses
// seed + r (documented derivation rule); replicates are independent jobs and
// may run concurrently, accumulated in replicate order.
inline CancellationReport cancellation_report(const CancellationConfig& cfg) {
  if (cfg.replicates < 1) throw std::invalid_argument("cancellation_report: replicates >= 1");
  CancellationReport report;
  report.config = cfg;
  for (std::size_t n : cfg.n_ladder) {
    const std::size_t reps = std::size_t(cfg.replicates);
    std::vector<double> gw(reps), go(reps), se(reps);
    parallel_chunks(reps, cfg.threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) {
        const std::uint64_t seed = cfg.seed + r;
        const TracePair with_dark =
            generate_traces(n, cfg.signal_correlation, cfg.signal_std, cfg.dark_std_1,
                            cfg.dark_std_2, cfg.means, seed);
        const TracePair no_dark = generate_traces(n, cfg.signal_correlation, cfg.signal_std,
                                                  0.0, 0.0, cfg.means, seed);
        const CorrelationEstimate ew = estimate_g2(with_dark.first, with_dark.second);
        const CorrelationEstimate eo = estimate_g2(no_dark.first, no_dark.second);
        gw[r] = ew.g2;
        go[r] = eo.g2;
        se[r] = ew.std_err;
      }
    });
    CancellationRung rung;
    rung.n = n;
    for (std::size_t r = 0; r < reps; ++r) {
      rung.g2_with_dark += gw[r];
      rung.g2_without += go[r];
      rung.delta += std::abs(gw[r] - go[r]);
      rung.std_err += se[r];
    }
    rung.g2_with_dark /= double(reps);
    rung.g2_without /= double(reps);
    rung.delta /= double(reps);
    rung.std_err /= double(reps);
    report.rungs.push_back(rung);
  }
  for (std::size_t i = 1; i < report.rungs.size(); ++i) {
    const double prev = report.rungs[i - 1].delta;
    report.delta_ratios.push_back(prev > 0 ? report.rungs[i].delta / prev : 0.0);
  }
  return report;
}

}  // namespace ghostsim
