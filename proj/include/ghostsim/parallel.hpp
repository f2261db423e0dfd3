#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ghostsim {

// Runs fn(begin, end) over fixed half-open chunks of [0, count). The chunk
// boundaries depend only on `count`, never on the worker count, so any code
// that writes disjoint per-index slots (or reduces per chunk in index order)
// produces bit-identical results for every `threads` value.
inline void parallel_chunks(std::size_t count, int threads,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  const std::size_t chunk = std::max<std::size_t>(1, (count + 63) / 64);
  const std::size_t nchunks = (count + chunk - 1) / chunk;
  const int workers = std::max(1, std::min<int>(threads, int(nchunks)));
  if (workers == 1) {
    for (std::size_t c = 0; c < nchunks; ++c)
      fn(c * chunk, std::min(count, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto body = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= nchunks || failed.load()) return;
      try {
        fn(c * chunk, std::min(count, (c + 1) * chunk));
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace ghostsim
