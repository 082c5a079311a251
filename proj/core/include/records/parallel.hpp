#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace records {

/// Replications are cut into chunks of this size no matter how many workers
/// run, so per-chunk partial results (and their merge order) never depend on
/// the thread count.
inline constexpr std::size_t kChunkSize = 512;

/// Runs fn(begin, end) over fixed-size chunks of [0, count) on `threads`
/// workers and returns the per-chunk results in chunk order.
template <class R, class Fn>
std::vector<R> map_chunks(std::size_t count, unsigned threads, Fn&& fn,
                          std::size_t chunk = kChunkSize) {
  const std::size_t n_chunks = count == 0 ? 0 : (count + chunk - 1) / chunk;
  std::vector<R> out(n_chunks);
  const auto run = [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    out[c] = fn(begin, std::min(count, begin + chunk));
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_chunks)));
  if (threads <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run(c);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < n_chunks; c = next++) {
        try {
          run(c);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n_chunks;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

/// Worker count used when a caller passes 0.
inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace records
