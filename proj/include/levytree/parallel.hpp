#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "levytree/rng.hpp"

namespace levytree {

/// Master seed and worker count shared by every Monte Carlo experiment.
struct RunContext {
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Splits [0, n_items) into fixed chunks, runs `body(begin, end, rng)` on each
/// chunk with the stream make_stream(seed, chunk index), and returns the chunk
/// results in chunk order. The output depends only on (seed, n_items,
/// chunk_size), not on the worker count.
template <class Result, class Body>
std::vector<Result> run_chunked(std::int64_t n_items, std::int64_t chunk_size, std::uint64_t seed,
                                unsigned workers, Body&& body) {
  chunk_size = std::max<std::int64_t>(chunk_size, 1);
  const std::int64_t n_chunks = (n_items + chunk_size - 1) / chunk_size;
  std::vector<Result> results(static_cast<std::size_t>(std::max<std::int64_t>(n_chunks, 0)));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        auto rng = make_stream(seed, static_cast<std::uint64_t>(c));
        const std::int64_t begin = c * chunk_size;
        const std::int64_t end = std::min(n_items, begin + chunk_size);
        results[static_cast<std::size_t>(c)] = body(begin, end, rng);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_chunks);
      }
    }
  };

  workers = std::max(1u, workers);
  if (workers == 1 || n_chunks <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < std::min<std::int64_t>(workers, n_chunks); ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// Worker count used when a caller passes 0.
inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace levytree
