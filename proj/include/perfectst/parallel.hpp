#pragma once

// Deterministic work splitting. Work is cut into fixed-size chunks whose
// results the caller stores by chunk index and reduces in order, so the
// answer never depends on how many threads ran.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace perfectst {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
}

/// Calls body(chunk, begin, end) for every chunk of [0, count).
template <class Body>
void parallel_chunks(std::uint64_t count, std::uint64_t chunk_size, int threads, Body&& body) {
  if (count == 0) return;
  const std::uint64_t chunks = (count + chunk_size - 1) / chunk_size;
  const int workers = static_cast<int>(
      std::min<std::uint64_t>(chunks, static_cast<std::uint64_t>(resolve_threads(threads))));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    try {
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        const std::uint64_t begin = c * chunk_size;
        body(c, begin, std::min(count, begin + chunk_size));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for (master, a, b); used per trial so results do not
/// depend on scheduling.
inline std::mt19937_64 stream_for(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return std::mt19937_64(splitmix64(splitmix64(splitmix64(master) ^ a) ^ b));
}

}  // namespace perfectst
