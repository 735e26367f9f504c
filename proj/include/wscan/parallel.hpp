#ifndef WSCAN_PARALLEL_HPP
#define WSCAN_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace wscan {

/// 0 means auto: WSCAN_THREADS if set, else the hardware concurrency.
inline std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WSCAN_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Splits [0, n) into contiguous chunks and calls body(chunk, begin, end) on up
/// to `threads` workers. Chunk boundaries depend only on n and chunk_size, so
/// per-chunk outputs merged in chunk order are independent of the thread count.
/// The first exception thrown by a worker is rethrown on the calling thread.
template <typename Body>
void parallel_chunks(std::size_t n, std::size_t chunk_size, std::size_t threads, Body&& body) {
  if (n == 0) return;
  chunk_size = std::max<std::size_t>(1, chunk_size);
  const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
  const std::size_t workers = std::min(resolve_threads(threads), n_chunks);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    body(c, begin, std::min(n, begin + chunk_size));
  };
  if (workers == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }

  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      std::size_t c;
      {
        std::lock_guard lock(mu);
        if (error || next == n_chunks) return;
        c = next++;
      }
      try {
        run_chunk(c);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace wscan

#endif  // WSCAN_PARALLEL_HPP
