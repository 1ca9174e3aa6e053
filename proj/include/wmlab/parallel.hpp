#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wmlab {

struct ExecPolicy {
  int threads = 1;
};

inline int default_thread_count() {
  const unsigned h = std::thread::hardware_concurrency();
  return h ? static_cast<int>(h) : 1;
}

// Splits [0, n) into chunks whose boundaries depend only on n, runs
// body(chunk_index, begin, end) on up to `threads` workers and returns once
// all chunks finished. Callers store per-chunk results and reduce them in
// chunk order, which keeps every reduction independent of the thread count.
inline std::size_t chunk_count(std::size_t n) { return n == 0 ? 0 : std::min<std::size_t>(n, 512); }

template <class Body>
void parallel_chunks(std::size_t n, ExecPolicy policy, Body&& body) {
  const std::size_t chunks = chunk_count(n);
  if (chunks == 0) return;
  auto bounds = [&](std::size_t c) { return std::make_pair(n * c / chunks, n * (c + 1) / chunks); };
  const int workers = std::max(1, std::min<int>(policy.threads, static_cast<int>(chunks)));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      body(c, b, e);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c; (c = next.fetch_add(1)) < chunks;) {
        try {
          auto [b, e] = bounds(c);
          body(c, b, e);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Per-index map; out[i] = f(i).
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, ExecPolicy policy, F&& f) {
  std::vector<T> out(n);
  parallel_chunks(n, policy, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = f(i);
  });
  return out;
}

}  // namespace wmlab
