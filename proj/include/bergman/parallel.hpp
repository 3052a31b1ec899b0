#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bergman {

inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n ? n : 1;
}

// results are stored by index, so the output order never depends on scheduling
template <class F>
auto parallel_map(std::size_t n, F&& f) {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(n);
  unsigned nw = std::min<std::size_t>(worker_count(), n);
  if (nw <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex m;
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(m);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < nw; ++k) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace bergman
