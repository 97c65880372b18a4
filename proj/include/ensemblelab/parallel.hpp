#pragma once

// Deterministic replica-parallel map: results land in a vector indexed by
// replica, so reductions in replica order are bitwise identical for any
// thread count.

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ensemblelab {

inline int default_thread_count() {
  if (const char* env = std::getenv("ENSEMBLE_LAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// fn(replica) -> T; replicas are dealt out in strided fashion.
template <typename T, typename Fn>
std::vector<T> parallel_map(int reps, int threads, Fn&& fn) {
  std::vector<T> out(reps);
  if (threads <= 1 || reps <= 1) {
    for (int r = 0; r < reps; ++r) out[r] = fn(r);
    return out;
  }
  threads = std::min(threads, reps);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int r = t; r < reps; r += threads) out[r] = fn(r);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace ensemblelab
