#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace topologic {

// Serial runs are the reference implementation; parallel runs must produce
// identical results.
enum class Execution { serial, parallel };

// About 32 chunks per thread: cheap predicates amortize scheduling, costly
// ones still balance.
inline int chunk_size(std::size_t n) {
  const std::size_t per = n / (32 * static_cast<std::size_t>(omp_get_max_threads()));
  return static_cast<int>(per < 1 ? 1 : (per > 4096 ? 4096 : per));
}

// Least index i in [0, n) with pred(i), or n when there is none. The parallel
// version returns the same index regardless of scheduling: workers skip
// indices above the best hit found so far and the minimum is kept atomically.
template <class Pred>
std::size_t first_index_where(std::size_t n, Pred&& pred, Execution exec = Execution::serial) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i)
      if (pred(i)) return i;
    return n;
  }
  std::atomic<std::size_t> best{n};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
  const int chunk = chunk_size(n);
#pragma omp parallel for schedule(dynamic, chunk)
  for (long long k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (i >= best.load(std::memory_order_relaxed)) continue;
    try {
      if (pred(i)) {
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      best.store(0);
    }
  }
  if (error) std::rethrow_exception(error);
  return best.load();
}

// Applies body(i) for every i in [0, n).
template <class Body>
void for_each_index(std::size_t n, Body&& body, Execution exec = Execution::serial) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
  const int chunk = chunk_size(n);
#pragma omp parallel for schedule(dynamic, chunk)
  for (long long k = 0; k < count; ++k) {
    try {
      body(static_cast<std::size_t>(k));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace topologic
