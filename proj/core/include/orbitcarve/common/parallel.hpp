#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>

namespace orbitcarve {

// Calls body(begin, end) over disjoint chunks covering [0, n). Chunk boundaries
// depend only on n and grain, never on the thread count, so callers that write
// per-chunk partials and combine them in chunk order are deterministic.
void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

// One task per index.
void parallel_for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

// Sum with a fixed blocking, independent of thread count.
double deterministic_sum(std::span<const double> values);
double deterministic_dot(std::span<const double> a, std::span<const double> b);

// ORBITCARVE_THREADS when set and positive, else hardware concurrency.
int default_thread_count();

// Caps the worker count for the lifetime of the object. threads <= 0 means default.
class ThreadLimit {
 public:
  explicit ThreadLimit(int threads);
  ~ThreadLimit();
  ThreadLimit(const ThreadLimit&) = delete;
  ThreadLimit& operator=(const ThreadLimit&) = delete;

  int threads() const { return threads_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int threads_;
};

}  // namespace orbitcarve
