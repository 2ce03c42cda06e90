#include "orbitcarve/common/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>

namespace orbitcarve {
namespace {
constexpr std::size_t kSumBlock = 4096;
}

void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  if (grain == 0) grain = 1;
  const std::size_t chunks = (n + grain - 1) / grain;
  if (chunks == 1) {
    body(0, n);
    return;
  }
  tbb::parallel_for(tbb::blocked_range<std::size_t>(0, chunks, 1),
                    [&](const tbb::blocked_range<std::size_t>& r) {
                      for (std::size_t c = r.begin(); c != r.end(); ++c) {
                        const std::size_t begin = c * grain;
                        body(begin, std::min(n, begin + grain));
                      }
                    });
}

void parallel_for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  parallel_for(n, 1, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) body(i);
  });
}

double deterministic_dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t blocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_for(blocks, 8, [&](std::size_t bb, std::size_t be) {
    for (std::size_t blk = bb; blk < be; ++blk) {
      const std::size_t begin = blk * kSumBlock;
      const std::size_t end = std::min(n, begin + kSumBlock);
      double s = 0.0;
      for (std::size_t i = begin; i < end; ++i) s += a[i] * b[i];
      partial[blk] = s;
    }
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double deterministic_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t blocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_for(blocks, 8, [&](std::size_t bb, std::size_t be) {
    for (std::size_t blk = bb; blk < be; ++blk) {
      const std::size_t begin = blk * kSumBlock;
      const std::size_t end = std::min(n, begin + kSumBlock);
      double s = 0.0;
      for (std::size_t i = begin; i < end; ++i) s += values[i];
      partial[blk] = s;
    }
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

int default_thread_count() {
  if (const char* env = std::getenv("ORBITCARVE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct ThreadLimit::Impl {
  tbb::global_control control;
  explicit Impl(int n) : control(tbb::global_control::max_allowed_parallelism, n) {}
};

ThreadLimit::ThreadLimit(int threads)
    : threads_(threads > 0 ? threads : default_thread_count()) {
  impl_ = std::make_unique<Impl>(threads_);
}

ThreadLimit::~ThreadLimit() = default;

}  // namespace orbitcarve
