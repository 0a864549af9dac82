#ifndef KPLANE_NUMERIC_HPP
#define KPLANE_NUMERIC_HPP

#include <atomic>
#include <cstdlib>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

namespace kplane {

// Compensated accumulator. All quadrature reductions go through this so that
// results do not depend on how the work was split across threads.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline int thread_count() {
  if (const char* env = std::getenv("KPLANE_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

// Fixed block partition: the split is a function of n only, never of the
// thread count, so per-block partial sums (and hence the final compensated
// total) are bitwise reproducible for any KPLANE_THREADS setting.
inline constexpr std::size_t kReductionBlocks = 64;

template <class BlockFn>
void run_blocks(std::size_t n_blocks, BlockFn&& fn) {
  int workers = thread_count();
  if (workers <= 1 || n_blocks <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      fn(b);
    }
  };
  std::vector<std::thread> pool;
  int spawn = static_cast<int>(std::min<std::size_t>(workers, n_blocks)) - 1;
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Sum f(i) for i in [0, n) in parallel with a deterministic reduction order.
template <class F>
double parallel_sum(std::size_t n, F&& f) {
  if (n == 0) return 0.0;
  std::size_t blocks = std::min(detail::kReductionBlocks, n);
  std::vector<double> partial(blocks, 0.0);
  detail::run_blocks(blocks, [&](std::size_t b) {
    std::size_t lo = n * b / blocks;
    std::size_t hi = n * (b + 1) / blocks;
    KahanSum acc;
    for (std::size_t i = lo; i < hi; ++i) acc.add(f(i));
    partial[b] = acc.value();
  });
  KahanSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

// Run f(i) for i in [0, n); iterations must be independent.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  if (n == 0) return;
  std::size_t blocks = std::min<std::size_t>(detail::kReductionBlocks * 4, n);
  detail::run_blocks(blocks, [&](std::size_t b) {
    std::size_t lo = n * b / blocks;
    std::size_t hi = n * (b + 1) / blocks;
    for (std::size_t i = lo; i < hi; ++i) f(i);
  });
}

}  // namespace kplane

#endif
