#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmwu {

namespace detail {
inline std::atomic<int> g_workers{0};
inline std::atomic<bool> g_deterministic{false};
}  // namespace detail

/// Number of workers used by the data-parallel kernels. Zero means the
/// OpenMP runtime default.
inline void set_num_workers(int workers) { detail::g_workers.store(std::max(workers, 0)); }

inline int num_workers() {
  const int w = detail::g_workers.load();
  if (w > 0) return w;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// In deterministic mode every reduction uses a fixed block decomposition
/// combined in a fixed order, so results are bit-identical for any worker
/// count. Per-element kernels (SpMV, implicit applies) are always
/// deterministic since each output element has a single owner.
inline void set_deterministic(bool on) { detail::g_deterministic.store(on); }
inline bool deterministic() { return detail::g_deterministic.load(); }

/// Restores the worker count and reduction mode on scope exit.
class ExecutionScope {
 public:
  ExecutionScope(int workers, bool deterministic_mode)
      : saved_workers_(detail::g_workers.load()), saved_det_(detail::g_deterministic.load()) {
    if (workers > 0) set_num_workers(workers);
    set_deterministic(deterministic_mode);
  }
  ~ExecutionScope() {
    detail::g_workers.store(saved_workers_);
    detail::g_deterministic.store(saved_det_);
  }
  ExecutionScope(const ExecutionScope&) = delete;
  ExecutionScope& operator=(const ExecutionScope&) = delete;

 private:
  int saved_workers_;
  bool saved_det_;
};

inline constexpr std::size_t kParallelGrain = 4096;
inline constexpr std::size_t kReduceBlock = 4096;

template <class F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
  if (n >= kParallelGrain && num_workers() > 1) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) num_threads(num_workers())
    for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

/// Like parallel_for, but for a small number of coarse work items.
template <class F>
void parallel_for_coarse(std::size_t n, F&& body) {
#ifdef _OPENMP
  if (n > 1 && num_workers() > 1) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(num_workers())
    for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

/// Sum of term(i) for i in [0, n).
template <class F>
double parallel_sum(std::size_t n, F&& term) {
  if (n == 0) return 0.0;
  if (deterministic()) {
    const std::size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(blocks, 0.0);
    parallel_for_coarse(blocks, [&](std::size_t b) {
      const std::size_t lo = b * kReduceBlock;
      const std::size_t hi = std::min(n, lo + kReduceBlock);
      double acc = 0.0;
      for (std::size_t i = lo; i < hi; ++i) acc += term(i);
      partial[b] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
  }
  double total = 0.0;
#ifdef _OPENMP
  if (n >= kParallelGrain && num_workers() > 1) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) reduction(+ : total) num_threads(num_workers())
    for (std::ptrdiff_t i = 0; i < count; ++i) total += term(static_cast<std::size_t>(i));
    return total;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) total += term(i);
  return total;
}

/// Max of term(i); -inf for n == 0. Order independent, hence always exact.
template <class F>
double parallel_max(std::size_t n, F&& term) {
  double best = -std::numeric_limits<double>::infinity();
#ifdef _OPENMP
  if (n >= kParallelGrain && num_workers() > 1) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) reduction(max : best) num_threads(num_workers())
    for (std::ptrdiff_t i = 0; i < count; ++i) best = std::max(best, term(static_cast<std::size_t>(i)));
    return best;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, term(i));
  return best;
}

template <class F>
double parallel_min(std::size_t n, F&& term) {
  return -parallel_max(n, [&](std::size_t i) { return -term(i); });
}

}  // namespace pmwu
