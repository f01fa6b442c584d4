#pragma once
// Thread control for the OpenMP kernels. Every parallel loop in the
// library writes results into preassigned slots and reduces in index
// order, so output is bit-identical for any thread count, including the
// serial fallback built without OpenMP.

#include <cstddef>

namespace ties::parallel {

// Process-wide cap on worker threads. 0 means "hardware default".
void set_max_threads(int n);
int max_threads();

// True when the library was built with OpenMP and more than one thread
// is allowed.
bool enabled();

// Runs fn(i) for i in [0, n). Iterations must be independent; each writes
// only its own slot.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn);

namespace detail {
int resolved_threads();
}

}  // namespace ties::parallel

#ifdef _OPENMP
#include <omp.h>

namespace ties::parallel {

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const int threads = detail::resolved_threads();
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    fn(static_cast<std::size_t>(i));
  }
}

}  // namespace ties::parallel

#else

namespace ties::parallel {

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace ties::parallel

#endif
