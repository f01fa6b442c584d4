#include "ties/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ties::parallel {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() { return g_max_threads.load(); }

int detail::resolved_threads() {
#ifdef _OPENMP
  int cap = g_max_threads.load();
  if (cap == 0) return omp_get_max_threads();
  return cap;
#else
  return 1;
#endif
}

bool enabled() {
#ifdef _OPENMP
  return detail::resolved_threads() > 1;
#else
  return false;
#endif
}

}  // namespace ties::parallel
