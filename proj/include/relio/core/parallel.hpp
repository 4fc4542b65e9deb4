#pragma once

#include <cstddef>
#include <cstdint>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace relio {

/// Runtime switch for the OpenMP kernels. Every parallel kernel writes each
/// result to its own slot and reduces serially in index order, so results are
/// identical for any thread count; this switch only exists for benchmarking
/// the serial references against the parallel paths.
struct Parallelism {
  static bool& enabledFlag() {
    static bool enabled = true;
    return enabled;
  }
  static void setEnabled(bool on) { enabledFlag() = on; }
  static bool enabled() {
#if defined(_OPENMP)
    return enabledFlag();
#else
    return false;
#endif
  }
  static int maxThreads() {
#if defined(_OPENMP)
    return enabled() ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
  }
};

template <typename Fn>
inline void parallelFor(std::size_t n, const Fn& fn) {
#if defined(_OPENMP)
  if (Parallelism::enabled()) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      fn(static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) {
    fn(i);
  }
}

}  // namespace relio
