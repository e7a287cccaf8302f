#pragma once

#include <algorithm>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ensemble_lab {

/// Worker count: ENSEMBLE_LAB_THREADS if set (>= 1), else the OpenMP default.
int worker_count();

/// Caps the worker count for the rest of the process.
void set_worker_count(int n);

/// Calls fun(block) for block in [0, nblocks). Blocks are independent; the
/// caller must make per-block results independent of execution order.
template <class Function>
void parallel_blocks(std::size_t nblocks, Function fun) {
#ifdef _OPENMP
  const int nthreads = worker_count();
  if (nthreads > 1 && nblocks > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
      fun(static_cast<std::size_t>(b));
    }
    return;
  }
#endif
  for (std::size_t b = 0; b < nblocks; ++b) fun(b);
}

}  // namespace ensemble_lab
