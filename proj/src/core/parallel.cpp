#include "ensemble_lab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace ensemble_lab {

namespace {

std::atomic<int> g_override{0};

int from_environment() {
  const char* env = std::getenv("ENSEMBLE_LAB_THREADS");
  if (env == nullptr) return 0;
  try {
    const int n = std::stoi(env);
    return n >= 1 ? n : 0;
  } catch (...) {
    return 0;
  }
}

}  // namespace

int worker_count() {
  if (const int n = g_override.load(); n > 0) return n;
  static const int env = from_environment();
  int base = 1;
#ifdef _OPENMP
  base = omp_get_max_threads();
#endif
  return env > 0 ? env : base;
}

void set_worker_count(int n) { g_override.store(n > 0 ? n : 0); }

}  // namespace ensemble_lab
