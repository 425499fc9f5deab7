#include "treedist/parallel.hpp"

#include <omp.h>

#include <cstdlib>

namespace treedist {

int worker_count() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("TREEDIST_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0 && cap < n) n = static_cast<int>(cap);
  }
  return n;
}

}  // namespace treedist
