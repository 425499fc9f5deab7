#pragma once

namespace treedist {

// Worker count for OpenMP kernels: omp_get_max_threads(), capped by the
// TREEDIST_THREADS environment variable when it holds a positive integer.
int worker_count();

}  // namespace treedist
