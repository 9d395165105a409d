#pragma once

#include "csflock/output.hpp"

namespace csflock {

struct BenchOptions {
  int repetitions = 5;
  bool parallel_riemann = false;
  double k = 4.0;
  double lambda = 1.0;
  double L = 6.283185307179586;
  unsigned seed = 7;
};

/// Median wall time of solve_aux against riemann_oracle on the same random
/// smooth field of n cells. A warm-up call of each is discarded; fast calls are
/// batched until a sample spans at least a millisecond.
BenchRow bench_nonlocal(int n, const BenchOptions& options = {});

/// Least-squares slope of log(time) against log(n).
double loglog_slope(const std::vector<double>& n, const std::vector<double>& nanos);

}  // namespace csflock
