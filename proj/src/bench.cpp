#include "csflock/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "csflock/elliptic.hpp"

namespace csflock {
namespace {

template <typename Fn>
double median_nanos(int repetitions, Fn&& fn) {
  using clock = std::chrono::steady_clock;
  fn();  // warm-up
  // Batch calls so one sample lasts long enough for the clock to resolve it.
  int batch = 1;
  for (;;) {
    const auto start = clock::now();
    for (int b = 0; b < batch; ++b) fn();
    const auto elapsed = std::chrono::duration<double, std::nano>(clock::now() - start).count();
    if (elapsed >= 1e6 || batch >= (1 << 20)) break;
    batch *= 2;
  }
  std::vector<double> samples;
  for (int r = 0; r < std::max(1, repetitions); ++r) {
    const auto start = clock::now();
    for (int b = 0; b < batch; ++b) fn();
    samples.push_back(
        std::chrono::duration<double, std::nano>(clock::now() - start).count() / batch);
  }
  std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
  return samples[samples.size() / 2];
}

}  // namespace

BenchRow bench_nonlocal(int n, const BenchOptions& options) {
  const Grid1D grid(options.L, n);
  const KernelSpec kernel = KernelSpec::bounded_1d(options.k, options.lambda, options.L);

  // Smooth random field: a few low Fourier modes vanishing at the boundary.
  std::mt19937 rng(options.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double a[4];
  for (double& v : a) v = coef(rng);
  std::vector<double> rho(static_cast<std::size_t>(n)), m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double s = (grid.center(i) - grid.left()) / options.L;
    double value = 0.0;
    for (int mode = 0; mode < 4; ++mode) value += a[mode] * std::sin((mode + 1) * std::numbers::pi * s);
    rho[static_cast<std::size_t>(i)] = 2.0 + value;
    m[static_cast<std::size_t>(i)] = value;
  }

  volatile double sink = 0.0;
  BenchRow row;
  row.n = n;
  row.fd_nanos = median_nanos(options.repetitions, [&] {
    const AuxFields aux = solve_aux(grid, rho, m, options.k, options.lambda);
    sink = sink + aux.y1[0] + aux.y2[0];
  });
  row.riemann_nanos = median_nanos(options.repetitions, [&] {
    const std::vector<double> y1 = options.parallel_riemann
                                       ? riemann_oracle_parallel(grid, m, kernel)
                                       : riemann_oracle(grid, m, kernel);
    const std::vector<double> y2 = options.parallel_riemann
                                       ? riemann_oracle_parallel(grid, rho, kernel)
                                       : riemann_oracle(grid, rho, kernel);
    sink = sink + y1[0] + y2[0];
  });
  row.ratio = row.riemann_nanos / row.fd_nanos;
  return row;
}

double loglog_slope(const std::vector<double>& n, const std::vector<double>& nanos) {
  const std::size_t count = std::min(n.size(), nanos.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = std::log(n[i]);
    const double y = std::log(nanos[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double c = static_cast<double>(count);
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

}  // namespace csflock
