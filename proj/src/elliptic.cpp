#include "csflock/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "csflock/errors.hpp"

namespace csflock {

Grid1D::Grid1D(double L, int n) : L_(L), n_(n), dx_(0.0) {
  if (!(L > 0.0)) throw DomainError("grid length must be > 0");
  if (n < 1) throw SizeError("grid needs at least one cell");
  dx_ = L / n;
  centers_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) centers_[static_cast<std::size_t>(i)] = center(i);
}

int Grid1D::locate(double x) const {
  if (!(x >= left() && x <= right())) throw DomainError("position outside grid domain");
  const auto i = static_cast<int>(std::floor((x - left()) / dx_));
  return std::clamp(i, 0, n_ - 1);
}

TridiagonalSystem assemble(const Grid1D& grid, double k, double lambda, std::span<const double> u,
                           DirichletData boundary) {
  const int n = grid.cells();
  if (n < 3) throw SizeError("elliptic system needs n >= 3, got " + std::to_string(n));
  if (u.size() != static_cast<std::size_t>(n)) throw SizeError("field size does not match grid");
  if (lambda == 0.0) throw DomainError("lambda must be nonzero");

  const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());
  const double lam2 = lambda * lambda;
  const auto un = static_cast<std::size_t>(n);

  TridiagonalSystem sys;
  sys.lower.assign(un, inv_dx2);
  sys.upper.assign(un, inv_dx2);
  sys.diag.assign(un, -2.0 * inv_dx2 - lam2);
  sys.rhs.resize(un);
  sys.lower[0] = 0.0;
  sys.upper[un - 1] = 0.0;
  sys.diag[0] = -3.0 * inv_dx2 - lam2;
  sys.diag[un - 1] = -3.0 * inv_dx2 - lam2;
  for (std::size_t i = 0; i < un; ++i) sys.rhs[i] = -2.0 * k * u[i];
  sys.rhs[0] -= 2.0 * boundary.left * inv_dx2;
  sys.rhs[un - 1] -= 2.0 * boundary.right * inv_dx2;
  return sys;
}

std::vector<double> thomas_solve(const TridiagonalSystem& system) {
  const std::size_t n = system.size();
  if (n == 0) return {};
  if (system.lower.size() != n || system.upper.size() != n || system.rhs.size() != n) {
    throw SizeError("tridiagonal coefficient lengths are inconsistent");
  }
  constexpr double kPivotTol = 1e-14;
  auto row_scale = [&](std::size_t i) {
    return std::max({std::abs(system.diag[i]), i > 0 ? std::abs(system.lower[i]) : 0.0,
                     i + 1 < n ? std::abs(system.upper[i]) : 0.0});
  };

  std::vector<double> c_prime(n);
  std::vector<double> y(n);
  double pivot = system.diag[0];
  if (std::abs(pivot) <= kPivotTol * row_scale(0)) throw SingularSystemError("zero pivot", 0);
  c_prime[0] = n > 1 ? system.upper[0] / pivot : 0.0;
  y[0] = system.rhs[0] / pivot;

  // Forward sweep
  for (std::size_t i = 1; i < n; ++i) {
    pivot = system.diag[i] - system.lower[i] * c_prime[i - 1];
    if (std::abs(pivot) <= kPivotTol * row_scale(i) || !std::isfinite(pivot)) {
      throw SingularSystemError("zero pivot at row " + std::to_string(i), i);
    }
    c_prime[i] = i + 1 < n ? system.upper[i] / pivot : 0.0;
    y[i] = (system.rhs[i] - system.lower[i] * y[i - 1]) / pivot;
  }

  // Back substitution
  for (std::size_t i = n - 1; i > 0; --i) y[i - 1] -= c_prime[i - 1] * y[i];
  return y;
}

std::vector<double> solve_green(const Grid1D& grid, double k, double lambda,
                                std::span<const double> f) {
  return thomas_solve(assemble(grid, k, lambda, f));
}

AuxFields solve_aux(const Grid1D& grid, std::span<const double> rho, std::span<const double> m,
                    double k, double lambda) {
  return AuxFields{solve_green(grid, k, lambda, m), solve_green(grid, k, lambda, rho)};
}

namespace {

void check_oracle_args(const Grid1D& grid, std::span<const double> f, const KernelSpec& kernel) {
  if (kernel.variant != KernelVariant::Bounded1D) {
    throw DomainError("riemann_oracle requires a bounded1d kernel");
  }
  if (kernel.L != grid.length()) throw DomainError("kernel L does not match the grid length");
  if (f.size() != static_cast<std::size_t>(grid.cells())) {
    throw SizeError("field size does not match grid");
  }
}

void riemann_rows(const Grid1D& grid, std::span<const double> f, const KernelSpec& kernel,
                  std::size_t begin, std::size_t end, std::vector<double>& out) {
  const auto& x = grid.centers();
  const double dx = grid.dx();
  for (std::size_t i = begin; i < end; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += eval_bounded_1d(kernel, x[i], x[j]) * f[j];
    out[i] = acc * dx;
  }
}

}  // namespace

std::vector<double> riemann_oracle(const Grid1D& grid, std::span<const double> f,
                                   const KernelSpec& kernel) {
  check_oracle_args(grid, f, kernel);
  std::vector<double> out(f.size());
  riemann_rows(grid, f, kernel, 0, f.size(), out);
  return out;
}

std::vector<double> riemann_oracle_parallel(const Grid1D& grid, std::span<const double> f,
                                            const KernelSpec& kernel, unsigned threads) {
  check_oracle_args(grid, f, kernel);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<double> out(f.size());
  const std::size_t chunk = (f.size() + threads - 1) / threads;
  {
    std::vector<std::jthread> workers;
    for (std::size_t begin = 0; begin < f.size(); begin += chunk) {
      const std::size_t end = std::min(f.size(), begin + chunk);
      workers.emplace_back([&, begin, end] { riemann_rows(grid, f, kernel, begin, end, out); });
    }
  }
  return out;
}

}  // namespace csflock
