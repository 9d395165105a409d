#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "csflock/kernels.hpp"

namespace csflock {

/// Uniform cell-centered grid on [-L/2, L/2] with n cells.
class Grid1D {
 public:
  Grid1D(double L, int n);

  double length() const noexcept { return L_; }
  int cells() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double left() const noexcept { return -0.5 * L_; }
  double right() const noexcept { return 0.5 * L_; }
  double center(int i) const noexcept { return -0.5 * L_ + (i + 0.5) * dx_; }
  const std::vector<double>& centers() const noexcept { return centers_; }
  /// Index of the cell containing x; the right boundary belongs to the last cell.
  /// Throws DomainError outside [-L/2, L/2].
  int locate(double x) const;

  bool operator==(const Grid1D& other) const noexcept {
    return L_ == other.L_ && n_ == other.n_;
  }

 private:
  double L_;
  int n_;
  double dx_;
  std::vector<double> centers_;
};

struct TridiagonalSystem {
  std::vector<double> lower;  // lower[0] unused
  std::vector<double> diag;
  std::vector<double> upper;  // upper[n-1] unused
  std::vector<double> rhs;

  std::size_t size() const noexcept { return diag.size(); }
};

/// Mediated fields: y1 from the momentum, y2 from the density.
struct AuxFields {
  std::vector<double> y1;
  std::vector<double> y2;
};

struct DirichletData {
  double left = 0.0;
  double right = 0.0;
};

/// Finite-difference system for (y'' - lambda^2 y) = -2k u with Dirichlet data
/// at the grid faces. Interior rows are (1, -2 - lambda^2 dx^2, 1) / dx^2; the
/// end rows use the ghost value 2 y_b - y_0 so the boundary sits at +-L/2.
TridiagonalSystem assemble(const Grid1D& grid, double k, double lambda, std::span<const double> u,
                           DirichletData boundary = {});

/// Thomas algorithm without pivoting. Throws SingularSystemError when a pivot
/// falls below 1e-14 times its row scale.
std::vector<double> thomas_solve(const TridiagonalSystem& system);

/// Applies the discrete inverse of -(1/2k)(D^2 - lambda^2) with homogeneous
/// Dirichlet data to f.
std::vector<double> solve_green(const Grid1D& grid, double k, double lambda,
                                std::span<const double> f);

AuxFields solve_aux(const Grid1D& grid, std::span<const double> rho, std::span<const double> m,
                    double k, double lambda);

/// Midpoint-rule convolution g_i = sum_j G(x_i, x_j) f_j dx with the Bounded1D kernel.
std::vector<double> riemann_oracle(const Grid1D& grid, std::span<const double> f,
                                   const KernelSpec& kernel);

/// Same sum split across `threads` worker threads (0 = hardware concurrency).
std::vector<double> riemann_oracle_parallel(const Grid1D& grid, std::span<const double> f,
                                            const KernelSpec& kernel, unsigned threads = 0);

}  // namespace csflock
