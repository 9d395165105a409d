#pragma once

#include <functional>
#include <vector>

#include "csflock/elliptic.hpp"

namespace csflock {

/// Conserved pair (density, momentum density).
struct Conserved {
  double rho = 0.0;
  double m = 0.0;

  friend Conserved operator+(Conserved a, Conserved b) { return {a.rho + b.rho, a.m + b.m}; }
  friend Conserved operator-(Conserved a, Conserved b) { return {a.rho - b.rho, a.m - b.m}; }
  friend Conserved operator*(double s, Conserved a) { return {s * a.rho, s * a.m}; }
  bool operator==(const Conserved&) const = default;
};

/// Macroscopic state on a Grid1D: one density and momentum value per cell.
struct FieldState {
  std::vector<double> rho;
  std::vector<double> m;
  double t = 0.0;

  std::size_t size() const noexcept { return rho.size(); }
  Conserved at(std::size_t i) const { return {rho[i], m[i]}; }
};

inline constexpr double kDefaultRhoFloor = 1e-12;
inline constexpr double kDefaultCflLimit = 0.45;

struct HyperbolicOptions {
  double rho_floor = kDefaultRhoFloor;
  double cfl_limit = kDefaultCflLimit;
};

/// 1/2 (sign a + sign b) min(|a|, |b|).
double minmod(double a, double b);

/// m / rho above the floor, zero in (near-)vacuum.
double velocity(Conserved u, double rho_floor = kDefaultRhoFloor);

/// Pressureless flux (m, m u) with the vacuum rule for u.
Conserved physical_flux(Conserved u, double rho_floor = kDefaultRhoFloor);

/// Limited linear reconstruction at the n + 1 cell interfaces. Interface k sits
/// between cells k - 1 and k; two vacuum ghost cells pad each side.
struct InterfaceStates {
  std::vector<Conserved> left;   // U*_{k-1}: value from the cell on the left
  std::vector<Conserved> right;  // U*_k: value from the cell on the right
};
InterfaceStates reconstruct(const FieldState& state);

/// Central flux 1/2 [F(L) + F(R) - a (R - L)] with a = max(|u_L|, |u_R|).
Conserved kt_flux(Conserved left, Conserved right, double rho_floor = kDefaultRhoFloor);

/// Largest local speed over all interfaces of the reconstructed state.
double max_local_speed(const FieldState& state, double rho_floor = kDefaultRhoFloor);

/// Alignment source (0, rho y1 - m y2) per cell.
std::vector<Conserved> source(const FieldState& state, const AuxFields& aux);

/// Semi-discrete right-hand side -(F_{i+1/2} - F_{i-1/2}) / dx + S_i.
std::vector<Conserved> rhs(const FieldState& state, const Grid1D& grid, const AuxFields& aux,
                           double rho_floor = kDefaultRhoFloor);

using AuxProvider = std::function<AuxFields(const FieldState&)>;
using RhsFunction = std::function<std::vector<Conserved>(const FieldState&)>;

/// Two-stage SSP Runge-Kutta step for an arbitrary right-hand side. Negative
/// densities left by a stage are reset to vacuum.
FieldState ssp_rk2_step(const FieldState& state, double dt, const RhsFunction& f);

/// SSP-RK2 step of the alignment system with aux fields recomputed per stage.
/// Throws CflError when max local speed * dt / dx exceeds options.cfl_limit.
FieldState ssp_rk2_step(const FieldState& state, const Grid1D& grid, double dt,
                        const AuxProvider& aux_provider, const HyperbolicOptions& options = {});

}  // namespace csflock
