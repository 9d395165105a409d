#pragma once

#include <vector>

#include "csflock/config.hpp"
#include "csflock/elliptic.hpp"
#include "csflock/hyperbolic.hpp"
#include "csflock/particles.hpp"

namespace csflock {

struct ConservedTotals {
  double mass = 0.0;
  double momentum = 0.0;
};

struct ConservedSeries {
  std::vector<double> times;
  std::vector<double> total_mass;
  std::vector<double> total_momentum;
};

struct MacroSnapshot {
  FieldState state;
  AuxFields aux;
};

struct MacroRun {
  std::vector<MacroSnapshot> snapshots;
  ConservedSeries series;  // one entry per time step, including t = 0
};

/// Cell-center samples of the initial density and momentum.
FieldState init_fields(const Grid1D& grid, double c);

/// dx-weighted sums of density and momentum.
ConservedTotals conserved_totals(const FieldState& state, const Grid1D& grid);

/// Sum of rho u^2 dx over cells above the density floor.
double kinetic_energy(const FieldState& state, const Grid1D& grid,
                      double rho_floor = kDefaultRhoFloor);

/// Largest |m / rho| over cells above the density floor.
double max_speed(const FieldState& state, double rho_floor = kDefaultRhoFloor);

/// Moves a drifting state to the fluctuation frame: subtracts the mean
/// velocity and shifts the profile by the whole number of cells nearest the
/// center of mass.
FieldState galilean_shift(const FieldState& state, const Grid1D& grid);

/// Coupled elliptic/hyperbolic run from an explicit initial state. The
/// state must carry zero total momentum (see galilean_shift).
MacroRun run_macro(const FieldState& initial, const Grid1D& grid, const SimConfig& config);
/// Run from init_fields on the configured grid.
MacroRun run_macro(const SimConfig& config);

/// Empirical density and momentum of a 1D ensemble on the grid.
/// Throws ParticleDomainError for particles outside the grid.
FieldState bin_particles(const ParticleEnsemble& ensemble, const Grid1D& grid);

struct L1Distance {
  double rho = 0.0;
  double m = 0.0;
};

/// dx-weighted L1 distances between two states on the same grid.
L1Distance compare(const FieldState& macro, const FieldState& empirical, const Grid1D& grid);

}  // namespace csflock
