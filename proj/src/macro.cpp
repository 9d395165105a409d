#include "csflock/macro.hpp"

#include <cmath>
#include <string>

#include "csflock/errors.hpp"

namespace csflock {

FieldState init_fields(const Grid1D& grid, double c) {
  FieldState state;
  const auto n = static_cast<std::size_t>(grid.cells());
  state.rho.resize(n);
  state.m.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.centers()[i];
    state.rho[i] = initial_density(x, grid.length());
    state.m[i] = state.rho[i] * initial_velocity(x, grid.length(), c);
  }
  return state;
}

ConservedTotals conserved_totals(const FieldState& state, const Grid1D& grid) {
  ConservedTotals totals;
  for (std::size_t i = 0; i < state.size(); ++i) {
    totals.mass += state.rho[i];
    totals.momentum += state.m[i];
  }
  totals.mass *= grid.dx();
  totals.momentum *= grid.dx();
  return totals;
}

double kinetic_energy(const FieldState& state, const Grid1D& grid, double rho_floor) {
  double energy = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double u = velocity(state.at(i), rho_floor);
    energy += state.rho[i] * u * u;
  }
  return energy * grid.dx();
}

double max_speed(const FieldState& state, double rho_floor) {
  double speed = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    speed = std::max(speed, std::abs(velocity(state.at(i), rho_floor)));
  }
  return speed;
}

FieldState galilean_shift(const FieldState& state, const Grid1D& grid) {
  const ConservedTotals totals = conserved_totals(state, grid);
  if (!(totals.mass > 0.0)) throw DomainError("galilean_shift needs positive total mass");
  const double drift = totals.momentum / totals.mass;
  double first_moment = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) first_moment += grid.centers()[i] * state.rho[i];
  const double x_c = first_moment * grid.dx() / totals.mass;
  const long shift = std::lround(x_c / grid.dx());

  FieldState out = state;
  const auto n = static_cast<long>(state.size());
  for (long i = 0; i < n; ++i) {
    const long src = i + shift;
    const bool inside = src >= 0 && src < n;
    const auto d = static_cast<std::size_t>(i);
    const auto s = static_cast<std::size_t>(src);
    out.rho[d] = inside ? state.rho[s] : 0.0;
    out.m[d] = inside ? state.m[s] - state.rho[s] * drift : 0.0;
  }
  return out;
}

MacroRun run_macro(const FieldState& initial, const Grid1D& grid, const SimConfig& config) {
  config.validate();
  const KernelSpec& kernel = config.kernel;
  if (kernel.variant != KernelVariant::Bounded1D) {
    throw ConfigError("kernel.variant", "the macro solver needs the bounded1d kernel");
  }
  if (kernel.L != grid.length()) {
    throw ConfigError("kernel.L", "kernel L differs from the macro domain length run.L");
  }
  if (initial.size() != static_cast<std::size_t>(grid.cells())) {
    throw SizeError("initial state does not match the grid");
  }
  const ConservedTotals start = conserved_totals(initial, grid);
  double momentum_scale = 0.0;
  for (double m : initial.m) momentum_scale += std::abs(m);
  momentum_scale *= grid.dx();
  if (std::abs(start.momentum) > 1e-10 * momentum_scale + 1e-300) {
    throw DomainError("initial total momentum must vanish; apply galilean_shift first");
  }

  const HyperbolicOptions options{config.rho_floor, config.cfl_limit};
  const AuxProvider aux_of = [&](const FieldState& u) {
    return solve_aux(grid, u.rho, u.m, kernel.k, kernel.lambda);
  };

  MacroRun run;
  const auto record_totals = [&](const FieldState& u) {
    const ConservedTotals totals = conserved_totals(u, grid);
    run.series.times.push_back(u.t);
    run.series.total_mass.push_back(totals.mass);
    run.series.total_momentum.push_back(totals.momentum);
  };

  FieldState state = initial;
  run.snapshots.push_back({state, aux_of(state)});
  record_totals(state);
  const long steps = config.steps();
  for (long step = 1; step <= steps; ++step) {
    try {
      state = ssp_rk2_step(state, grid, config.dt, aux_of, options);
    } catch (const CflError& e) {
      throw CflError(std::string(e.what()) + " at step " + std::to_string(step), e.courant(),
                     step);
    }
    state.t = initial.t + static_cast<double>(step) * config.dt;
    record_totals(state);
    if (step % config.snapshot_every == 0 || step == steps) {
      run.snapshots.push_back({state, aux_of(state)});
    }
  }
  return run;
}

MacroRun run_macro(const SimConfig& config) {
  config.validate();
  const Grid1D grid(config.L, config.n);
  return run_macro(init_fields(grid, config.c), grid, config);
}

FieldState bin_particles(const ParticleEnsemble& ensemble, const Grid1D& grid) {
  if (ensemble.dim != 1) throw DomainError("bin_particles needs a 1D ensemble");
  const auto n = static_cast<std::size_t>(grid.cells());
  FieldState out;
  out.rho.assign(n, 0.0);
  out.m.assign(n, 0.0);
  out.t = ensemble.t;
  for (std::size_t p = 0; p < ensemble.size(); ++p) {
    const double x = ensemble.positions[p];
    if (!(x >= grid.left() && x <= grid.right())) {
      throw ParticleDomainError("particle " + std::to_string(p) + " lies outside the grid", p);
    }
    const auto cell = static_cast<std::size_t>(grid.locate(x));
    out.rho[cell] += 1.0;
    out.m[cell] += ensemble.velocities[p];
  }
  const double weight = 1.0 / (static_cast<double>(ensemble.size()) * grid.dx());
  for (std::size_t i = 0; i < n; ++i) {
    out.rho[i] *= weight;
    out.m[i] *= weight;
  }
  return out;
}

L1Distance compare(const FieldState& macro, const FieldState& empirical, const Grid1D& grid) {
  const auto n = static_cast<std::size_t>(grid.cells());
  if (macro.size() != n || empirical.size() != n) {
    throw SizeError("compare needs both states on the same grid");
  }
  L1Distance d;
  for (std::size_t i = 0; i < n; ++i) {
    d.rho += std::abs(macro.rho[i] - empirical.rho[i]);
    d.m += std::abs(macro.m[i] - empirical.m[i]);
  }
  d.rho *= grid.dx();
  d.m *= grid.dx();
  return d;
}

}  // namespace csflock
