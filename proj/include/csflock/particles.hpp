#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "csflock/config.hpp"
#include "csflock/kernels.hpp"

namespace csflock {

/// N particles in d dimensions; coordinates stored particle-major.
struct ParticleEnsemble {
  int dim = 1;
  std::vector<double> positions;
  std::vector<double> velocities;
  double t = 0.0;

  ParticleEnsemble() = default;
  ParticleEnsemble(int dim, std::vector<double> positions, std::vector<double> velocities,
                   double t = 0.0);

  std::size_t size() const noexcept { return dim > 0 ? positions.size() / dim : 0; }
  std::span<const double> position(std::size_t i) const {
    return {positions.data() + i * dim, static_cast<std::size_t>(dim)};
  }
  std::span<const double> velocity(std::size_t i) const {
    return {velocities.data() + i * dim, static_cast<std::size_t>(dim)};
  }
  /// Throws DomainError on size mismatch, bad dimension or non-finite entries.
  void validate() const;
};

struct CentroidState {
  std::vector<double> x_c;
  std::vector<double> v_c;
};

struct FlockReport {
  double t = 0.0;
  double x_norm = 0.0;
  double v_norm = 0.0;
  double max_pair_dist = 0.0;
  double lyapunov = 0.0;  // NaN when no confinement rate is available
  CentroidState centroid;
};

struct FlockingDecision {
  bool guaranteed = false;
  double v0_norm = 0.0;
  double threshold = 0.0;
  double x_bar = 0.0;       // NaN unless guaranteed
  double decay_rate = 0.0;  // phi(x_bar); 0 unless guaranteed
};

/// Pairwise interaction weight psi(x_j, x_i).
using InteractionFn = std::function<double(std::span<const double>, std::span<const double>)>;
/// Confinement rate phi(s) of the flocking inequalities.
using RateFunction = std::function<double(double)>;

/// a_i = (1/N) sum_j psi(x_j, x_i) (v_j - v_i); the self term is skipped.
/// Throws ParticleDomainError when a position lies outside the kernel domain.
std::vector<double> cs_acceleration(const ParticleEnsemble& ensemble, const KernelSpec& kernel,
                                    Summation summation = Summation::Auto);
std::vector<double> cs_acceleration(const ParticleEnsemble& ensemble, const InteractionFn& psi);

/// Half kick, drift, then a velocity update averaging the accelerations at
/// (x_n, v_n) and (x_{n+1}, v_{n+1/2}).
ParticleEnsemble verlet_step(const ParticleEnsemble& ensemble, const KernelSpec& kernel, double dt,
                             Summation summation = Summation::Auto);
ParticleEnsemble verlet_step(const ParticleEnsemble& ensemble, const InteractionFn& psi,
                             double dt);

CentroidState centroid(const ParticleEnsemble& ensemble);
ParticleEnsemble to_fluctuation_frame(const ParticleEnsemble& ensemble);

/// Aggregate fluctuation norms, max pairwise distance and the Lyapunov value
/// |v| + int_0^{|x|} phi. An empty phi yields a NaN Lyapunov value.
FlockReport flock_metrics(const ParticleEnsemble& ensemble, const RateFunction& phi = {});

/// phi(s) = (2/N) psi~(2s) for radial kernels; for Bounded1D the smallest
/// kernel value over pairs in [-x_M, x_M] at separation 2s.
RateFunction confinement_rate(const KernelSpec& kernel, std::size_t N,
                              std::optional<double> x_M = {});

/// Default bounded1d confinement bound: midway between 2|x(0)| and L/2, or
/// nullopt when 2|x(0)| >= L/2.
std::optional<double> default_confinement_bound(const KernelSpec& kernel, double x0_norm);

/// Sufficient flocking test |v(0)| < int phi, with the predicted confinement
/// radius and decay rate. Throws InvalidBoundError for x_M outside [0, L/2).
FlockingDecision check_flocking_condition(const ParticleEnsemble& ensemble,
                                          const KernelSpec& kernel,
                                          std::optional<double> x_M = {});

/// Initial density (pi / 2L) cos(pi x / L) on [-L/2, L/2].
double initial_density(double x, double L);
/// Initial velocity -c sin(pi x / L).
double initial_velocity(double x, double L, double c);

/// Draws N positions from the initial density by inverting a 10^4-point CDF
/// table; velocities are the initial velocity field at each position.
ParticleEnsemble sample_initial_ensemble(std::size_t N, double L, double c, std::uint64_t seed,
                                         Sampling sampling = Sampling::Stratified);

struct ParticleRunOptions {
  KernelSpec kernel;
  double dt = 0.001;
  double t_end = 1.0;
  int snapshot_every = 100;
  bool fluctuation_frame = false;
  Summation summation = Summation::Auto;
  std::optional<double> x_M;
};

struct ParticleRun {
  std::vector<ParticleEnsemble> snapshots;
  std::vector<FlockReport> reports;
};

/// Iterates verlet_step, recording a snapshot and report at step 0, every
/// snapshot_every steps and at the final step.
ParticleRun run_particles(const ParticleEnsemble& initial, const ParticleRunOptions& options);
ParticleRun run_particles(const SimConfig& config);

}  // namespace csflock
