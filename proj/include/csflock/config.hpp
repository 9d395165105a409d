#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "csflock/kernels.hpp"

namespace csflock {

/// Pairwise force summation strategy for the particle solver.
enum class Summation {
  Auto,    // sorted prefix sums when the kernel allows it, direct otherwise
  Direct,  // O(N^2) pair loop
  Sorted,  // O(N log N) exact sweep, 1D Free1D/Bounded1D only
};

/// How particles are drawn from the initial density.
enum class Sampling {
  Stratified,  // one uniform variate per quantile stratum
  Random,      // i.i.d. uniform variates
  Midpoint,    // deterministic stratum midpoints
};

std::string_view to_string(Summation s);
std::string_view to_string(Sampling s);

/// Resolved run configuration shared by the particle and macro solvers.
struct SimConfig {
  KernelSpec kernel;
  double L = 6.283185307179586;  // macro domain length, centered at 0
  int n = 600;                   // macro cells
  int N = 10000;                 // particles
  double dt = 0.001;
  double t_end = 5.0;
  double c = 0.5;  // initial velocity amplitude
  int snapshot_every = 500;
  double rho_floor = 1e-12;
  double cfl_limit = 0.45;
  std::uint64_t seed = 42;
  bool fluctuation_frame = true;
  Summation summation = Summation::Auto;
  Sampling sampling = Sampling::Stratified;
  std::optional<double> x_M;  // confinement bound for the bounded1d flocking check
  std::string out_dir = "out";

  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// Number of time steps covering [0, t_end].
  long steps() const;
};

/// Flat section.key -> value view of a config, including applied defaults.
std::map<std::string, std::string> to_key_values(const SimConfig& config);

/// Parses an INI-style file with [kernel], [run] and [output] sections.
/// Unknown keys and malformed values raise ConfigError with the line number
/// when known. Missing keys keep their defaults; the [kernel] section is required.
SimConfig parse_config(std::istream& in);
SimConfig load_config(const std::string& path);

/// Applies one "section.key=value" override.
void apply_override(SimConfig& config, const std::string& assignment);

}  // namespace csflock
