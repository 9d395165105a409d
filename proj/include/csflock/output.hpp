#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "csflock/config.hpp"
#include "csflock/macro.hpp"
#include "csflock/particles.hpp"

namespace csflock {

/// Round-trip decimal text for a double ("nan"/"inf" for non-finite values).
std::string format_number(double value);

/// `t,particle_id,x...,v...`; one row per particle per snapshot. Columns are
/// `x,v` in 1D and `x0,..,v0,..` otherwise.
void write_particle_csv(std::ostream& out, const std::vector<ParticleEnsemble>& snapshots);

/// `t,x_norm,v_norm,max_pair_dist,lyapunov,xc...,vc...`.
void write_report_csv(std::ostream& out, const std::vector<FlockReport>& reports);

/// `x,rho,m,u,y1,y2` for one macro snapshot.
void write_macro_csv(std::ostream& out, const Grid1D& grid, const MacroSnapshot& snapshot,
                     double rho_floor = kDefaultRhoFloor);

struct CompareRow {
  double t = 0.0;
  double l1_rho = 0.0;
  double l1_m = 0.0;
};
/// `t,l1_rho,l1_m`.
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

struct BenchRow {
  int n = 0;
  double fd_nanos = 0.0;
  double riemann_nanos = 0.0;
  double ratio = 0.0;  // riemann / fd
};
/// `n,fd_nanos,riemann_nanos,ratio`.
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Manifest JSON with keys `command`, `config`, `output_dir`, `phases`,
/// `times`, `mass_series`, `momentum_series` and `files`.
struct RunManifest {
  std::string command;
  SimConfig config;
  std::map<std::string, double> phase_seconds;
  std::vector<std::string> files;
  ConservedSeries series;
};
void write_manifest(std::ostream& out, const RunManifest& manifest);

}  // namespace csflock
