#include "csflock/output.hpp"

#include <fmt/format.h>

#include <cmath>
#include "json.hpp"
#include <ostream>

namespace csflock {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", value);
}

void write_particle_csv(std::ostream& out, const std::vector<ParticleEnsemble>& snapshots) {
  const int dim = snapshots.empty() ? 1 : snapshots.front().dim;
  out << "t,particle_id";
  if (dim == 1) {
    out << ",x,v";
  } else {
    for (int c = 0; c < dim; ++c) out << ",x" << c;
    for (int c = 0; c < dim; ++c) out << ",v" << c;
  }
  out << '\n';
  for (const ParticleEnsemble& e : snapshots) {
    const std::string t = format_number(e.t);
    for (std::size_t i = 0; i < e.size(); ++i) {
      out << t << ',' << i;
      for (double x : e.position(i)) out << ',' << format_number(x);
      for (double v : e.velocity(i)) out << ',' << format_number(v);
      out << '\n';
    }
  }
}

void write_report_csv(std::ostream& out, const std::vector<FlockReport>& reports) {
  const std::size_t dim = reports.empty() ? 1 : reports.front().centroid.x_c.size();
  out << "t,x_norm,v_norm,max_pair_dist,lyapunov";
  if (dim == 1) {
    out << ",xc,vc";
  } else {
    for (std::size_t c = 0; c < dim; ++c) out << ",xc" << c;
    for (std::size_t c = 0; c < dim; ++c) out << ",vc" << c;
  }
  out << '\n';
  for (const FlockReport& r : reports) {
    out << format_number(r.t) << ',' << format_number(r.x_norm) << ','
        << format_number(r.v_norm) << ',' << format_number(r.max_pair_dist) << ','
        << format_number(r.lyapunov);
    for (double x : r.centroid.x_c) out << ',' << format_number(x);
    for (double v : r.centroid.v_c) out << ',' << format_number(v);
    out << '\n';
  }
}

void write_macro_csv(std::ostream& out, const Grid1D& grid, const MacroSnapshot& snapshot,
                     double rho_floor) {
  out << "x,rho,m,u,y1,y2\n";
  const FieldState& s = snapshot.state;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_number(grid.centers()[i]) << ',' << format_number(s.rho[i]) << ','
        << format_number(s.m[i]) << ',' << format_number(velocity(s.at(i), rho_floor)) << ','
        << format_number(snapshot.aux.y1[i]) << ',' << format_number(snapshot.aux.y2[i]) << '\n';
  }
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "t,l1_rho,l1_m\n";
  for (const CompareRow& r : rows) {
    out << format_number(r.t) << ',' << format_number(r.l1_rho) << ',' << format_number(r.l1_m)
        << '\n';
  }
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "n,fd_nanos,riemann_nanos,ratio\n";
  for (const BenchRow& r : rows) {
    out << r.n << ',' << fmt::format("{:.0f}", r.fd_nanos) << ','
        << fmt::format("{:.0f}", r.riemann_nanos) << ',' << fmt::format("{:.6g}", r.ratio)
        << '\n';
  }
}

void write_manifest(std::ostream& out, const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : to_key_values(manifest.config)) config[key] = value;
  j["config"] = config;
  j["output_dir"] = manifest.config.out_dir;
  nlohmann::ordered_json phases = nlohmann::ordered_json::object();
  for (const auto& [name, seconds] : manifest.phase_seconds) phases[name] = seconds;
  j["phases"] = phases;
  j["times"] = manifest.series.times;
  j["mass_series"] = manifest.series.total_mass;
  j["momentum_series"] = manifest.series.total_momentum;
  j["files"] = manifest.files;
  out << j.dump(2) << '\n';
}

}  // namespace csflock
