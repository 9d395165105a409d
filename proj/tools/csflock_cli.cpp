// Batch driver: particle and macro runs, their comparison, kernel profile
// dumps and the nonlocal-term benchmark.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime/numerical error.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "csflock/bench.hpp"
#include "csflock/config.hpp"
#include "csflock/errors.hpp"
#include "csflock/kernels.hpp"
#include "csflock/macro.hpp"
#include "csflock/output.hpp"
#include "csflock/particles.hpp"

namespace fs = std::filesystem;
using namespace csflock;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "INI config with [kernel], [run], [output]");
  cmd->add_option("--out", args.out_dir, "Output directory (overrides output.dir)");
  cmd->add_option("--seed", args.seed, "Particle sampling seed (overrides run.seed)");
  cmd->add_option("--set", args.overrides, "Override one entry, e.g. --set run.N=2000")
      ->take_all();
}

SimConfig resolve_config(const CommonArgs& args) {
  SimConfig cfg = args.config_path.empty() ? SimConfig{} : load_config(args.config_path);
  for (const std::string& o : args.overrides) apply_override(cfg, o);
  if (args.seed) cfg.seed = *args.seed;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  cfg.validate();
  return cfg;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

class PhaseTimer {
 public:
  explicit PhaseTimer(std::map<std::string, double>& sink, std::string name)
      : sink_(sink), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~PhaseTimer() {
    sink_[name_] +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::map<std::string, double>& sink_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

void write_manifest_file(const fs::path& dir, const RunManifest& manifest) {
  std::ofstream out = open_output(dir / "manifest.json");
  write_manifest(out, manifest);
}

int cmd_particles(const CommonArgs& args) {
  const SimConfig cfg = resolve_config(args);
  RunManifest manifest{"particles", cfg, {}, {}, {}};
  ParticleRun run;
  {
    PhaseTimer timer(manifest.phase_seconds, "simulate");
    run = run_particles(cfg);
  }
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  {
    PhaseTimer timer(manifest.phase_seconds, "write");
    std::ofstream snaps = open_output(dir / "particles.csv");
    write_particle_csv(snaps, run.snapshots);
    std::ofstream reports = open_output(dir / "reports.csv");
    write_report_csv(reports, run.reports);
  }
  manifest.files = {"particles.csv", "reports.csv"};
  write_manifest_file(dir, manifest);

  const FlockReport& first = run.reports.front();
  const FlockReport& last = run.reports.back();
  std::cout << "particles: N=" << cfg.N << " steps=" << cfg.steps() << " v_norm "
            << format_number(first.v_norm) << " -> " << format_number(last.v_norm) << '\n';
  return 0;
}

int cmd_macro(const CommonArgs& args) {
  const SimConfig cfg = resolve_config(args);
  const Grid1D grid(cfg.L, cfg.n);
  RunManifest manifest{"macro", cfg, {}, {}, {}};
  MacroRun run;
  {
    PhaseTimer timer(manifest.phase_seconds, "simulate");
    run = run_macro(init_fields(grid, cfg.c), grid, cfg);
  }
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  {
    PhaseTimer timer(manifest.phase_seconds, "write");
    for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
      const std::string name = "macro_" + std::to_string(s) + ".csv";
      std::ofstream out = open_output(dir / name);
      write_macro_csv(out, grid, run.snapshots[s], cfg.rho_floor);
      manifest.files.push_back(name);
    }
  }
  manifest.series = run.series;
  write_manifest_file(dir, manifest);

  const auto& mass = run.series.total_mass;
  const auto& mom = run.series.total_momentum;
  double mass_drift = 0.0, mom_drift = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    mass_drift = std::max(mass_drift, std::abs(mass[i] - mass.front()) / mass.front());
    mom_drift = std::max(mom_drift, std::abs(mom[i] - mom.front()));
  }
  std::cout << "macro: n=" << cfg.n << " steps=" << cfg.steps()
            << " mass_rel_drift=" << format_number(mass_drift)
            << " momentum_abs_drift=" << format_number(mom_drift) << '\n';
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  const SimConfig cfg = resolve_config(args);
  if (cfg.kernel.variant == KernelVariant::Bounded1D && cfg.kernel.L != cfg.L) {
    throw ConfigError("kernel.L", "particle kernel L differs from macro domain run.L");
  }
  const Grid1D grid(cfg.L, cfg.n);
  RunManifest manifest{"compare", cfg, {}, {}, {}};
  MacroRun macro;
  ParticleRun particles;
  {
    PhaseTimer timer(manifest.phase_seconds, "macro");
    macro = run_macro(init_fields(grid, cfg.c), grid, cfg);
  }
  {
    PhaseTimer timer(manifest.phase_seconds, "particles");
    particles = run_particles(cfg);
  }
  std::vector<CompareRow> rows;
  const std::size_t count = std::min(macro.snapshots.size(), particles.snapshots.size());
  for (std::size_t s = 0; s < count; ++s) {
    const FieldState empirical = bin_particles(particles.snapshots[s], grid);
    const L1Distance d = compare(macro.snapshots[s].state, empirical, grid);
    rows.push_back({macro.snapshots[s].state.t, d.rho, d.m});
  }
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  std::ofstream out = open_output(dir / "compare.csv");
  write_compare_csv(out, rows);
  manifest.files = {"compare.csv"};
  manifest.series = macro.series;
  write_manifest_file(dir, manifest);
  write_compare_csv(std::cout, rows);
  return 0;
}

struct BenchArgs {
  std::vector<int> n_list{512, 1024, 2048, 4096};
  int repetitions = 5;
  bool parallel = false;
  std::string out_path;
};

int cmd_bench(const BenchArgs& args) {
  if (args.n_list.empty()) throw ConfigError("n-list", "needs at least one entry");
  BenchOptions options;
  options.repetitions = args.repetitions;
  options.parallel_riemann = args.parallel;
  std::vector<BenchRow> rows;
  for (int n : args.n_list) {
    if (n < 3) throw ConfigError("n-list", "every n must be >= 3");
    rows.push_back(bench_nonlocal(n, options));
  }
  if (!args.out_path.empty()) {
    std::ofstream out = open_output(args.out_path);
    write_bench_csv(out, rows);
  }
  write_bench_csv(std::cout, rows);
  return 0;
}

struct KernelArgs {
  std::string variant = "bounded1d";
  double k = 4.0;
  double lambda = 1.0;
  double L = 6.283185307179586;
  double r = 1.0;
  int d = 1;
  double K = 1.0;
  double gamma = 1.0;
  std::vector<double> x{0.0};
  int samples = 201;
  bool free_overlay = false;
  std::string out_path;
};

int cmd_kernel(const KernelArgs& args) {
  KernelSpec spec;
  try {
    spec.variant = parse_kernel_variant(args.variant);
  } catch (const DomainError& e) {
    throw ConfigError("variant", e.what());
  }
  spec.k = args.k;
  spec.lambda = args.lambda;
  spec.L = args.L;
  spec.r = args.r;
  spec.K = args.K;
  spec.gamma = args.gamma;
  spec.d = spec.variant == KernelVariant::BesselBall ? std::max(args.d, 2) : args.d;
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw ConfigError("kernel", e.what());
  }
  if (args.samples < 2) throw ConfigError("samples", "need at least 2 samples");

  std::ostringstream csv;
  csv << "x,s,value" << (args.free_overlay ? ",free_value" : "") << '\n';
  const KernelSpec free = KernelSpec::free_1d(spec.k, spec.lambda);

  if (spec.variant == KernelVariant::BesselBall) {
    // Profile along the line through the origin and x.
    if (static_cast<int>(args.x.size()) != spec.d) {
      throw ConfigError("x", "needs " + std::to_string(spec.d) + " coordinates");
    }
    double norm = 0.0;
    for (double c : args.x) norm += c * c;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw ImagePointError("bessel_ball profile needs x away from the origin");
    std::vector<double> s(args.x.size());
    for (int j = 0; j < args.samples; ++j) {
      const double tau = -spec.r + 2.0 * spec.r * j / (args.samples - 1);
      for (std::size_t c = 0; c < s.size(); ++c) s[c] = tau * args.x[c] / norm;
      double value = std::nan("");
      try {
        value = eval_bessel_ball(spec, args.x, s);
      } catch (const SingularityError&) {
      }
      csv << format_number(norm) << ',' << format_number(tau) << ',' << format_number(value);
      if (args.free_overlay) {
        const double dist = std::abs(tau - norm);
        csv << ',' << format_number(dist > 0.0 ? bessel_radial(spec, dist) : std::nan(""));
      }
      csv << '\n';
    }
  } else {
    const double x = args.x.front();
    const double lo = spec.variant == KernelVariant::Bounded1D ? -0.5 * spec.L : x - 0.5 * spec.L;
    const double hi = spec.variant == KernelVariant::Bounded1D ? 0.5 * spec.L : x + 0.5 * spec.L;
    for (int j = 0; j < args.samples; ++j) {
      const double s = j + 1 == args.samples ? hi : lo + (hi - lo) * j / (args.samples - 1);
      csv << format_number(x) << ',' << format_number(s) << ','
          << format_number(evaluate(spec, x, s));
      if (args.free_overlay) csv << ',' << format_number(eval_free_space_1d(free, x, s));
      csv << '\n';
    }
  }

  if (args.out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out = open_output(args.out_path);
    out << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cucker-Smale flocking with Green's-function kernels"};
  app.require_subcommand(1);

  CommonArgs particle_args, macro_args, compare_args;
  add_common(app.add_subcommand("particles", "Run the particle (N-body) solver"), particle_args);
  add_common(app.add_subcommand("macro", "Run the macroscopic finite-volume solver"), macro_args);
  add_common(app.add_subcommand("compare", "Run both solvers and report L1 distances"),
             compare_args);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time the tridiagonal solve against the Riemann sum");
  bench->add_option("--n-list", bench_args.n_list, "Grid sizes")->delimiter(',');
  bench->add_option("--reps", bench_args.repetitions, "Timed repetitions per size");
  bench->add_flag("--parallel", bench_args.parallel, "Use the threaded Riemann sum");
  bench->add_option("--out", bench_args.out_path, "CSV output file");

  KernelArgs kernel_args;
  auto* kernel = app.add_subcommand("kernel", "Dump a sampled kernel profile as CSV");
  kernel->add_option("--variant", kernel_args.variant, "free1d|bounded1d|rational|bessel_ball");
  kernel->add_option("--k", kernel_args.k);
  kernel->add_option("--lambda", kernel_args.lambda);
  kernel->add_option("--L", kernel_args.L);
  kernel->add_option("--r", kernel_args.r);
  kernel->add_option("--d", kernel_args.d);
  kernel->add_option("--K", kernel_args.K);
  kernel->add_option("--gamma", kernel_args.gamma);
  kernel->add_option("--x", kernel_args.x, "Fixed point (comma separated for d > 1)")
      ->delimiter(',');
  kernel->add_option("--samples", kernel_args.samples);
  kernel->add_flag("--free-overlay", kernel_args.free_overlay, "Add the free-space column");
  kernel->add_option("--out", kernel_args.out_path, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (app.got_subcommand("particles")) return cmd_particles(particle_args);
    if (app.got_subcommand("macro")) return cmd_macro(macro_args);
    if (app.got_subcommand("compare")) return cmd_compare(compare_args);
    if (app.got_subcommand("bench")) return cmd_bench(bench_args);
    if (app.got_subcommand("kernel")) return cmd_kernel(kernel_args);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const SizeError& e) {
    std::cerr << "size error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CflError& e) {
    std::cerr << "step rejected: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
