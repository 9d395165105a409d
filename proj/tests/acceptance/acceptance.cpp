// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "csflock/bench.hpp"
#include "csflock/elliptic.hpp"
#include "csflock/errors.hpp"
#include "csflock/hyperbolic.hpp"
#include "csflock/kernels.hpp"
#include "csflock/macro.hpp"
#include "csflock/particles.hpp"
#include "oracles.hpp"

using namespace csflock;

namespace {

const double kL = 2.0 * std::numbers::pi;
// mpmath, 30 digits.
constexpr double kK0AtOne = 0.421024438240708333336;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> check;
};

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

std::vector<double> sampled_density(const Grid1D& grid) {
  std::vector<double> f(grid.cells());
  for (int i = 0; i < grid.cells(); ++i) f[i] = initial_density(grid.center(i), grid.length());
  return f;
}

Outcome green_identity() {
  const auto kernel = KernelSpec::bounded_1d(4.0, 1.0, kL);
  auto error = [&](int n) {
    const Grid1D grid(kL, n);
    const std::vector<double> zero(n, 0.0);
    double worst = 0.0;
    for (int j : {n / 4, n / 2, 3 * n / 4}) {
      std::vector<double> impulse(n, 0.0);
      impulse[j] = 1.0 / grid.dx();
      const AuxFields aux = solve_aux(grid, impulse, zero, 4.0, 1.0);
      for (int i = 0; i < n; ++i) {
        if (std::abs(i - j) <= 1) continue;
        const double exact = eval_bounded_1d(kernel, grid.center(i), grid.center(j));
        worst = std::max(worst, std::abs(aux.y2[i] - exact));
      }
    }
    return worst;
  };
  const double e300 = error(300), e600 = error(600);
  const double ratio = e300 / e600;
  return {within(ratio, 3.5, 4.5),
          fmt::format("err(300)={:.3e} err(600)={:.3e} ratio={:.3f} (need 3.5..4.5)", e300, e600,
                      ratio)};
}

Outcome oracle_equivalence() {
  const auto kernel = KernelSpec::bounded_1d(4.0, 1.0, kL);
  auto gap = [&](int n) {
    const Grid1D grid(kL, n);
    const auto rho = sampled_density(grid);
    const std::vector<double> zero(n, 0.0);
    const auto fd = solve_aux(grid, rho, zero, 4.0, 1.0).y2;
    const auto sum = riemann_oracle(grid, rho, kernel);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(fd[i] - sum[i]));
    return worst;
  };
  const double e300 = gap(300), e600 = gap(600);
  const double ratio = e300 / e600;
  return {e600 <= 1e-3 && within(ratio, 3.5, 4.5),
          fmt::format("Linf(600)={:.3e} (need <=1e-3) ratio={:.3f} (need 3.5..4.5)", e600,
                      ratio)};
}

Outcome conservation() {
  const SimConfig config;  // defaults: n=600, dt=0.001, t_end=5
  const MacroRun run = run_macro(config);
  const auto& mass = run.series.total_mass;
  const auto& mom = run.series.total_momentum;
  double mass_drift = 0.0, mom_drift = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    mass_drift = std::max(mass_drift, std::abs(mass[i] - mass.front()) / mass.front());
    mom_drift = std::max(mom_drift, std::abs(mom[i] - mom.front()));
  }
  return {mass_drift <= 1e-12 && mom_drift <= 1e-10,
          fmt::format("steps={} mass rel drift={:.2e} (need <=1e-12) momentum abs drift={:.2e} "
                      "(need <=1e-10)",
                      mass.size() - 1, mass_drift, mom_drift)};
}

Outcome self_adjointness() {
  const Grid1D grid(kL, 600);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    std::vector<double> rho(600), m(600);
    for (int i = 0; i < 600; ++i) {
      rho[i] = std::abs(g(rng));
      m[i] = g(rng);
    }
    const AuxFields aux = solve_aux(grid, rho, m, 4.0, 1.0);
    double sum = 0.0, scale = 0.0;
    for (int i = 0; i < 600; ++i) {
      sum += (rho[i] * aux.y1[i] - m[i] * aux.y2[i]) * grid.dx();
      scale += (std::abs(rho[i] * aux.y1[i]) + std::abs(m[i] * aux.y2[i])) * grid.dx();
    }
    worst = std::max(worst, std::abs(sum) / scale);
  }
  return {worst <= 1e-12,
          fmt::format("100 pairs, max |sum|/scale={:.2e} (need <=1e-12)", worst)};
}

Outcome flocking_decay() {
  const auto kernel = KernelSpec::free_1d(4.0, 1.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  std::vector<double> x(200), v(200);
  for (auto& e : x) e = u(rng);
  for (auto& e : v) e = u(rng);
  ParticleEnsemble ens = to_fluctuation_frame(ParticleEnsemble(1, x, v));
  // Velocities at half the admissible threshold, which depends on positions only.
  const FlockingDecision probe = check_flocking_condition(ens, kernel);
  for (auto& e : ens.velocities) e *= 0.5 * probe.threshold / probe.v0_norm;
  const FlockingDecision decision = check_flocking_condition(ens, kernel);
  if (!decision.guaranteed) return {false, "initial data does not meet the flocking condition"};

  ParticleRunOptions options;
  options.kernel = kernel;
  options.dt = 0.001;
  options.t_end = 10.0;
  options.snapshot_every = 10;
  const ParticleRun run = run_particles(ens, options);
  double worst_v = 0.0, worst_x = 0.0;
  for (const FlockReport& r : run.reports) {
    worst_v = std::max(worst_v, r.v_norm / (decision.v0_norm * std::exp(-decision.decay_rate * r.t)));
    worst_x = std::max(worst_x, r.x_norm / decision.x_bar);
  }
  return {worst_v <= 1.0 + 1e-6 && worst_x <= 1.0,
          fmt::format("N=200 reports={} v0={:.3e} threshold={:.3e} rate={:.4f} "
                      "max v/bound={:.4f} max x/xbar={:.4f} (need <=1+1e-6, <=1)",
                      run.reports.size(), decision.v0_norm, decision.threshold,
                      decision.decay_rate, worst_v, worst_x)};
}

Outcome particle_macro_agreement() {
  const SimConfig config;  // N=1e4, n=600, k=4, lambda=1, c=0.5
  const Grid1D grid(config.L, config.n);
  const MacroRun macro = run_macro(config);
  const ParticleRun particles = run_particles(config);

  bool l1_ok = true;
  std::string l1_text;
  for (std::size_t s = 0; s < macro.snapshots.size(); ++s) {
    const double t = macro.snapshots[s].state.t;
    const bool wanted = std::abs(t - 0.5) < 1e-9 || std::abs(t - 1.0) < 1e-9 ||
                        std::abs(t - 2.0) < 1e-9;
    if (!wanted) continue;
    const L1Distance d = compare(macro.snapshots[s].state, bin_particles(particles.snapshots[s], grid), grid);
    l1_ok = l1_ok && d.rho <= 0.05;
    l1_text += fmt::format(" t={}:{:.4f}", t, d.rho);
  }

  // Velocity over the support, cells with rho above 10 * rho_floor.
  const double floor = 10.0 * config.rho_floor;
  const double u0 = max_speed(macro.snapshots.front().state, floor);
  const double u5 = max_speed(macro.snapshots.back().state, floor);
  const double macro_ratio = u5 / u0;
  // Same ratio restricted to the bulk, rho above 1e-3 of its peak, for context.
  auto bulk_speed = [](const FieldState& st) {
    const double peak = *std::max_element(st.rho.begin(), st.rho.end());
    return max_speed(st, 1e-3 * peak);
  };
  const double bulk_ratio =
      bulk_speed(macro.snapshots.back().state) / bulk_speed(macro.snapshots.front().state);
  const double particle_ratio =
      max_abs(particles.snapshots.back().velocities) / max_abs(particles.snapshots.front().velocities);
  return {l1_ok && macro_ratio <= 0.05,
          fmt::format("L1(rho){} (need <=0.05); max|u|(5)/max|u|(0): macro={:.4f} "
                      "particles={:.4f} (need <=0.05); macro bulk={:.4f}",
                      l1_text, macro_ratio, particle_ratio, bulk_ratio)};
}

Outcome benchmark_shape() {
  const std::vector<int> sizes{512, 1024, 2048, 4096};
  std::vector<double> ns, fd, riemann;
  BenchRow last;
  for (int n : sizes) {
    last = bench_nonlocal(n);
    ns.push_back(n);
    fd.push_back(last.fd_nanos);
    riemann.push_back(last.riemann_nanos);
  }
  const double fd_slope = loglog_slope(ns, fd);
  const double riemann_slope = loglog_slope(ns, riemann);
  return {last.ratio >= 10.0 && std::abs(fd_slope - 1.0) <= 0.3 &&
              std::abs(riemann_slope - 2.0) <= 0.3,
          fmt::format("ratio(4096)={:.1f} (need >=10) fd slope={:.2f} (need 0.7..1.3) riemann "
                      "slope={:.2f} (need 1.7..2.3)",
                      last.ratio, fd_slope, riemann_slope)};
}

Outcome integrator_orders() {
  // SSP-RK2 on the coupled system, smooth data before any steepening.
  const Grid1D grid(kL, 200);
  const AuxProvider provider = [&](const FieldState& s) {
    return solve_aux(grid, s.rho, s.m, 4.0, 1.0);
  };
  auto macro = [&](double dt) {
    FieldState s = init_fields(grid, 0.5);
    const long steps = std::lround(0.2 / dt);
    for (long i = 0; i < steps; ++i) s = ssp_rk2_step(s, grid, dt, provider);
    return s;
  };
  auto field_gap = [](const FieldState& a, const FieldState& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      m = std::max({m, std::abs(a.rho[i] - b.rho[i]), std::abs(a.m[i] - b.m[i])});
    }
    return m;
  };
  const FieldState r1 = macro(0.02), r2 = macro(0.01), r3 = macro(0.005);
  const double rk_ratio = field_gap(r1, r2) / field_gap(r2, r3);

  // Velocity Verlet on the particle system over a fixed horizon.
  const auto kernel = KernelSpec::free_1d(4.0, 1.0);
  const ParticleEnsemble start = sample_initial_ensemble(50, kL, 0.5, 1, Sampling::Midpoint);
  auto particles = [&](double dt) {
    ParticleEnsemble e = start;
    const long steps = std::lround(1.0 / dt);
    for (long i = 0; i < steps; ++i) e = verlet_step(e, kernel, dt, Summation::Direct);
    return e;
  };
  auto ensemble_gap = [](const ParticleEnsemble& a, const ParticleEnsemble& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.positions.size(); ++i) {
      m = std::max({m, std::abs(a.positions[i] - b.positions[i]),
                    std::abs(a.velocities[i] - b.velocities[i])});
    }
    return m;
  };
  const ParticleEnsemble p1 = particles(0.02), p2 = particles(0.01), p3 = particles(0.005);
  const double verlet_ratio = ensemble_gap(p1, p2) / ensemble_gap(p2, p3);

  // One-step error against a fine RK4 reference, reported for context.
  auto one_step = [&](double dt) {
    std::vector<double> x = start.positions, v = start.velocities;
    oracle::rk4_cs_1d(x, v, dt, 100, [](double a, double b) {
      return 4.0 * std::exp(-std::abs(a - b));
    });
    const ParticleEnsemble got = verlet_step(start, kernel, dt, Summation::Direct);
    return ensemble_gap(got, ParticleEnsemble(1, x, v));
  };
  const double local_ratio = one_step(0.02) / one_step(0.01);

  return {within(rk_ratio, 3.3, 4.7) && within(verlet_ratio, 3.3, 4.7),
          fmt::format("rk2 ratio={:.3f} verlet ratio={:.3f} (need 3.3..4.7); verlet one-step "
                      "error ratio={:.3f}",
                      rk_ratio, verlet_ratio, local_ratio)};
}

Outcome kernel_suite() {
  const auto free = KernelSpec::free_1d(4.0, 1.0);
  const auto bounded = KernelSpec::bounded_1d(4.0, 1.0, kL);
  const auto rational = KernelSpec::rational(1.0, 1.0);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-kL / 2, kL / 2);
  int symmetry = 0, positivity = 0, domination = 0, boundary = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng), s = u(rng);
    for (const auto* k : {&free, &bounded, &rational}) {
      if (evaluate(*k, x, s) != evaluate(*k, s, x)) ++symmetry;
      if (!(evaluate(*k, x, s) > 0.0)) ++positivity;
    }
    if (evaluate(bounded, x, s) > evaluate(free, x, s)) ++domination;
    if (eval_bounded_1d(bounded, -kL / 2, s) != 0.0 || eval_bounded_1d(bounded, kL / 2, s) != 0.0) {
      ++boundary;
    }
  }

  double ball_sym = 0.0, ball_edge = 0.0;
  for (int d : {2, 3}) {
    const auto ball = KernelSpec::bessel_ball(1.0, 0.5, 1.0, d);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> radius(0.05, 0.95);
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> x(d), s(d), e(d);
      double nx = 0.0, ns = 0.0, ne = 0.0;
      for (int c = 0; c < d; ++c) {
        x[c] = g(rng);
        s[c] = g(rng);
        e[c] = g(rng);
        nx += x[c] * x[c];
        ns += s[c] * s[c];
        ne += e[c] * e[c];
      }
      const double rx = radius(rng), rs = radius(rng);
      for (int c = 0; c < d; ++c) {
        x[c] *= rx / std::sqrt(nx);
        s[c] *= rs / std::sqrt(ns);
        e[c] /= std::sqrt(ne);
      }
      const double a = eval_bessel_ball(ball, x, s), b = eval_bessel_ball(ball, s, x);
      ball_sym = std::max(ball_sym, std::abs(a - b) / std::max(1.0, std::abs(a)));
      ball_edge = std::max(ball_edge, std::abs(eval_bessel_ball(ball, x, e)));
    }
  }

  const auto ball3 = KernelSpec::bessel_ball(1.0, 1.0, 1.0, 3);
  double closed_form = 0.0;
  for (double rho : {0.01, 0.1, 0.5, 1.0, 3.0}) {
    const double expected = std::pow(1.0 / (2.0 * std::numbers::pi), 1.5) * std::sqrt(1.0 / rho) *
                            std::sqrt(std::numbers::pi / (2.0 * rho)) * std::exp(-rho);
    closed_form = std::max(closed_form, std::abs(bessel_radial(ball3, rho) - expected) / expected);
  }

  const double integral = oracle::gauss_legendre(
      [](double t) { return std::exp(-std::cosh(t)); }, 0.0, 7.0, 400);
  const double bessel_err = std::abs(bessel_k(0.0, 1.0) - integral) / integral;
  const bool integral_ok = std::abs(integral - kK0AtOne) <= 1e-13;

  const bool pass = symmetry == 0 && positivity == 0 && domination == 0 && boundary == 0 &&
                    ball_sym <= 1e-12 && ball_edge <= 1e-12 && closed_form <= 1e-12 &&
                    bessel_err <= 1e-7 && integral_ok;
  return {pass, fmt::format("violations sym={} pos={} dom={} edge={}; ball sym={:.1e} edge={:.1e}; "
                            "d=3 closed form rel={:.1e}; K0(1) rel={:.1e} (need <=1e-7)",
                            symmetry, positivity, domination, boundary, ball_sym, ball_edge,
                            closed_form, bessel_err)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "Green's-function identity", 1.0, green_identity},
      {"AC2", "FD vs Riemann-sum equivalence", 5.0, oracle_equivalence},
      {"AC3", "mass and momentum conservation", 60.0, conservation},
      {"AC4", "discrete self-adjointness", 1.0, self_adjointness},
      {"AC5", "flocking decay bound", 30.0, flocking_decay},
      {"AC6", "particle-macro agreement", 300.0, particle_macro_agreement},
      {"AC7", "benchmark complexity separation", 120.0, benchmark_shape},
      {"AC8", "Verlet and RK2 self-convergence", 30.0, integrator_orders},
      {"AC9", "kernel suite", 10.0, kernel_suite},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.limit_seconds;
    const bool pass = out.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s %s %s: %s [%.2fs, limit %.0fs%s]\n", c.id, pass ? "PASS" : "FAIL", c.title,
                out.detail.c_str(), seconds, c.limit_seconds, in_time ? "" : ", too slow");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
