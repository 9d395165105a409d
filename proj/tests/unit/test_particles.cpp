#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "csflock/errors.hpp"
#include "csflock/particles.hpp"
#include "oracles.hpp"

using namespace csflock;

namespace {

// mpmath: (-4 e^-1 - 8 e^-2) / 3.
constexpr double kThreeBodyA1 = -0.851400010192890273845;

const double kPi = std::numbers::pi;

ParticleEnsemble random_ensemble(std::size_t n, int dim, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<double> x(n * dim), v(n * dim);
  for (auto& e : x) e = u(rng);
  for (auto& e : v) e = 0.5 * u(rng);
  return ParticleEnsemble(dim, x, v);
}

double total(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double e : v) s += e;
  return static_cast<double>(s);
}

std::function<double(double, double)> free_psi(double k, double lambda) {
  return [=](double a, double b) { return k / lambda * std::exp(-lambda * std::abs(a - b)); };
}

}  // namespace

TEST_CASE("ensemble validation") {
  CHECK_THROWS_AS(ParticleEnsemble(1, {0.0, 1.0}, {0.0}), DomainError);
  CHECK_THROWS_AS(ParticleEnsemble(4, {0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 2.0, 3.0}), DomainError);
  CHECK_THROWS_AS(ParticleEnsemble(1, {NAN}, {0.0}), DomainError);
  CHECK_THROWS_AS(ParticleEnsemble(1, {}, {}), DomainError);
  CHECK(ParticleEnsemble(2, {0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 2.0, 3.0}).size() == 2);
}

TEST_CASE("acceleration examples") {
  const auto kernel = KernelSpec::free_1d(4.0, 1.0);
  const ParticleEnsemble three(1, {-1.0, 0.0, 1.0}, {1.0, 0.0, -1.0});
  const auto a = cs_acceleration(three, kernel);
  CHECK(a[0] == doctest::Approx(kThreeBodyA1).epsilon(1e-15));
  CHECK(a[1] == 0.0);
  CHECK(a[2] == -a[0]);
  const auto ref = oracle::cs_acceleration_1d({-1.0, 0.0, 1.0}, {1.0, 0.0, -1.0}, free_psi(4.0, 1.0));
  for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(ref[i]).epsilon(1e-15));

  const ParticleEnsemble uniform(1, {-2.0, 0.3, 1.0, 5.0}, {0.7, 0.7, 0.7, 0.7});
  for (double e : cs_acceleration(uniform, kernel)) CHECK(e == 0.0);

  const ParticleEnsemble pair(1, {-0.4, 1.1}, {0.9, -0.3});
  const auto p = cs_acceleration(pair, KernelSpec::rational(1.0, 0.5));
  CHECK(p[0] == -p[1]);
}

TEST_CASE("acceleration in two dimensions against a pair loop") {
  const auto ens = random_ensemble(30, 2, 1.0, 4);
  const auto kernel = KernelSpec::rational(2.0, 1.5, 2);
  const auto a = cs_acceleration(ens, kernel);
  for (std::size_t i = 0; i < 30; ++i) {
    for (int c = 0; c < 2; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < 30; ++j) {
        const double dx = ens.positions[2 * j] - ens.positions[2 * i];
        const double dy = ens.positions[2 * j + 1] - ens.positions[2 * i + 1];
        acc += 2.0 / std::pow(1.0 + dx * dx + dy * dy, 1.5) *
               (ens.velocities[2 * j + c] - ens.velocities[2 * i + c]);
      }
      CHECK(a[2 * i + c] == doctest::Approx(acc / 30.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("sorted summation equals the pair loop") {
  const auto bounded = KernelSpec::bounded_1d(4.0, 1.0, 2.0 * kPi);
  const auto free = KernelSpec::free_1d(4.0, 2.0);
  for (std::size_t n : {2u, 7u, 200u, 1000u}) {
    const auto ens = random_ensemble(n, 1, 3.0, n);
    for (const auto& kernel : {bounded, free}) {
      const auto direct = cs_acceleration(ens, kernel, Summation::Direct);
      const auto sorted = cs_acceleration(ens, kernel, Summation::Sorted);
      double scale = 0.0;
      for (double e : direct) scale = std::max(scale, std::abs(e));
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(sorted[i] - direct[i]) <= 1e-12 * scale);
    }
  }
  const auto ens = random_ensemble(10, 1, 1.0, 1);
  CHECK_THROWS_AS(cs_acceleration(ens, KernelSpec::rational(1.0, 1.0), Summation::Sorted),
                  DomainError);
}

TEST_CASE("out-of-domain particle is reported by index") {
  const auto kernel = KernelSpec::bounded_1d(4.0, 1.0, 2.0);
  for (auto summation : {Summation::Direct, Summation::Sorted}) {
    const ParticleEnsemble ens(1, {0.0, 0.5, 1.5, -0.2}, {0.0, 0.0, 0.0, 0.0});
    try {
      cs_acceleration(ens, kernel, summation);
      FAIL("expected ParticleDomainError");
    } catch (const ParticleDomainError& e) {
      CHECK(e.index() == 2);
    }
  }
}

TEST_CASE("verlet free streaming and rigid translation") {
  const InteractionFn none = [](std::span<const double>, std::span<const double>) { return 0.0; };
  const auto ens = random_ensemble(12, 2, 1.0, 8);
  const auto next = verlet_step(ens, none, 0.1);
  for (std::size_t i = 0; i < ens.positions.size(); ++i) {
    CHECK(next.positions[i] == doctest::Approx(ens.positions[i] + 0.1 * ens.velocities[i]));
    CHECK(next.velocities[i] == ens.velocities[i]);
  }
  CHECK(next.t == doctest::Approx(0.1));

  const ParticleEnsemble flock(1, {-1.0, 0.0, 2.0}, {0.4, 0.4, 0.4});
  const auto moved = verlet_step(flock, KernelSpec::free_1d(4.0, 1.0), 0.05);
  for (int i = 0; i < 3; ++i) {
    CHECK(moved.velocities[i] == 0.4);
    CHECK(moved.positions[i] == doctest::Approx(flock.positions[i] + 0.02));
  }
}

TEST_CASE("verlet one-step error is second order against a fine RK4 reference") {
  const auto kernel = KernelSpec::free_1d(4.0, 1.0);
  const std::vector<double> x0{-0.5, 0.5}, v0{1.0, -1.0};
  const ParticleEnsemble pair(1, x0, v0);
  auto step_error = [&](double dt) {
    const auto got = verlet_step(pair, kernel, dt);
    auto x = x0, v = v0;
    oracle::rk4_cs_1d(x, v, dt, 100, free_psi(4.0, 1.0));
    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      err = std::max({err, std::abs(got.positions[i] - x[i]), std::abs(got.velocities[i] - v[i])});
    }
    return err;
  };
  const double e1 = step_error(0.04), e2 = step_error(0.02), e3 = step_error(0.01);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.15));
  CHECK(flock_metrics(verlet_step(pair, kernel, 0.01)).v_norm < flock_metrics(pair).v_norm);
}

TEST_CASE("centroid and fluctuation frame") {
  const ParticleEnsemble one(2, {0.3, -0.2}, {1.0, 2.0});
  const auto c1 = centroid(one);
  CHECK(c1.x_c == std::vector<double>{0.3, -0.2});
  CHECK(c1.v_c == std::vector<double>{1.0, 2.0});

  const ParticleEnsemble mirror(1, {-2.0, -1.0, 1.0, 2.0}, {0.5, -0.3, 0.3, -0.5});
  const auto cm = centroid(mirror);
  CHECK(cm.x_c[0] == 0.0);
  CHECK(cm.v_c[0] == 0.0);

  const auto ens = random_ensemble(50, 3, 10.0, 12);
  const auto once = to_fluctuation_frame(ens);
  const auto twice = to_fluctuation_frame(once);
  const auto c = centroid(once);
  for (int d = 0; d < 3; ++d) {
    CHECK(std::abs(c.x_c[d]) <= 1e-12 * 10.0);
    CHECK(std::abs(c.v_c[d]) <= 1e-12 * 10.0);
  }
  for (std::size_t i = 0; i < ens.positions.size(); ++i) {
    CHECK(twice.positions[i] == doctest::Approx(once.positions[i]).epsilon(1e-12).scale(10.0));
  }
}

TEST_CASE("flock metrics") {
  const ParticleEnsemble ens(1, {-1.0, 1.0}, {-0.5, 0.5});
  const auto r = flock_metrics(ens);
  CHECK(r.x_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r.v_norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(r.max_pair_dist == 2.0);
  CHECK(std::isnan(r.lyapunov));

  const ParticleEnsemble consensus(1, {-1.0, 0.0, 4.0}, {2.0, 2.0, 2.0});
  CHECK(flock_metrics(consensus).v_norm == 0.0);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = flock_metrics(random_ensemble(25, 2, 3.0, seed));
    CHECK(m.max_pair_dist <= 2.0 * m.x_norm);
  }

  // phi = 1 gives V = |v| + |x|.
  const auto with_phi = flock_metrics(ens, [](double) { return 1.0; });
  CHECK(with_phi.lyapunov == doctest::Approx(std::sqrt(0.5) + std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("flocking condition for a free-space pair") {
  const auto kernel = KernelSpec::free_1d(4.0, 1.0);
  const double s = std::sqrt(0.5);
  const ParticleEnsemble calm(1, {0.0, 0.0}, {-s, s});
  const auto yes = check_flocking_condition(calm, kernel);
  CHECK(yes.threshold == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(yes.v0_norm == doctest::Approx(1.0));
  CHECK(yes.guaranteed);
  // 1 = int_0^xbar 4 e^{-2s} ds  =>  xbar = ln(2) / 2, rate phi(xbar) = 4 e^{-2 xbar} = 2.
  CHECK(yes.x_bar == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-7));
  CHECK(yes.decay_rate == doctest::Approx(2.0).epsilon(1e-6));

  const double big = 10.0 / std::sqrt(2.0);
  const ParticleEnsemble wild(1, {0.0, 0.0}, {-big, big});
  const auto no = check_flocking_condition(wild, kernel);
  CHECK_FALSE(no.guaranteed);
  CHECK(std::isnan(no.x_bar));
}

TEST_CASE("bounded-domain confinement rate and bound checks") {
  const auto kernel = KernelSpec::bounded_1d(4.0, 1.0, 2.0 * kPi);
  const ParticleEnsemble ens(1, {-0.2, 0.2}, {0.05, -0.05});
  CHECK_THROWS_AS(check_flocking_condition(ens, kernel, kPi), InvalidBoundError);
  CHECK_THROWS_AS(check_flocking_condition(ens, kernel, -0.1), InvalidBoundError);

  const double x_M = 2.0;
  const auto phi = confinement_rate(kernel, 2, x_M);
  // The minorant sits below the kernel at every admissible pair of that separation.
  for (double sep = 0.0; sep <= x_M; sep += 0.1) {
    const double rate = phi(sep / 2.0);
    for (double a = -x_M; a + sep <= x_M + 1e-12; a += 0.05) {
      CHECK(rate <= (2.0 / 2.0) * eval_bounded_1d(kernel, a, std::min(a + sep, x_M)) * (1 + 1e-12));
    }
  }
  const auto decision = check_flocking_condition(ens, kernel, x_M);
  CHECK(decision.guaranteed);
  CHECK(decision.x_bar <= x_M / 2.0);
}

TEST_CASE("guaranteed flocking run obeys the decay bound") {
  const auto kernel = KernelSpec::free_1d(4.0, 1.0);
  auto ens = to_fluctuation_frame(random_ensemble(40, 1, 0.3, 21));
  // The threshold depends on positions only; scale velocities to half of it.
  const auto probe = check_flocking_condition(ens, kernel);
  for (auto& v : ens.velocities) v *= 0.5 * probe.threshold / probe.v0_norm;
  const auto decision = check_flocking_condition(ens, kernel);
  REQUIRE(decision.guaranteed);

  ParticleRunOptions options;
  options.kernel = kernel;
  options.dt = 0.01;
  options.t_end = 5.0;
  options.snapshot_every = 10;
  const auto run = run_particles(ens, options);
  double prev_v = INFINITY, prev_V = INFINITY;
  for (const auto& r : run.reports) {
    CHECK(r.v_norm <= decision.v0_norm * std::exp(-decision.decay_rate * r.t) * (1 + 1e-6));
    CHECK(r.x_norm <= decision.x_bar * (1 + 1e-6));
    CHECK(r.v_norm <= prev_v);
    CHECK(r.lyapunov <= prev_V * (1 + 1e-12));
    prev_v = r.v_norm;
    prev_V = r.lyapunov;
  }
}

TEST_CASE("momentum, centroid linearity and frame equivariance over 1000 steps") {
  const auto kernel = KernelSpec::bounded_1d(4.0, 1.0, 2.0 * kPi);
  auto ens = random_ensemble(100, 1, 1.0, 33);
  for (auto& v : ens.velocities) v += 0.1;
  const auto c0 = centroid(ens);
  const double p0 = total(ens.velocities);
  double vmax = 0.0;
  for (double v : ens.velocities) vmax = std::max(vmax, std::abs(v));

  auto lab = ens;
  auto frame = to_fluctuation_frame(ens);
  const double dt = 0.001;
  for (int step = 0; step < 1000; ++step) {
    lab = verlet_step(lab, kernel, dt, Summation::Direct);
    frame = verlet_step(frame, kernel, dt, Summation::Direct);
  }
  CHECK(std::abs(total(lab.velocities) - p0) <= 1e-10 * std::abs(p0));
  const auto c1 = centroid(lab);
  CHECK(std::abs(c1.x_c[0] - c0.x_c[0] - lab.t * c0.v_c[0]) <= 1e-8 * vmax);

  // Simulating then centering equals centering then simulating. The bounded
  // kernel is not translation invariant, so compare with a free kernel.
  const auto free = KernelSpec::free_1d(4.0, 1.0);
  auto a = ens, b = to_fluctuation_frame(ens);
  for (int step = 0; step < 1000; ++step) {
    a = verlet_step(a, free, dt, Summation::Direct);
    b = verlet_step(b, free, dt, Summation::Direct);
  }
  const auto a_hat = to_fluctuation_frame(a);
  for (std::size_t i = 0; i < ens.size(); ++i) {
    CHECK(std::abs(a_hat.positions[i] - b.positions[i]) <= 1e-10);
    CHECK(std::abs(a_hat.velocities[i] - b.velocities[i]) <= 1e-10);
  }
}

TEST_CASE("initial sampling") {
  const double L = 2.0 * kPi;
  const auto a = sample_initial_ensemble(1000, L, 0.5, 42);
  const auto b = sample_initial_ensemble(1000, L, 0.5, 42);
  CHECK(a.positions == b.positions);
  CHECK(a.velocities == b.velocities);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a.positions[i]) <= L / 2);
    CHECK(a.velocities[i] == initial_velocity(a.positions[i], L, 0.5));
  }
  const auto c = sample_initial_ensemble(1000, L, 0.5, 43);
  CHECK(c.positions != a.positions);
  // Midpoint strata land on the exact quantiles, which are symmetric about 0.
  const auto mid = sample_initial_ensemble(1000, L, 0.5, 0, Sampling::Midpoint);
  CHECK(std::abs(centroid(mid).x_c[0]) <= 1e-3);
  CHECK(initial_density(L / 2, L) == doctest::Approx(0.0).scale(1.0));
  CHECK(initial_density(0.0, L) == doctest::Approx(kPi / (2.0 * L)));
}

TEST_CASE("run records step zero, cadence and the final step") {
  ParticleRunOptions options;
  options.kernel = KernelSpec::free_1d(4.0, 1.0);
  options.dt = 0.01;
  options.t_end = 0.25;
  options.snapshot_every = 10;
  const auto run = run_particles(random_ensemble(5, 1, 1.0, 2), options);
  REQUIRE(run.reports.size() == 4);
  CHECK(run.reports[0].t == 0.0);
  CHECK(run.reports[1].t == doctest::Approx(0.1));
  CHECK(run.reports[3].t == doctest::Approx(0.25));
  CHECK(run.snapshots.size() == run.reports.size());
}
