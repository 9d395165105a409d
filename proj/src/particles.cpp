#include "csflock/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "csflock/errors.hpp"
#include "csflock/quadrature.hpp"

namespace csflock {

ParticleEnsemble::ParticleEnsemble(int dim, std::vector<double> positions,
                                   std::vector<double> velocities, double t)
    : dim(dim), positions(std::move(positions)), velocities(std::move(velocities)), t(t) {
  validate();
}

void ParticleEnsemble::validate() const {
  if (dim < 1 || dim > 3) throw DomainError("ensemble dimension must be 1, 2 or 3");
  if (positions.size() != velocities.size()) {
    throw DomainError("positions and velocities differ in length");
  }
  if (positions.empty() || positions.size() % static_cast<std::size_t>(dim) != 0) {
    throw DomainError("ensemble needs N >= 1 particles of dimension d");
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(positions.begin(), positions.end(), finite) ||
      !std::all_of(velocities.begin(), velocities.end(), finite)) {
    throw DomainError("ensemble contains non-finite entries");
  }
}

namespace {

void check_kernel_domain(const ParticleEnsemble& e, const KernelSpec& kernel) {
  if (kernel.variant == KernelVariant::Bounded1D) {
    if (e.dim != 1) throw DomainError("bounded1d kernel requires a 1D ensemble");
    const double half = 0.5 * kernel.L;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double x = e.positions[i];
      if (!(x >= -half && x <= half)) {
        throw ParticleDomainError(
            "particle " + std::to_string(i) + " at x = " + std::to_string(x) +
                " lies outside the kernel domain [-L/2, L/2]",
            i);
      }
    }
  } else if (kernel.variant == KernelVariant::BesselBall) {
    if (e.dim != kernel.d) throw DomainError("ensemble dimension differs from kernel d");
    const double r2 = kernel.r * kernel.r;
    for (std::size_t i = 0; i < e.size(); ++i) {
      double norm2 = 0.0;
      for (double c : e.position(i)) norm2 += c * c;
      if (!(norm2 < r2)) {
        throw ParticleDomainError("particle " + std::to_string(i) + " lies outside the ball", i);
      }
    }
  }
}

// Symmetric kernels: evaluate each pair once and apply it to both particles.
std::vector<double> direct_acceleration(const ParticleEnsemble& e, const KernelSpec& kernel) {
  const std::size_t n = e.size();
  const auto d = static_cast<std::size_t>(e.dim);
  std::vector<double> acc(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = evaluate(kernel, e.position(j), e.position(i));
      for (std::size_t c = 0; c < d; ++c) {
        const double dv = e.velocities[j * d + c] - e.velocities[i * d + c];
        acc[i * d + c] += w * dv;
        acc[j * d + c] -= w * dv;
      }
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& a : acc) a *= inv_n;
  return acc;
}

// Sweeps over particles sorted by position. Both 1D kernels factor into a
// function of the left point times a function of the right point, so the sum
// over all partners splits into a prefix and a suffix accumulation.
std::vector<double> sorted_acceleration(const ParticleEnsemble& e, const KernelSpec& kernel) {
  const std::size_t n = e.size();
  const auto& x = e.positions;
  const auto& v = e.velocities;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && a < b);
  });

  // below[p] / above[p]: weighted sums over partners left / right of sorted slot p,
  // for weights 1 (count) and v (momentum).
  std::vector<double> below_w(n, 0.0), below_v(n, 0.0), above_w(n, 0.0), above_v(n, 0.0);
  std::vector<double> acc(n, 0.0);
  const double lam = kernel.lambda;

  if (kernel.variant == KernelVariant::Free1D) {
    // exp(-lam |x_i - x_j|) telescopes through neighbor gaps without overflow.
    for (std::size_t p = 1; p < n; ++p) {
      const double decay = std::exp(-lam * (x[order[p]] - x[order[p - 1]]));
      below_w[p] = decay * (below_w[p - 1] + 1.0);
      below_v[p] = decay * (below_v[p - 1] + v[order[p - 1]]);
    }
    for (std::size_t p = n - 1; p-- > 0;) {
      const double decay = std::exp(-lam * (x[order[p + 1]] - x[order[p]]));
      above_w[p] = decay * (above_w[p + 1] + 1.0);
      above_v[p] = decay * (above_v[p + 1] + v[order[p + 1]]);
    }
    const double scale = kernel.k / lam / static_cast<double>(n);
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t i = order[p];
      acc[i] = scale * ((below_v[p] + above_v[p]) - v[i] * (below_w[p] + above_w[p]));
    }
    return acc;
  }

  // Bounded1D: G(x, s) = C sinh(lam (min + L/2)) sinh(lam (L/2 - max)).
  const double half = 0.5 * kernel.L;
  const double scale = 2.0 * kernel.k / (lam * std::sinh(lam * kernel.L)) / static_cast<double>(n);
  std::vector<double> f(n), g(n);
  for (std::size_t p = 0; p < n; ++p) {
    f[p] = std::sinh(lam * (x[order[p]] + half));
    g[p] = std::sinh(lam * (half - x[order[p]]));
  }
  for (std::size_t p = 1; p < n; ++p) {
    below_w[p] = below_w[p - 1] + f[p - 1];
    below_v[p] = below_v[p - 1] + f[p - 1] * v[order[p - 1]];
  }
  for (std::size_t p = n - 1; p-- > 0;) {
    above_w[p] = above_w[p + 1] + g[p + 1];
    above_v[p] = above_v[p + 1] + g[p + 1] * v[order[p + 1]];
  }
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t i = order[p];
    const double sum_w = g[p] * below_w[p] + f[p] * above_w[p];
    const double sum_v = g[p] * below_v[p] + f[p] * above_v[p];
    acc[i] = scale * (sum_v - v[i] * sum_w);
  }
  return acc;
}

bool sorted_supported(const ParticleEnsemble& e, const KernelSpec& kernel) {
  if (e.dim != 1) return false;
  if (kernel.variant == KernelVariant::Free1D) return true;
  // sinh(lambda L) overflows double beyond ~710.
  return kernel.variant == KernelVariant::Bounded1D && kernel.lambda * kernel.L <= 600.0;
}

}  // namespace

std::vector<double> cs_acceleration(const ParticleEnsemble& ensemble, const KernelSpec& kernel,
                                    Summation summation) {
  check_kernel_domain(ensemble, kernel);
  const bool can_sort = sorted_supported(ensemble, kernel);
  if (summation == Summation::Sorted && !can_sort) {
    throw DomainError("sorted summation needs a 1D free1d or bounded1d kernel");
  }
  const bool use_sorted =
      summation == Summation::Sorted || (summation == Summation::Auto && can_sort &&
                                         ensemble.size() >= 64);
  return use_sorted ? sorted_acceleration(ensemble, kernel) : direct_acceleration(ensemble, kernel);
}

std::vector<double> cs_acceleration(const ParticleEnsemble& e, const InteractionFn& psi) {
  const std::size_t n = e.size();
  const auto d = static_cast<std::size_t>(e.dim);
  std::vector<double> acc(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w = psi(e.position(j), e.position(i));
      for (std::size_t c = 0; c < d; ++c) {
        acc[i * d + c] += w * (e.velocities[j * d + c] - e.velocities[i * d + c]);
      }
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& a : acc) a *= inv_n;
  return acc;
}

namespace {

template <typename Accel>
ParticleEnsemble verlet_impl(const ParticleEnsemble& e, double dt, Accel&& accel) {
  if (!(dt > 0.0)) throw DomainError("time step must be > 0");
  const std::vector<double> a0 = accel(e);
  ParticleEnsemble mid = e;
  for (std::size_t k = 0; k < e.velocities.size(); ++k) {
    mid.velocities[k] = e.velocities[k] + 0.5 * dt * a0[k];
    mid.positions[k] = e.positions[k] + dt * mid.velocities[k];
  }
  mid.t = e.t + dt;
  const std::vector<double> a1 = accel(mid);
  ParticleEnsemble next = std::move(mid);
  for (std::size_t k = 0; k < e.velocities.size(); ++k) {
    next.velocities[k] = e.velocities[k] + 0.5 * dt * (a0[k] + a1[k]);
  }
  return next;
}

}  // namespace

ParticleEnsemble verlet_step(const ParticleEnsemble& ensemble, const KernelSpec& kernel, double dt,
                             Summation summation) {
  return verlet_impl(ensemble, dt, [&](const ParticleEnsemble& e) {
    return cs_acceleration(e, kernel, summation);
  });
}

ParticleEnsemble verlet_step(const ParticleEnsemble& ensemble, const InteractionFn& psi,
                             double dt) {
  return verlet_impl(ensemble, dt,
                     [&](const ParticleEnsemble& e) { return cs_acceleration(e, psi); });
}

CentroidState centroid(const ParticleEnsemble& e) {
  const auto d = static_cast<std::size_t>(e.dim);
  CentroidState c{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      c.x_c[k] += e.positions[i * d + k];
      c.v_c[k] += e.velocities[i * d + k];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(e.size());
  for (std::size_t k = 0; k < d; ++k) {
    c.x_c[k] *= inv_n;
    c.v_c[k] *= inv_n;
  }
  return c;
}

ParticleEnsemble to_fluctuation_frame(const ParticleEnsemble& e) {
  const CentroidState c = centroid(e);
  const auto d = static_cast<std::size_t>(e.dim);
  ParticleEnsemble out = e;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      out.positions[i * d + k] -= c.x_c[k];
      out.velocities[i * d + k] -= c.v_c[k];
    }
  }
  return out;
}

FlockReport flock_metrics(const ParticleEnsemble& ensemble, const RateFunction& phi) {
  FlockReport report;
  report.t = ensemble.t;
  report.centroid = centroid(ensemble);
  const ParticleEnsemble hat = to_fluctuation_frame(ensemble);
  double xx = 0.0, vv = 0.0;
  for (double x : hat.positions) xx += x * x;
  for (double v : hat.velocities) vv += v * v;
  report.x_norm = std::sqrt(xx);
  report.v_norm = std::sqrt(vv);

  const std::size_t n = hat.size();
  if (hat.dim == 1) {
    const auto [lo, hi] = std::minmax_element(hat.positions.begin(), hat.positions.end());
    report.max_pair_dist = *hi - *lo;
  } else {
    const auto d = static_cast<std::size_t>(hat.dim);
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double dist2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double diff = hat.positions[i * d + k] - hat.positions[j * d + k];
          dist2 += diff * diff;
        }
        best = std::max(best, dist2);
      }
    }
    report.max_pair_dist = std::sqrt(best);
  }
  report.lyapunov = phi ? report.v_norm + adaptive_simpson(phi, 0.0, report.x_norm, 1e-9)
                        : std::numeric_limits<double>::quiet_NaN();
  return report;
}

RateFunction confinement_rate(const KernelSpec& kernel, std::size_t N, std::optional<double> x_M) {
  const double weight = 2.0 / static_cast<double>(N);
  if (kernel.variant == KernelVariant::Bounded1D) {
    if (!x_M) throw InvalidBoundError("bounded1d confinement rate needs x_M");
    const double bound = *x_M;
    return [kernel, weight, bound](double s) {
      const double sep = 2.0 * s;
      if (sep > 2.0 * bound) return 0.0;
      // log G is concave along a fixed separation, so the minimum over
      // [-x_M, x_M] sits at an end of the admissible range.
      return weight * std::min(eval_bounded_1d(kernel, -bound, -bound + sep),
                               eval_bounded_1d(kernel, bound - sep, bound));
    };
  }
  if (kernel.variant == KernelVariant::BesselBall) {
    throw DomainError("no confinement rate for the bessel_ball kernel");
  }
  return [kernel, weight](double s) { return weight * radial_profile(kernel, 2.0 * s); };
}

std::optional<double> default_confinement_bound(const KernelSpec& kernel, double x0_norm) {
  const double half = 0.5 * kernel.L;
  if (2.0 * x0_norm >= half) return std::nullopt;
  return 0.5 * (2.0 * x0_norm + half);
}

FlockingDecision check_flocking_condition(const ParticleEnsemble& ensemble,
                                          const KernelSpec& kernel,
                                          std::optional<double> x_M) {
  const FlockReport initial = flock_metrics(ensemble);
  const double x0 = initial.x_norm;
  FlockingDecision decision;
  decision.v0_norm = initial.v_norm;
  decision.x_bar = std::numeric_limits<double>::quiet_NaN();

  RateFunction phi;
  double upper = std::numeric_limits<double>::infinity();
  if (kernel.variant == KernelVariant::Bounded1D) {
    if (x_M && !(*x_M >= 0.0 && *x_M < 0.5 * kernel.L)) {
      throw InvalidBoundError("confinement bound x_M must lie in [0, L/2)");
    }
    if (!x_M) x_M = default_confinement_bound(kernel, x0);
    if (!x_M) return decision;  // no admissible bound: nothing is guaranteed
    phi = confinement_rate(kernel, ensemble.size(), x_M);
    upper = 0.5 * *x_M;
  } else {
    phi = confinement_rate(kernel, ensemble.size());
  }

  const auto integral = [&](double b) { return adaptive_simpson(phi, x0, b, 1e-12); };
  if (std::isfinite(upper)) {
    decision.threshold = upper > x0 ? integral(upper) : 0.0;
  } else if (kernel.variant == KernelVariant::Rational && 2.0 * kernel.gamma <= 1.0) {
    decision.threshold = std::numeric_limits<double>::infinity();
  } else {
    decision.threshold = adaptive_simpson_to_infinity(phi, x0, 1e-12);
  }
  decision.guaranteed = decision.v0_norm < decision.threshold;
  if (!decision.guaranteed) return decision;

  // Bracket the confinement radius, then bisect int_{x0}^{x} phi = |v(0)|.
  double lo = x0;
  double hi = upper;
  if (!std::isfinite(hi)) {
    double step = std::max(1.0, x0);
    hi = x0 + step;
    while (integral(hi) < decision.v0_norm) {
      step *= 2.0;
      hi = x0 + step;
    }
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    (integral(mid) < decision.v0_norm ? lo : hi) = mid;
  }
  decision.x_bar = hi;
  decision.decay_rate = phi(decision.x_bar);
  return decision;
}

double initial_density(double x, double L) {
  if (std::abs(x) > 0.5 * L) return 0.0;
  return std::numbers::pi / (2.0 * L) * std::cos(std::numbers::pi * x / L);
}

double initial_velocity(double x, double L, double c) {
  if (std::abs(x) > 0.5 * L) return 0.0;
  return -c * std::sin(std::numbers::pi * x / L);
}

ParticleEnsemble sample_initial_ensemble(std::size_t N, double L, double c, std::uint64_t seed,
                                         Sampling sampling) {
  if (N == 0) throw DomainError("need at least one particle");
  constexpr std::size_t kTable = 10000;
  const double half = 0.5 * L;
  const double h = L / static_cast<double>(kTable - 1);
  std::vector<double> nodes(kTable), cdf(kTable, 0.0);
  for (std::size_t i = 0; i < kTable; ++i) nodes[i] = -half + h * static_cast<double>(i);
  nodes.back() = half;
  for (std::size_t i = 1; i < kTable; ++i) {
    cdf[i] = cdf[i - 1] +
             0.5 * (nodes[i] - nodes[i - 1]) *
                 (initial_density(nodes[i - 1], L) + initial_density(nodes[i], L));
  }
  for (double& value : cdf) value /= cdf.back();

  const auto invert = [&](double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.begin()) return nodes.front();
    if (it == cdf.end()) return nodes.back();
    const auto j = static_cast<std::size_t>(it - cdf.begin());
    const double frac = (u - cdf[j - 1]) / (cdf[j] - cdf[j - 1]);
    return nodes[j - 1] + frac * (nodes[j] - nodes[j - 1]);
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> x(N), v(N);
  const double inv_n = 1.0 / static_cast<double>(N);
  for (std::size_t i = 0; i < N; ++i) {
    double u = 0.0;
    switch (sampling) {
      case Sampling::Stratified: u = (static_cast<double>(i) + uniform(rng)) * inv_n; break;
      case Sampling::Random: u = uniform(rng); break;
      case Sampling::Midpoint: u = (static_cast<double>(i) + 0.5) * inv_n; break;
    }
    x[i] = std::clamp(invert(u), -half, half);
    v[i] = initial_velocity(x[i], L, c);
  }
  return ParticleEnsemble(1, std::move(x), std::move(v));
}

ParticleRun run_particles(const ParticleEnsemble& initial, const ParticleRunOptions& options) {
  initial.validate();
  options.kernel.validate();
  if (!(options.dt > 0.0) || !(options.t_end > 0.0)) {
    throw DomainError("dt and t_end must be > 0");
  }
  const long steps = std::max(1L, std::lround(options.t_end / options.dt));
  const long cadence = std::max(1, options.snapshot_every);

  RateFunction phi;
  if (options.kernel.variant == KernelVariant::Bounded1D) {
    const std::optional<double> bound =
        options.x_M ? options.x_M
                    : default_confinement_bound(options.kernel, flock_metrics(initial).x_norm);
    if (bound) phi = confinement_rate(options.kernel, initial.size(), bound);
  } else if (options.kernel.variant != KernelVariant::BesselBall) {
    phi = confinement_rate(options.kernel, initial.size());
  }

  ParticleRun run;
  const auto record = [&](const ParticleEnsemble& e) {
    run.reports.push_back(flock_metrics(e, phi));
    run.snapshots.push_back(options.fluctuation_frame ? to_fluctuation_frame(e) : e);
  };
  ParticleEnsemble state = initial;
  record(state);
  for (long step = 1; step <= steps; ++step) {
    state = verlet_step(state, options.kernel, options.dt, options.summation);
    state.t = initial.t + static_cast<double>(step) * options.dt;
    if (step % cadence == 0 || step == steps) record(state);
  }
  return run;
}

ParticleRun run_particles(const SimConfig& config) {
  config.validate();
  const ParticleEnsemble initial = sample_initial_ensemble(
      static_cast<std::size_t>(config.N), config.L, config.c, config.seed, config.sampling);
  ParticleRunOptions options;
  options.kernel = config.kernel;
  options.dt = config.dt;
  options.t_end = config.t_end;
  options.snapshot_every = config.snapshot_every;
  options.fluctuation_frame = config.fluctuation_frame;
  options.summation = config.summation;
  options.x_M = config.x_M;
  return run_particles(initial, options);
}

}  // namespace csflock
