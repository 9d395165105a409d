#include "csflock/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "csflock/errors.hpp"

namespace csflock {

std::string_view to_string(KernelVariant v) {
  switch (v) {
    case KernelVariant::Free1D: return "free1d";
    case KernelVariant::Bounded1D: return "bounded1d";
    case KernelVariant::Rational: return "rational";
    case KernelVariant::BesselBall: return "bessel_ball";
  }
  return "unknown";
}

KernelVariant parse_kernel_variant(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "free1d" || lower == "free") return KernelVariant::Free1D;
  if (lower == "bounded1d" || lower == "bounded") return KernelVariant::Bounded1D;
  if (lower == "rational") return KernelVariant::Rational;
  if (lower == "bessel_ball" || lower == "besselball" || lower == "bessel") {
    return KernelVariant::BesselBall;
  }
  throw DomainError("unknown kernel variant '" + std::string(name) + "'");
}

KernelSpec KernelSpec::free_1d(double k, double lambda) {
  KernelSpec s;
  s.variant = KernelVariant::Free1D;
  s.k = k;
  s.lambda = lambda;
  return s;
}

KernelSpec KernelSpec::bounded_1d(double k, double lambda, double L) {
  KernelSpec s;
  s.variant = KernelVariant::Bounded1D;
  s.k = k;
  s.lambda = lambda;
  s.L = L;
  return s;
}

KernelSpec KernelSpec::rational(double K, double gamma, int d) {
  KernelSpec s;
  s.variant = KernelVariant::Rational;
  s.K = K;
  s.gamma = gamma;
  s.d = d;
  return s;
}

KernelSpec KernelSpec::bessel_ball(double k, double lambda, double r, int d) {
  KernelSpec s;
  s.variant = KernelVariant::BesselBall;
  s.k = k;
  s.lambda = lambda;
  s.r = r;
  s.d = d;
  return s;
}

void KernelSpec::validate() const {
  if (d < 1 || d > 3) throw DomainError("kernel dimension must be 1, 2 or 3");
  switch (variant) {
    case KernelVariant::Free1D:
    case KernelVariant::Bounded1D:
    case KernelVariant::BesselBall:
      if (!(k > 0.0)) throw DomainError("kernel k must be > 0");
      if (!(lambda > 0.0)) throw DomainError("kernel lambda must be > 0");
      break;
    case KernelVariant::Rational:
      if (!(K > 0.0)) throw DomainError("kernel K must be > 0");
      if (!(gamma >= 0.0)) throw DomainError("kernel gamma must be >= 0");
      break;
  }
  if (variant == KernelVariant::Bounded1D) {
    if (!(L > 0.0)) throw DomainError("kernel L must be > 0");
    if (d != 1) throw DomainError("bounded1d kernel requires d = 1");
  }
  if (variant == KernelVariant::BesselBall) {
    if (!(r > 0.0)) throw DomainError("kernel r must be > 0");
    if (d != 2 && d != 3) throw DomainError("bessel_ball kernel requires d = 2 or 3");
  }
}

double eval_free_space_1d(const KernelSpec& spec, double x, double s) {
  return spec.k / spec.lambda * std::exp(-spec.lambda * std::abs(x - s));
}

double eval_bounded_1d(const KernelSpec& spec, double x, double s) {
  const double half = 0.5 * spec.L;
  if (!(x >= -half && x <= half) || !(s >= -half && s <= half)) {
    throw DomainError("bounded1d kernel argument outside [-L/2, L/2]");
  }
  const double lo = std::min(x, s);
  const double hi = std::max(x, s);
  const double lam = spec.lambda;
  const double scale = 2.0 * spec.k / lam;
  const double lamL = lam * spec.L;
  if (lamL < 40.0) {
    return scale * std::sinh(lam * (lo + half)) * std::sinh(lam * (half - hi)) / std::sinh(lamL);
  }
  // sinh(a) sinh(b) / sinh(a + b + c) with c = lam (hi - lo) >= 0, written with
  // decaying exponentials so large lambda*L neither overflows nor cancels.
  const double a = lam * (lo + half);
  const double b = lam * (half - hi);
  const double c = lam * (hi - lo);
  return scale * 0.5 * std::exp(-c) * -std::expm1(-2.0 * a) * -std::expm1(-2.0 * b) /
         -std::expm1(-2.0 * lamL);
}

double eval_cs_rational(const KernelSpec& spec, double x, double s) {
  const double dist = x - s;
  return spec.K / std::pow(1.0 + dist * dist, spec.gamma);
}

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// Power series of K0 and K1, valid for 0 < z <= 2.
double bessel_k0_series(double z) {
  const double t = 0.25 * z * z;
  double term = 1.0;  // t^j / (j!)^2
  double harmonic = 0.0;
  double i0 = 1.0;
  double tail = 0.0;
  for (int j = 1; j < 60; ++j) {
    term *= t / (static_cast<double>(j) * j);
    harmonic += 1.0 / j;
    i0 += term;
    tail += harmonic * term;
    if (term < 1e-18 * i0) break;
  }
  return -(std::log(0.5 * z) + kEulerGamma) * i0 + tail;
}

double bessel_k1_series(double z) {
  const double t = 0.25 * z * z;
  double term = 1.0;  // t^j / (j! (j+1)!)
  double psi_j1 = -kEulerGamma;        // psi(j + 1)
  double psi_j2 = 1.0 - kEulerGamma;   // psi(j + 2)
  double i1_sum = 1.0;
  double tail = psi_j1 + psi_j2;
  for (int j = 1; j < 60; ++j) {
    term *= t / (static_cast<double>(j) * (j + 1));
    psi_j1 = psi_j2;
    psi_j2 += 1.0 / (j + 1);
    i1_sum += term;
    tail += (psi_j1 + psi_j2) * term;
    if (term < 1e-18 * i1_sum) break;
  }
  const double i1 = 0.5 * z * i1_sum;
  return 1.0 / z + std::log(0.5 * z) * i1 - 0.25 * z * tail;
}

// Trapezoid rule on K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt. The
// integrand is entire and even, so the error decays like exp(-pi^2 / h).
double bessel_k_integral(double order, double z) {
  constexpr double h = 0.1;
  double sum = 0.5;  // t = 0 contributes half the sample
  for (int j = 1; j < 4000; ++j) {
    const double t = j * h;
    const double term = std::exp(-z * (std::cosh(t) - 1.0)) * std::cosh(order * t);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return h * sum * std::exp(-z);
}

}  // namespace

double bessel_k(double order, double z) {
  if (!(z > 0.0)) throw DomainError("bessel_k requires z > 0");
  if (order == 0.5) return std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z);
  if (order == 0.0) return z <= 2.0 ? bessel_k0_series(z) : bessel_k_integral(0.0, z);
  if (order == 1.0) return z <= 2.0 ? bessel_k1_series(z) : bessel_k_integral(1.0, z);
  throw DomainError("bessel_k supports orders 0, 1/2 and 1 only");
}

double bessel_radial(const KernelSpec& spec, double rho) {
  if (!(rho > 0.0)) throw SingularityError("bessel kernel evaluated at zero separation");
  const double dim = spec.d;
  const double order = 0.5 * dim - 1.0;
  const double prefactor = std::pow(spec.k / (2.0 * std::numbers::pi), 0.5 * dim);
  const double arg = spec.lambda * rho;
  return prefactor * std::pow(spec.lambda / rho, order) * bessel_k(order, arg);
}

double eval_bessel_ball(const KernelSpec& spec, std::span<const double> x,
                        std::span<const double> s) {
  const auto dim = static_cast<std::size_t>(spec.d);
  if (x.size() != dim || s.size() != dim) throw DomainError("bessel_ball point dimension mismatch");
  double xx = 0.0, ss = 0.0, xs = 0.0, diff2 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    xx += x[i] * x[i];
    ss += s[i] * s[i];
    xs += x[i] * s[i];
    diff2 += (x[i] - s[i]) * (x[i] - s[i]);
  }
  const double r2 = spec.r * spec.r;
  if (xx >= r2 || ss > r2 * (1.0 + 1e-12)) throw DomainError("bessel_ball argument outside the ball");
  if (xx == 0.0) throw ImagePointError("bessel_ball image point undefined for x at the origin");
  if (diff2 == 0.0) throw SingularityError("bessel_ball kernel is singular at x == s");
  // (1/r) |x| |s - r^2 x / |x|^2|, expanded into a form symmetric in (x, s).
  const double image2 = std::max(xx * ss - 2.0 * r2 * xs + r2 * r2, 0.0);
  const double image = std::sqrt(image2) / spec.r;
  return bessel_radial(spec, std::sqrt(diff2)) - bessel_radial(spec, image);
}

double radial_profile(const KernelSpec& spec, double rho) {
  switch (spec.variant) {
    case KernelVariant::Free1D: return spec.k / spec.lambda * std::exp(-spec.lambda * rho);
    case KernelVariant::Rational: return spec.K / std::pow(1.0 + rho * rho, spec.gamma);
    case KernelVariant::BesselBall: return bessel_radial(spec, rho);
    case KernelVariant::Bounded1D: break;
  }
  throw DomainError("bounded1d kernel has no radial profile");
}

double evaluate(const KernelSpec& spec, double x, double s) {
  switch (spec.variant) {
    case KernelVariant::Free1D: return eval_free_space_1d(spec, x, s);
    case KernelVariant::Bounded1D: return eval_bounded_1d(spec, x, s);
    case KernelVariant::Rational: return eval_cs_rational(spec, x, s);
    case KernelVariant::BesselBall: break;
  }
  throw DomainError("bessel_ball kernel needs vector arguments");
}

double evaluate(const KernelSpec& spec, std::span<const double> x, std::span<const double> s) {
  if (spec.variant == KernelVariant::BesselBall) return eval_bessel_ball(spec, x, s);
  if (x.size() != s.size()) throw DomainError("kernel point dimension mismatch");
  if (x.size() == 1) return evaluate(spec, x[0], s[0]);
  if (spec.variant == KernelVariant::Bounded1D) throw DomainError("bounded1d kernel requires d = 1");
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dist2 += (x[i] - s[i]) * (x[i] - s[i]);
  return radial_profile(spec, std::sqrt(dist2));
}

double verify_green_residual(const KernelSpec& spec, int n) {
  if (n < 8) throw SizeError("verify_green_residual needs n >= 8");
  const double h = spec.L / n;
  const double half = 0.5 * spec.L;
  const double lam2 = spec.lambda * spec.lambda;
  std::vector<double> column(static_cast<std::size_t>(n) + 1);
  double worst = 0.0;
  for (int j = 1; j < n; ++j) {
    const double source = -half + j * h;
    for (int i = 0; i <= n; ++i) {
      // Clamp the end nodes: -half + n*h can round past +half.
      const double node = i == n ? half : -half + i * h;
      column[static_cast<std::size_t>(i)] = eval_bounded_1d(spec, node, source);
    }
    for (int i = 1; i < n; ++i) {
      if (std::abs(i - j) <= 1) continue;
      const auto u = static_cast<std::size_t>(i);
      const double second = (column[u + 1] - 2.0 * column[u] + column[u - 1]) / (h * h);
      const double applied = -(second - lam2 * column[u]) / (2.0 * spec.k);
      worst = std::max(worst, std::abs(applied));  // delta is zero away from node j
    }
  }
  return worst;
}

}  // namespace csflock
