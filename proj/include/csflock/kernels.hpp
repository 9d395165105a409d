#pragma once

#include <span>
#include <string>
#include <string_view>

namespace csflock {

enum class KernelVariant { Free1D, Bounded1D, Rational, BesselBall };

std::string_view to_string(KernelVariant v);
/// Parses "free1d", "bounded1d", "rational", "bessel_ball" (case-insensitive).
KernelVariant parse_kernel_variant(std::string_view name);

/// Parameters of one member of the interaction-function family.
///
/// Only the fields relevant to `variant` are read: `k`, `lambda` for the
/// Green's-function kernels, `L` for Bounded1D, `r` and `d` for BesselBall,
/// `K` and `gamma` for Rational.
struct KernelSpec {
  KernelVariant variant = KernelVariant::Bounded1D;
  double k = 4.0;
  double lambda = 1.0;
  double L = 6.283185307179586;
  double r = 1.0;
  int d = 1;
  double K = 1.0;
  double gamma = 1.0;

  static KernelSpec free_1d(double k, double lambda);
  static KernelSpec bounded_1d(double k, double lambda, double L);
  static KernelSpec rational(double K, double gamma, int d = 1);
  static KernelSpec bessel_ball(double k, double lambda, double r, int d);

  /// Throws DomainError when the invariants for `variant` are violated.
  void validate() const;
};

/// (k/lambda) exp(-lambda |x - s|).
double eval_free_space_1d(const KernelSpec& spec, double x, double s);

/// Dirichlet Green's function of -(1/2k)(d^2/dx^2 - lambda^2) on [-L/2, L/2].
/// Throws DomainError for arguments outside the interval.
double eval_bounded_1d(const KernelSpec& spec, double x, double s);

/// K / (1 + |x - s|^2)^gamma.
double eval_cs_rational(const KernelSpec& spec, double x, double s);

/// Modified Bessel function of the second kind, order in {0, 1/2, 1}.
/// Throws DomainError for z <= 0 or an unsupported order.
double bessel_k(double order, double z);

/// Free-space radial profile (k/2pi)^{d/2} (lambda/rho)^{d/2-1} K_{d/2-1}(lambda rho), d in {2,3}.
double bessel_radial(const KernelSpec& spec, double rho);

/// Ball kernel: radial profile minus its Kelvin-image counterpart.
/// Throws SingularityError for x == s and ImagePointError for x == 0.
double eval_bessel_ball(const KernelSpec& spec, std::span<const double> x,
                        std::span<const double> s);

/// Dispatch on spec.variant for points of dimension spec.d (Free1D and
/// Rational use the Euclidean distance in any dimension).
double evaluate(const KernelSpec& spec, std::span<const double> x, std::span<const double> s);
double evaluate(const KernelSpec& spec, double x, double s);

/// Radial profile psi~(rho) for kernels of the form psi(x,s) = psi~(|x-s|).
/// Throws DomainError for Bounded1D, which is not translation invariant.
double radial_profile(const KernelSpec& spec, double rho);

/// Max deviation of -(1/2k)(D^2 - lambda^2) G(., s_j) from the discrete delta
/// on the nodes -L/2 + i L/n, i = 0..n, for every interior source node j.
/// Nodes within one cell of the source and the Dirichlet end nodes are skipped.
double verify_green_residual(const KernelSpec& spec, int n);

}  // namespace csflock
