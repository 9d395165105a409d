#pragma once

#include <functional>

namespace csflock {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
/// Returns 0 for a == b and a negated integral for b < a.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-9, int max_depth = 50);

/// Integral of f over [a, inf) via the map s = a + t / (1 - t), t in [0, 1).
/// f must decay fast enough for the transformed integrand to be finite at t -> 1.
double adaptive_simpson_to_infinity(const std::function<double(double)>& f, double a,
                                    double tol = 1e-9);

}  // namespace csflock
