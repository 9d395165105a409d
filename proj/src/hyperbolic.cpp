#include "csflock/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csflock/errors.hpp"

namespace csflock {

double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

double velocity(Conserved u, double rho_floor) { return u.rho > rho_floor ? u.m / u.rho : 0.0; }

Conserved physical_flux(Conserved u, double rho_floor) {
  return {u.m, u.m * velocity(u, rho_floor)};
}

namespace {

constexpr std::size_t kGhost = 2;

// Cell values with two vacuum ghosts on each side.
std::vector<Conserved> padded(const FieldState& state) {
  std::vector<Conserved> out(state.size() + 2 * kGhost);
  for (std::size_t i = 0; i < state.size(); ++i) out[i + kGhost] = state.at(i);
  return out;
}

}  // namespace

InterfaceStates reconstruct(const FieldState& state) {
  const std::size_t n = state.size();
  const std::vector<Conserved> u = padded(state);
  // Half-slope per padded cell; the outermost ghosts keep zero slope.
  std::vector<Conserved> half(u.size());
  for (std::size_t p = 1; p + 1 < u.size(); ++p) {
    half[p].rho = 0.5 * minmod(u[p + 1].rho - u[p].rho, u[p].rho - u[p - 1].rho);
    half[p].m = 0.5 * minmod(u[p + 1].m - u[p].m, u[p].m - u[p - 1].m);
  }
  InterfaceStates faces;
  faces.left.resize(n + 1);
  faces.right.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const std::size_t west = k + kGhost - 1;  // padded index of cell k - 1
    const std::size_t east = k + kGhost;      // padded index of cell k
    faces.left[k] = u[west] + half[west];
    faces.right[k] = u[east] - half[east];
  }
  return faces;
}

Conserved kt_flux(Conserved left, Conserved right, double rho_floor) {
  const double a =
      std::max(std::abs(velocity(left, rho_floor)), std::abs(velocity(right, rho_floor)));
  const Conserved fl = physical_flux(left, rho_floor);
  const Conserved fr = physical_flux(right, rho_floor);
  return 0.5 * (fl + fr - a * (right - left));
}

double max_local_speed(const FieldState& state, double rho_floor) {
  const InterfaceStates faces = reconstruct(state);
  double speed = 0.0;
  for (std::size_t k = 0; k < faces.left.size(); ++k) {
    speed = std::max({speed, std::abs(velocity(faces.left[k], rho_floor)),
                      std::abs(velocity(faces.right[k], rho_floor))});
  }
  return speed;
}

std::vector<Conserved> source(const FieldState& state, const AuxFields& aux) {
  if (aux.y1.size() != state.size() || aux.y2.size() != state.size()) {
    throw SizeError("aux fields do not match the state size");
  }
  std::vector<Conserved> s(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    s[i] = {0.0, state.rho[i] * aux.y1[i] - state.m[i] * aux.y2[i]};
  }
  return s;
}

std::vector<Conserved> rhs(const FieldState& state, const Grid1D& grid, const AuxFields& aux,
                           double rho_floor) {
  const std::size_t n = state.size();
  if (n != static_cast<std::size_t>(grid.cells())) throw SizeError("state does not match grid");
  const InterfaceStates faces = reconstruct(state);
  std::vector<Conserved> flux(n + 1);
  for (std::size_t k = 0; k <= n; ++k) flux[k] = kt_flux(faces.left[k], faces.right[k], rho_floor);

  std::vector<Conserved> out = source(state, aux);
  const double inv_dx = 1.0 / grid.dx();
  for (std::size_t i = 0; i < n; ++i) out[i] = out[i] - inv_dx * (flux[i + 1] - flux[i]);
  return out;
}

namespace {

FieldState euler_stage(const FieldState& u, double dt, const std::vector<Conserved>& du) {
  FieldState out = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.rho[i] += dt * du[i].rho;
    out.m[i] += dt * du[i].m;
  }
  return out;
}

void clamp_negative_density(FieldState& u) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u.rho[i] < 0.0) {
      u.rho[i] = 0.0;
      u.m[i] = 0.0;
    }
  }
}

}  // namespace

FieldState ssp_rk2_step(const FieldState& state, double dt, const RhsFunction& f) {
  FieldState stage1 = euler_stage(state, dt, f(state));
  clamp_negative_density(stage1);
  stage1.t = state.t + dt;
  const FieldState stage2 = euler_stage(stage1, dt, f(stage1));
  FieldState next = state;
  for (std::size_t i = 0; i < state.size(); ++i) {
    next.rho[i] = 0.5 * state.rho[i] + 0.5 * stage2.rho[i];
    next.m[i] = 0.5 * state.m[i] + 0.5 * stage2.m[i];
  }
  clamp_negative_density(next);
  next.t = state.t + dt;
  return next;
}

FieldState ssp_rk2_step(const FieldState& state, const Grid1D& grid, double dt,
                        const AuxProvider& aux_provider, const HyperbolicOptions& options) {
  if (!(dt > 0.0)) throw DomainError("time step must be > 0");
  const double courant = max_local_speed(state, options.rho_floor) * dt / grid.dx();
  if (courant > options.cfl_limit) {
    std::ostringstream msg;
    msg << "CFL violation: max|u| dt/dx = " << courant << " exceeds " << options.cfl_limit;
    throw CflError(msg.str(), courant);
  }
  return ssp_rk2_step(state, dt, [&](const FieldState& u) {
    return rhs(u, grid, aux_provider(u), options.rho_floor);
  });
}

}  // namespace csflock
