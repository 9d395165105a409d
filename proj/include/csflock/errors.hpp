#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csflock {

/// Argument outside the domain on which an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A particle position fell outside the kernel domain.
class ParticleDomainError : public DomainError {
 public:
  ParticleDomainError(const std::string& what, std::size_t index)
      : DomainError(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Kernel evaluated at a coincident pair where it diverges (d >= 2).
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Image point of the ball kernel undefined (x at the origin).
class ImagePointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Grid or system too small for the requested stencil.
class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tridiagonal elimination hit a (near-)zero pivot.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, std::size_t row)
      : std::runtime_error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Time step rejected by the CFL guard.
class CflError : public std::runtime_error {
 public:
  CflError(const std::string& what, double courant, long step = -1)
      : std::runtime_error(what), courant_(courant), step_(step) {}
  double courant() const noexcept { return courant_; }
  /// Step index within a run, or -1 when raised outside a driver loop.
  long step() const noexcept { return step_; }

 private:
  double courant_;
  long step_;
};

/// check_flocking_condition got a confinement bound outside [0, L/2).
class InvalidBoundError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad or missing configuration entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message, long line = -1)
      : std::runtime_error(format(field, message, line)), field_(field), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  long line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, const std::string& message, long line) {
    std::string out = "config error";
    if (line >= 0) out += " (line " + std::to_string(line) + ")";
    if (!field.empty()) out += " [" + field + "]";
    return out + ": " + message;
  }
  std::string field_;
  long line_;
};

}  // namespace csflock
