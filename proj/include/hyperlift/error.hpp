#pragma once

#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>

namespace hyperlift {

enum class ErrorKind {
  InvalidInput,
  InvalidParameter,
  NotHyperbolic,
  Domain,
  InsufficientResolution,
  IncompatibleLifts,
  NotInOrbitSpace,
  CannotReduce,
  NotNonnegative,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::NotHyperbolic: return "not-hyperbolic";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InsufficientResolution: return "insufficient-resolution";
    case ErrorKind::IncompatibleLifts: return "incompatible-lifts";
    case ErrorKind::NotInOrbitSpace: return "not-in-orbit-space";
    case ErrorKind::CannotReduce: return "cannot-reduce-at-zero";
    case ErrorKind::NotNonnegative: return "not-nonnegative";
  }
  return "unknown";
}

/// Numerical failures (as opposed to malformed input) map to exit code 3 in the CLI.
inline bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHyperbolic:
    case ErrorKind::IncompatibleLifts:
    case ErrorKind::NotInOrbitSpace:
    case ErrorKind::CannotReduce:
    case ErrorKind::NotNonnegative:
    case ErrorKind::InsufficientResolution:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<double> location = std::nullopt,
        double witness = 0.0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what +
                           (location ? " (at t = " + format_location(*location) + ")" : "")),
        kind_(kind),
        location_(location),
        witness_(witness) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> location() const noexcept { return location_; }
  /// Kind-specific magnitude, e.g. the imaginary part of the worst root for NotHyperbolic.
  double witness() const noexcept { return witness_; }

 private:
  static std::string format_location(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", t);
    return buf;
  }

  ErrorKind kind_;
  std::optional<double> location_;
  double witness_;
};

}  // namespace hyperlift
