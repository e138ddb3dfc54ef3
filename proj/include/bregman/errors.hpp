#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bregman {

enum class ErrorKind {
  Domain,
  Weight,
  Sample,
  Infeasible,
  Convergence,
  Config,
  Schedule,
  Monotonicity,
  Precondition,
};

std::string_view to_string(ErrorKind kind);

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A point lies outside the domain of the Legendre function in use.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Convex-combination weights are not positive or do not sum to one.
class WeightError : public Error {
 public:
  explicit WeightError(const std::string& what) : Error(ErrorKind::Weight, what) {}
};

class SampleError : public Error {
 public:
  explicit SampleError(const std::string& what) : Error(ErrorKind::Sample, what) {}
};

/// The constraint set is empty, or has no point inside dom f.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(ErrorKind::Infeasible, what) {}
};

/// An inner solver hit its iteration cap. Carries the last residual seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(ErrorKind::Convergence, what + " (last residual " + std::to_string(last_residual) + ")"),
        last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// Malformed configuration. `field` is a dotted path into the JSON document.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(ErrorKind::Config, field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ScheduleError : public Error {
 public:
  explicit ScheduleError(const std::string& what) : Error(ErrorKind::Schedule, what) {}
};

/// D_f(p, x_{n+1}) > D_f(p, x_n) for a certified solution p. Always an implementation bug.
class MonotonicityViolation : public Error {
 public:
  explicit MonotonicityViolation(const std::string& what) : Error(ErrorKind::Monotonicity, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

}  // namespace bregman
