#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace burgulence {

/// Classifies failures so callers (notably the CLI) can map them onto exit codes.
enum class ErrorKind {
  config,           ///< invalid configuration or schema violation
  domain,           ///< argument outside an operation's domain
  numerical_input,  ///< non-finite input data
  range,            ///< value outside a model's working range
  instability,      ///< time integration blew up
  numerical,        ///< numerical failure inside an algorithm
  coverage,         ///< snapshots do not cover an averaging window
  excluded_case,    ///< a case the theory excludes (e.g. u0 == 0)
  undefined,        ///< quantity undefined for the input (e.g. 0/0 flatness)
  internal,         ///< broken internal invariant
  io,               ///< file input/output failure
  span,             ///< too few points or too narrow a range for a fit
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a non-finite value appears during time stepping.
class InstabilityError : public Error {
 public:
  InstabilityError(std::size_t step, double time, const std::string& message)
      : Error(ErrorKind::instability, message), step_(step), time_(time) {}

  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t step_;
  double time_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace burgulence
