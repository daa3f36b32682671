#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jumpplan {

// Caller broke a documented precondition (mismatched sizes, bad config values).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Foot target is outside the annulus reachable by a two-link leg.
class ReachabilityError : public std::runtime_error {
 public:
  ReachabilityError(const std::string& what, double overshoot)
      : std::runtime_error(what), overshoot_(overshoot) {}

  /// Distance (m) by which the target lies outside the reachable annulus.
  double overshoot() const noexcept { return overshoot_; }

 private:
  double overshoot_;
};

// D_opt -> GRF coefficient transform could not be solved.
class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Transform solved but the residual check failed.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyCSpaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyLibraryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StaleLibraryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary or text file did not match its declared format.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace jumpplan
