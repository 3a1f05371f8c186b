#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sumrules {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable category, used by the CLI error JSON.
  [[nodiscard]] virtual const char* kind() const noexcept { return "error"; }
};

/// A parameter lies outside its legal range (alpha <= -1, eps <= 0, ...).
class ParameterError : public Error {
public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "parameter"; }
};

/// A coordinate outside the problem domain, or a non-finite evaluation.
class DomainError : public Error {
public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "domain"; }
};

/// Numerical procedure did not reach the requested accuracy.
class AccuracyError : public Error {
public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}
  [[nodiscard]] const char* kind() const noexcept override { return "accuracy"; }
  [[nodiscard]] double best_estimate() const noexcept { return best_estimate_; }
  [[nodiscard]] double error_estimate() const noexcept { return error_estimate_; }

private:
  double best_estimate_;
  double error_estimate_;
};

/// Expression text could not be parsed.
class SyntaxError : public Error {
public:
  SyntaxError(const std::string& what, std::size_t offset, std::vector<std::string> expected = {})
      : Error(what), offset_(offset), expected_(std::move(expected)) {}
  [[nodiscard]] const char* kind() const noexcept override { return "syntax"; }
  /// Byte offset into the source text.
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
  [[nodiscard]] const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Requested combination is not available (e.g. closed-form G1 for Dirichlet).
class UnsupportedError : public Error {
public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "unsupported"; }
};

/// Operation requires a zero mode but the boundary condition has none.
class NoZeroModeError : public Error {
public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "no-zero-mode"; }
};

class EigenSolverError : public Error {
public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "eigensolver"; }
};

class BracketingError : public Error {
public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "bracketing"; }
};

class FitError : public Error {
public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "fit"; }
};

} // namespace sumrules
