#pragma once

#include <stdexcept>
#include <string>

namespace powercf {

/// Process exit codes used by the CLI.
enum class ExitCode : int {
  kOk = 0,
  kInput = 2,
  kNumerical = 3,
  kCoverage = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::kInput; }
};

// Malformed or missing input: bad columns, unparseable values, bad config.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Argument outside its mathematical domain (non-positive lengthscale, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kNumerical; }
};

class DegenerateTargetError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Data do not cover a requested window (month gaps, missing prices, ...).
class CoverageError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kCoverage; }
};

}  // namespace powercf
