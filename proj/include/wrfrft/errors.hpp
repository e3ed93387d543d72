#pragma once

#include <stdexcept>
#include <string>

namespace wrfrft {

// Exit codes shared by the CLI and the scenario runner.
enum class ExitCode : int { ok = 0, failure = 1, validation = 2, budget = 3, io = 4 };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::failure; }
};

/// Invalid parameters, configs or preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::validation; }
};

/// t outside the dwell of a trajectory.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A target trajectory leaves the fast-time window.
class OutOfWindowError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Angle too close to a multiple of pi for the chirp kernel.
class DegenerateAngleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Search grid larger than the configured hypothesis budget.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, long long requested, long long budget)
      : Error(what), requested_(requested), budget_(budget) {}
  ExitCode exit_code() const noexcept override { return ExitCode::budget; }
  long long requested() const noexcept { return requested_; }
  long long budget() const noexcept { return budget_; }

 private:
  long long requested_;
  long long budget_;
};

class IoError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::io; }
};

class MalformedHeaderError : public IoError {
 public:
  using IoError::IoError;
};

class TruncatedPayloadError : public IoError {
 public:
  TruncatedPayloadError(const std::string& what, long long expected, long long actual)
      : IoError(what), expected_(expected), actual_(actual) {}
  long long expected() const noexcept { return expected_; }
  long long actual() const noexcept { return actual_; }

 private:
  long long expected_;
  long long actual_;
};

class DtypeMismatchError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace wrfrft
