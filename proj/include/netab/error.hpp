#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netab {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text; `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : Error(line == 0 ? msg : "line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a precondition (length mismatch, out-of-range argument).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Invalid model or experiment parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Base for failures raised by an estimator on otherwise valid input.
class EstimatorError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public EstimatorError {
 public:
  SingularMatrixError(const std::string& msg, int column) : EstimatorError(msg), column_(column) {}
  /// Index of the column judged linearly dependent on the preceding ones.
  int column() const noexcept { return column_; }

 private:
  int column_;
};

class SingularDesignError : public SingularMatrixError {
 public:
  using SingularMatrixError::SingularMatrixError;
};

class SingularFisherError : public SingularMatrixError {
 public:
  using SingularMatrixError::SingularMatrixError;
};

class EmptyExposureClassError : public EstimatorError {
 public:
  EmptyExposureClassError(std::size_t n_treated_class, std::size_t n_control_class)
      : EstimatorError("empty exposure class: |C1| = " + std::to_string(n_treated_class) +
                       ", |C0| = " + std::to_string(n_control_class)),
        n_treated_(n_treated_class),
        n_control_(n_control_class) {}
  std::size_t n_treated_class() const noexcept { return n_treated_; }
  std::size_t n_control_class() const noexcept { return n_control_; }

 private:
  std::size_t n_treated_;
  std::size_t n_control_;
};

/// Binary response contains a single class, so no likelihood maximum exists.
class DegenerateResponseError : public EstimatorError {
 public:
  using EstimatorError::EstimatorError;
};

}  // namespace netab
