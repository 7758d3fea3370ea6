#ifndef RAILS_ERRORS_HPP
#define RAILS_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace rails {

/// Root of all library-thrown errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Unknown variable, unknown level, duplicate variable in a term, or
/// mismatched schemas between cohorts.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Dimension mismatch between vectors/matrices.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A computation produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Propensity model fitting failed.
class FitError : public Error {
 public:
  using Error::Error;
};

/// The pseudo-likelihood Hessian is singular (possibly after ridge).
class SingularHessianError : public FitError {
 public:
  SingularHessianError(const std::string& what, std::vector<std::string> columns)
      : FitError(what), offending_columns(std::move(columns)) {}

  std::vector<std::string> offending_columns;
};

/// Calibration raking cannot proceed; the LIFO layer treats these as a
/// signal to prune the working set.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// A constraint demands a positive total for a cell with zero sample support.
class StructuralZeroError : public CalibrationError {
 public:
  using CalibrationError::CalibrationError;
};

/// A constraint demands a zero total for a cell that carries positive weight;
/// multiplicative updates cannot drive positive weights to zero.
class ZeroTargetError : public CalibrationError {
 public:
  using CalibrationError::CalibrationError;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line = -1) : Error(what), line_number(line) {}

  long line_number;
};

}  // namespace rails

#endif  // RAILS_ERRORS_HPP
