#pragma once

#include <stdexcept>
#include <string>

namespace robustmean {

/// Violated API precondition (dimension mismatch, out-of-range index, ...).
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Invalid parameter or configuration value.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thresholded mean has no surviving points.
class EmptySupportError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data; carries 1-based row/column of the offending cell.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, long row, long col)
      : std::runtime_error(msg + " (row " + std::to_string(row) + ", column " +
                           std::to_string(col) + ")"),
        row_(row),
        col_(col) {}
  long row() const { return row_; }
  long col() const { return col_; }

private:
  long row_;
  long col_;
};

/// Filesystem-level failure; message names the path.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace robustmean
