#pragma once

#include <string>

#include "robustmean/types.hpp"

namespace robustmean {

/// Writes one datapoint per row, comma-separated, no header; doubles use
/// shortest round-trip formatting.
void write_csv(const std::string& path, const Matrix& data);

/// Reads a rectangular numeric CSV. skip_header drops the first line.
/// Ragged rows and non-numeric cells raise ParseError naming row and column.
Matrix read_csv(const std::string& path, bool skip_header = false);

/// Shortest decimal representation that round-trips the double.
std::string format_double(double v);

}  // namespace robustmean
