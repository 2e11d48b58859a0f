#include "robustmean/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace robustmean {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const Matrix& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  std::string line;
  for (Index i = 0; i < data.rows(); ++i) {
    line.clear();
    for (Index j = 0; j < data.cols(); ++j) {
      if (j > 0) line += ',';
      line += format_double(data(i, j));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("write failed: " + path);
}

Matrix read_csv(const std::string& path, bool skip_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && skip_header) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<double> row;
    std::size_t start = 0;
    long col = 0;
    for (;;) {
      ++col;
      const std::size_t comma = line.find(',', start);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      double v = 0.0;
      // Tolerate surrounding spaces; from_chars itself accepts no whitespace.
      std::size_t a = start, b = end;
      while (a < b && (line[a] == ' ' || line[a] == '\t')) ++a;
      while (b > a && (line[b - 1] == ' ' || line[b - 1] == '\t')) --b;
      const auto res = std::from_chars(line.data() + a, line.data() + b, v);
      if (res.ec != std::errc() || res.ptr != line.data() + b)
        throw ParseError("non-numeric cell in " + path, lineno, col);
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("ragged row in " + path, lineno,
                       static_cast<long>(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows in " + path, lineno, 0);

  Matrix data(static_cast<Index>(rows.size()),
              static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < data.rows(); ++i)
    for (Index j = 0; j < data.cols(); ++j)
      data(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return data;
}

}  // namespace robustmean
