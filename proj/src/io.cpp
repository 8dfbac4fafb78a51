#include "blockseg/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace blockseg {

namespace {

char delimiter_for(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0 ? ',' : '\t';
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

ObservationMatrix load_matrix(const std::string& path, const SegConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  const char delim = delimiter_for(path);

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, delim)) {
      size_t pos = 0;
      double v;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw IoError("non-numeric cell '" + cell + "' in " + path);
      }
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
      if (pos != cell.size()) throw IoError("non-numeric cell '" + cell + "' in " + path);
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw IoError("empty matrix file " + path);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) {
      throw IoError("non-square input in " + path + ": " + std::to_string(n) + " rows but a row has " +
                    std::to_string(row.size()) + " columns");
    }
  }

  ObservationMatrix y(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y(i, j) = rows[i][j];

  if (cfg.symmetrize) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double avg = 0.5 * (y(i, j) + y(j, i));
        y(i, j) = avg;
        y(j, i) = avg;
      }
  }
  y.validate();
  return y;
}

void save_matrix(const ObservationMatrix& y, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  const char delim = delimiter_for(path);
  char buf[40];
  const int n = y.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", y(i, j));
      if (j) out << delim;
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace blockseg
