#pragma once

// Binary matrix payloads: 64-bit IEEE doubles, column-major, little-endian
// regardless of host byte order, so artifacts round-trip bit-exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "agopnc/matrix.hpp"

namespace agopnc {

inline void write_matrix_le(std::ostream& out, const Mat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::uint64_t bits;
      const double v = m(i, j);
      std::memcpy(&bits, &v, sizeof(bits));
      char buf[8];
      for (int b = 0; b < 8; ++b)
        buf[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
      out.write(buf, 8);
    }
  }
  if (!out) throw std::runtime_error("write_matrix_le: write failed");
}

// 17 significant digits: enough to reparse to the exact same double; the
// C locale keeps '.' as the decimal separator
inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// grayscale render of a matrix: -1 maps to black, +1 to white, values
// outside [-1, 1] clamp to the endpoints; binary 8-bit PGM, row-major
inline void write_pgm(std::ostream& out, const Mat& m) {
  ensure_nonempty(m, "write_pgm");
  out << "P5\n" << m.cols() << " " << m.rows() << "\n255\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = std::min(1.0, std::max(-1.0, m(i, j)));
      const long g = std::lround(255.0 * (v + 1.0) / 2.0);
      out.put(static_cast<char>(static_cast<unsigned char>(g)));
    }
  }
  if (!out) throw std::runtime_error("write_pgm: write failed");
}

// headerless comma-separated numeric matrix; rows must agree in width
inline Mat read_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      const std::string field = line.substr(start, comma - start);
      char* endp = nullptr;
      const double v = std::strtod(field.c_str(), &endp);
      if (endp == field.c_str() || *endp != '\0')
        throw std::invalid_argument("read_csv_matrix: bad number '" + field +
                                    "'");
      row.push_back(v);
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("read_csv_matrix: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw std::invalid_argument("read_csv_matrix: empty input");
  Mat m(static_cast<Eigen::Index>(rows.size()),
        static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  return m;
}

inline Mat read_matrix_le(std::istream& in, Eigen::Index rows,
                          Eigen::Index cols, const std::string& name) {
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      char buf[8];
      in.read(buf, 8);
      if (in.gcount() != 8)
        throw std::invalid_argument("read_matrix_le: " + name + " truncated");
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[b]))
                << (8 * b);
      double v;
      std::memcpy(&v, &bits, sizeof(v));
      m(i, j) = v;
    }
  }
  return m;
}

}  // namespace agopnc
