/**
 * @file matrix_io.hpp
 * @brief Plain-text coordinate format for sparse complex matrices.
 *
 * Header line "rows cols nnz", then one "i j re im" line per stored entry,
 * 1-indexed, values printed with %.17g so they parse back exactly.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pdelin/error.hpp"

namespace pdelin {

inline void write_coordinate(std::ostream& os, const Eigen::MatrixXcd& M) {
  std::vector<std::string> lines;
  char buf[128];
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      const auto v = M(i, j);
      if (v == std::complex<double>(0.0)) continue;
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g", static_cast<long>(i + 1), static_cast<long>(j + 1),
                    v.real(), v.imag());
      lines.emplace_back(buf);
    }
  }
  os << M.rows() << ' ' << M.cols() << ' ' << lines.size() << '\n';
  for (const auto& l : lines) os << l << '\n';
}

template <class T>
void write_coordinate(std::ostream& os, const Eigen::SparseMatrix<T>& M) {
  const Eigen::SparseMatrix<std::complex<double>> C = M.template cast<std::complex<double>>();
  write_coordinate(os, Eigen::MatrixXcd(C));
}

inline Eigen::MatrixXcd read_coordinate(std::istream& is) {
  long rows = 0, cols = 0, nnz = 0;
  if (!(is >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
    throw InvalidArgument("coordinate file: malformed header");
  }
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(rows, cols);
  for (long e = 0; e < nnz; ++e) {
    long i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(is >> i >> j >> re >> im)) {
      throw InvalidArgument("coordinate file: entry " + std::to_string(e + 1) + " is malformed");
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw InvalidArgument("coordinate file: index (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range");
    }
    M(i - 1, j - 1) = {re, im};
  }
  return M;
}

inline std::string to_coordinate_string(const Eigen::MatrixXcd& M) {
  std::ostringstream os;
  write_coordinate(os, M);
  return os.str();
}

inline Eigen::MatrixXcd from_coordinate_string(const std::string& s) {
  std::istringstream is(s);
  return read_coordinate(is);
}

}  // namespace pdelin
