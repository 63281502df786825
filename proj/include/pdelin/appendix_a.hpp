/**
 * @file appendix_a.hpp
 * @brief Reference matrices of the two-dimensional Poisson worked example
 *        (Fourier n = 2, Chebyshev n = 3) and their comparison against the
 *        assembled operators.
 *
 * Golden entries are tokens: an optional sign, an optional integer factor,
 * an optional "i" and an optional "pi" or "pi2" (pi squared), e.g. "-2pi2",
 * "ipi", "24".  Entries without pi must match bit for bit; pi-valued entries
 * must match to 1e-12.
 */
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "pdelin/error.hpp"
#include "pdelin/spectral_ops.hpp"
#include "pdelin/spectral_system.hpp"

namespace pdelin::appendix_a {

struct Golden {
  std::string name;
  std::vector<std::string> rows;  ///< whitespace-separated tokens per row
};

struct Entry {
  std::complex<double> value;
  bool has_pi = false;
};

inline Entry parse_token(const std::string& tok) {
  static const std::regex re(R"(^([+-]?)(\d*)(i?)(pi2|pi)?$)");
  std::smatch m;
  if (!std::regex_match(tok, m, re) || (m[2].length() == 0 && m[3].length() == 0 && m[4].length() == 0)) {
    throw InvalidArgument("bad golden token '" + tok + "'");
  }
  double mag = m[2].length() ? std::stod(m[2].str()) : 1.0;
  if (m[1].str() == "-") mag = -mag;
  Entry e;
  if (m[4].length()) {
    e.has_pi = true;
    mag *= m[4].str() == "pi2" ? std::numbers::pi * std::numbers::pi : std::numbers::pi;
  }
  e.value = m[3].length() ? std::complex<double>(0.0, mag) : std::complex<double>(mag, 0.0);
  return e;
}

inline std::vector<std::vector<Entry>> parse_golden(const Golden& g) {
  std::vector<std::vector<Entry>> out;
  for (const auto& row : g.rows) {
    std::istringstream is(row);
    std::vector<Entry> r;
    std::string tok;
    while (is >> tok) r.push_back(parse_token(tok));
    if (!out.empty() && r.size() != out.front().size()) {
      throw InvalidArgument("golden '" + g.name + "' has ragged rows");
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace detail {
inline std::vector<std::string> diag_rows(const std::vector<std::string>& d) {
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::string r;
    for (std::size_t j = 0; j < d.size(); ++j) r += (j ? " " : "") + (i == j ? d[i] : std::string("0"));
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<std::string> fourier_kron() {
  return diag_rows({"-2pi2", "-pi2", "-2pi2", "-pi2", "0", "-pi2", "-2pi2", "-pi2", "-2pi2"});
}
}  // namespace detail

/// Embedded references, in the order they are reproduced.
inline std::vector<Golden> goldens() {
  std::vector<Golden> g;
  g.push_back({"D_2", {"-ipi 0 0", "0 0 0", "0 0 ipi"}});
  g.push_back({"D_2^2", {"-pi2 0 0", "0 0 0", "0 0 -pi2"}});
  g.push_back({"D_3", {"0 1 0 3", "0 0 4 0", "0 0 0 6", "0 0 0 0"}});
  g.push_back({"D_3^2", {"0 0 4 0", "0 0 0 24", "0 0 0 0", "0 0 0 0"}});
  g.push_back({"D2bar_3", {"0 0 4 0", "0 0 0 24", "1 -1 1 -1", "1 1 1 1"}});
  g.push_back({"fourier_laplacian_9x9", detail::fourier_kron()});
  {
    auto rows = detail::fourier_kron();
    rows[4] = "1 1 1 1 1 1 1 1 1";  // u(0,0) = sum of all coefficients
    g.push_back({"fourier_point_value_9x9", rows});
  }
  {
    auto rows = detail::fourier_kron();
    rows[4] = "0 0 0 0 1 0 0 0 0";
    g.push_back({"fourier_coefficient_pin_9x9", rows});
  }
  g.push_back({"chebyshev_laplacian_12x16",
               {
                   "0 0 4 0 0 0 0 0 4 0 0 0 0 0 0 0",
                   "0 0 0 24 0 0 0 0 0 4 0 0 0 0 0 0",
                   "0 0 0 0 0 0 0 0 0 0 4 0 0 0 0 0",
                   "0 0 0 0 0 0 0 0 0 0 0 4 0 0 0 0",
                   "0 0 0 0 0 0 4 0 0 0 0 0 24 0 0 0",
                   "0 0 0 0 0 0 0 24 0 0 0 0 0 24 0 0",
                   "0 0 0 0 0 0 0 0 0 0 0 0 0 0 24 0",
                   "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 24",
                   "0 0 0 0 0 0 0 0 0 0 4 0 0 0 0 0",
                   "0 0 0 0 0 0 0 0 0 0 0 24 0 0 0 0",
                   "0 0 0 0 0 0 0 0 0 0 0 0 0 0 4 0",
                   "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 24",
               }});
  g.push_back({"chebyshev_boundary_16x16",
               {
                   "1 1 1 1 0 0 0 0 0 0 0 0 0 0 0 0",
                   "0 0 0 0 1 1 1 1 0 0 0 0 0 0 0 0",
                   "0 0 0 0 0 0 0 0 1 1 1 1 0 0 0 0",
                   "0 0 0 0 0 0 0 0 0 0 0 0 1 1 1 1",
                   "1 -1 1 -1 0 0 0 0 0 0 0 0 0 0 0 0",
                   "0 0 0 0 1 -1 1 -1 0 0 0 0 0 0 0 0",
                   "0 0 0 0 0 0 0 0 1 -1 1 -1 0 0 0 0",
                   "0 0 0 0 0 0 0 0 0 0 0 0 1 -1 1 -1",
                   "1 0 0 0 1 0 0 0 1 0 0 0 1 0 0 0",
                   "0 1 0 0 0 1 0 0 0 1 0 0 0 1 0 0",
                   "0 0 1 0 0 0 1 0 0 0 1 0 0 0 1 0",
                   "0 0 0 1 0 0 0 1 0 0 0 1 0 0 0 1",
                   "1 0 0 0 -1 0 0 0 1 0 0 0 -1 0 0 0",
                   "0 1 0 0 0 -1 0 0 0 1 0 0 0 -1 0 0",
                   "0 0 1 0 0 0 -1 0 0 0 1 0 0 0 -1 0",
                   "0 0 0 1 0 0 0 -1 0 0 0 1 0 0 0 -1",
               }});
  g.push_back({"chebyshev_system_16x16",
               {
                   "0 0 4 0 0 0 0 0 4 0 0 0 0 0 0 0",
                   "0 0 0 24 0 0 0 0 0 4 0 0 0 0 0 0",
                   "1 -1 1 -1 0 0 0 0 0 0 4 0 0 0 0 0",
                   "1 1 1 1 0 0 0 0 0 0 0 4 0 0 0 0",
                   "0 0 0 0 0 0 4 0 0 0 0 0 24 0 0 0",
                   "0 0 0 0 0 0 0 24 0 0 0 0 0 24 0 0",
                   "0 0 0 0 1 -1 1 -1 0 0 0 0 0 0 24 0",
                   "0 0 0 0 1 1 1 1 0 0 0 0 0 0 0 24",
                   "1 0 0 0 -1 0 0 0 1 0 4 0 -1 0 0 0",
                   "0 1 0 0 0 -1 0 0 0 1 0 24 0 -1 0 0",
                   "0 0 1 0 0 0 -1 0 1 -1 2 -1 0 0 -1 0",
                   "0 0 0 1 0 0 0 -1 1 1 1 2 0 0 0 -1",
                   "1 0 0 0 1 0 0 0 1 0 0 0 1 0 4 0",
                   "0 1 0 0 0 1 0 0 0 1 0 0 0 1 0 24",
                   "0 0 1 0 0 0 1 0 0 0 1 0 1 -1 2 -1",
                   "0 0 0 1 0 0 0 1 0 0 0 1 1 1 1 2",
               }});
  return g;
}

/**
 * Right-hand-side labels of the combined Chebyshev system: f_k1k2 are the
 * source coefficients, gN/gS the data on x_2 = +1/-1 and gE/gW on
 * x_1 = +1/-1, indexed by the remaining coordinate.
 */
inline std::vector<std::string> chebyshev_rhs_labels() {
  return {"f00", "f01", "f02+gS0", "f03+gN0", "f10", "f11", "f12+gS1", "f13+gN1",
          "f20+gW0", "f21+gW1", "gW2+gS2", "gW3+gN2", "f30+gE0", "f31+gE1", "gE2+gS3", "gE3+gN3"};
}

/// Matrix assembled by the library for a golden name.
inline Eigen::MatrixXcd computed(const std::string& name) {
  using F = SparseMatrix<Basis::fourier>;
  using C = SparseMatrix<Basis::chebyshev>;
  auto cplx_of = [](const C& m) { return Eigen::MatrixXcd(Eigen::MatrixXd(m).cast<std::complex<double>>()); };
  const auto poisson2 = EllipticOperator::poisson(2);
  if (name == "D_2") return Eigen::MatrixXcd(F(diff_matrix<Basis::fourier>(1, 2, false).matrix));
  if (name == "D_2^2") return Eigen::MatrixXcd(F(diff_matrix<Basis::fourier>(2, 2, false).matrix));
  if (name == "D_3") return cplx_of(diff_matrix<Basis::chebyshev>(1, 3, false).matrix);
  if (name == "D_3^2") return cplx_of(diff_matrix<Basis::chebyshev>(2, 3, false).matrix);
  if (name == "D2bar_3") return cplx_of(diff_matrix<Basis::chebyshev>(2, 3, true).matrix);
  if (name == "fourier_laplacian_9x9") {
    const F D2 = diff_matrix<Basis::fourier>(2, 2, false).matrix;
    return Eigen::MatrixXcd(F(on_axis<Basis::fourier>(D2, 0, 2) + on_axis<Basis::fourier>(D2, 1, 2)));
  }
  if (name == "fourier_point_value_9x9" || name == "fourier_coefficient_pin_9x9") {
    const auto closure = name == "fourier_point_value_9x9" ? FourierClosure::point_value : FourierClosure::coefficient_pin;
    const Vector<Basis::fourier> f = Vector<Basis::fourier>::Zero(9);
    auto sys = assemble_system<Basis::fourier>(poisson2, 2, f, BoundaryData<Basis::fourier>::zero(2, 2), closure);
    return Eigen::MatrixXcd(sys.L);
  }
  if (name == "chebyshev_laplacian_12x16") {
    const C D2 = diff_matrix<Basis::chebyshev>(2, 3, false).matrix;
    const Eigen::MatrixXd full = Eigen::MatrixXd(C(on_axis<Basis::chebyshev>(D2, 0, 2) + on_axis<Basis::chebyshev>(D2, 1, 2)));
    Eigen::MatrixXd rows(12, 16);
    int r = 0;
    for (int k = 0; k < 16; ++k) {
      const bool all_boundary = is_boundary_index<Basis::chebyshev>(k / 4, 3) && is_boundary_index<Basis::chebyshev>(k % 4, 3);
      if (!all_boundary) rows.row(r++) = full.row(k);
    }
    return rows.cast<std::complex<double>>();
  }
  if (name == "chebyshev_boundary_16x16") {
    const C G = C(diff_matrix<Basis::chebyshev>(2, 3, true).matrix - diff_matrix<Basis::chebyshev>(2, 3, false).matrix);
    const Eigen::MatrixXd G0 = Eigen::MatrixXd(C(on_axis<Basis::chebyshev>(G, 0, 2)));
    const Eigen::MatrixXd G1 = Eigen::MatrixXd(C(on_axis<Basis::chebyshev>(G, 1, 2)));
    Eigen::MatrixXd B(16, 16);
    // N: x_2 = +1 (row (k1, 3) of G on axis 1); S: x_2 = -1 (row (k1, 2));
    // E: x_1 = +1 (row (3, k2) of G on axis 0); W: x_1 = -1 (row (2, k2))
    for (int k = 0; k < 4; ++k) {
      B.row(k) = G1.row(4 * k + 3);
      B.row(4 + k) = G1.row(4 * k + 2);
      B.row(8 + k) = G0.row(12 + k);
      B.row(12 + k) = G0.row(8 + k);
    }
    return B.cast<std::complex<double>>();
  }
  if (name == "chebyshev_system_16x16") {
    const Vector<Basis::chebyshev> f = Vector<Basis::chebyshev>::Zero(16);
    auto sys = assemble_system<Basis::chebyshev>(poisson2, 3, f, BoundaryData<Basis::chebyshev>::zero(2, 3));
    return cplx_of(sys.L);
  }
  throw InvalidArgument("no assembled matrix named '" + name + "'");
}

struct Comparison {
  std::string name;
  bool ok = false;
  std::string message;
};

/// Compares one golden against the assembled matrix and names the first difference (1-indexed).
inline Comparison compare(const Golden& g) {
  Comparison c{g.name, false, ""};
  const auto ref = parse_golden(g);
  const Eigen::MatrixXcd M = computed(g.name);
  if (static_cast<Eigen::Index>(ref.size()) != M.rows() || (!ref.empty() && static_cast<Eigen::Index>(ref[0].size()) != M.cols())) {
    c.message = "shape mismatch: golden " + std::to_string(ref.size()) + "x" +
                std::to_string(ref.empty() ? 0 : ref[0].size()) + ", assembled " + std::to_string(M.rows()) + "x" +
                std::to_string(M.cols());
    return c;
  }
  for (std::size_t i = 0; i < ref.size(); ++i) {
    for (std::size_t j = 0; j < ref[i].size(); ++j) {
      const Entry& e = ref[i][j];
      const auto v = M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const bool match = e.has_pi ? std::abs(v - e.value) <= 1e-12 : v == e.value;
      if (!match) {
        std::ostringstream os;
        os.precision(17);
        os << "first difference at row " << i + 1 << ", col " << j + 1 << ": expected " << e.value << ", got " << v;
        c.message = os.str();
        return c;
      }
    }
  }
  c.ok = true;
  c.message = "match";
  return c;
}

/**
 * Assembles the Chebyshev right-hand side with distinct integer tags for
 * every source and boundary coefficient and checks it against the labels.
 */
inline Comparison compare_chebyshev_rhs() {
  Comparison c{"chebyshev_rhs_16", false, ""};
  auto tag = [](const std::string& label) -> double {
    // f_k1k2 -> 1 + 4 k1 + k2;  gN_k -> 100 (k+1);  gS 1000;  gE 10^4;  gW 10^5
    if (label[0] == 'f') return 1 + 4 * (label[1] - '0') + (label[2] - '0');
    const double k = label[2] - '0' + 1;
    switch (label[1]) {
      case 'N': return 100 * k;
      case 'S': return 1000 * k;
      case 'E': return 10000 * k;
      case 'W': return 100000 * k;
    }
    throw InvalidArgument("bad label " + label);
  };
  using V = Vector<Basis::chebyshev>;
  V f(16);
  for (int k = 0; k < 16; ++k) f(k) = 1 + k;
  BoundaryData<Basis::chebyshev> g = BoundaryData<Basis::chebyshev>::zero(2, 3);
  for (int k = 0; k < 4; ++k) {
    g.plus[1](k) = 100.0 * (k + 1);      // N
    g.minus[1](k) = 1000.0 * (k + 1);    // S
    g.plus[0](k) = 10000.0 * (k + 1);    // E
    g.minus[0](k) = 100000.0 * (k + 1);  // W
  }
  const auto sys = assemble_system<Basis::chebyshev>(EllipticOperator::poisson(2), 3, f, g);
  const auto labels = chebyshev_rhs_labels();
  for (int r = 0; r < 16; ++r) {
    double expect = 0.0;
    std::stringstream ss(labels[static_cast<std::size_t>(r)]);
    std::string part;
    while (std::getline(ss, part, '+')) expect += tag(part);
    if (sys.rhs(r) != expect) {
      c.message = "row " + std::to_string(r + 1) + " (" + labels[static_cast<std::size_t>(r)] + "): expected " +
                  std::to_string(expect) + ", got " + std::to_string(sys.rhs(r));
      return c;
    }
  }
  c.ok = true;
  c.message = "match";
  return c;
}

/// Compares every golden (with optional replacements by name) plus the Chebyshev right-hand side.
inline std::vector<Comparison> reproduce(const std::map<std::string, Golden>& overrides = {}) {
  std::vector<Comparison> out;
  for (const auto& g : goldens()) {
    const auto it = overrides.find(g.name);
    out.push_back(compare(it == overrides.end() ? g : it->second));
  }
  out.push_back(compare_chebyshev_rhs());
  return out;
}

}  // namespace pdelin::appendix_a
