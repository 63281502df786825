/**
 * @file verify.hpp
 * @brief Bound-verification suites: each case records a measured value, the
 *        bound it is held to and a pass/fail/skipped status.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pdelin/fdm_solver.hpp"
#include "pdelin/laplacian.hpp"
#include "pdelin/spectral_ops.hpp"
#include "pdelin/spectral_system.hpp"
#include "pdelin/stencil.hpp"

namespace pdelin::cli {

enum class Status { pass, fail, skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
  }
  return "?";
}

struct CheckRow {
  std::string suite;
  std::string label;     ///< parameters of the case
  std::string quantity;  ///< what was measured
  double measured = 0.0;
  std::string relation;  ///< "<=", ">=", "in", "=="
  double bound = 0.0;
  double bound_hi = 0.0;  ///< upper end when relation is "in"
  Status status = Status::pass;
  std::string note;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"fdm_kappa",     "svd_fourier",   "svd_chebyshev",
                                                 "kappa_poisson", "kappa_general", "stencil"};
  return names;
}

/// Band for kappa / (d n^2) over the fdm_kappa grid.
inline constexpr double kFdmKappaLow = 0.3;
inline constexpr double kFdmKappaHigh = 1.5;

namespace detail {

inline CheckRow upper(std::string suite, std::string label, std::string quantity, double measured, double bound) {
  CheckRow r{std::move(suite), std::move(label), std::move(quantity), measured, "<=", bound, 0.0, Status::pass, ""};
  r.status = measured <= bound ? Status::pass : Status::fail;
  return r;
}

inline CheckRow lower(std::string suite, std::string label, std::string quantity, double measured, double bound) {
  CheckRow r{std::move(suite), std::move(label), std::move(quantity), measured, ">=", bound, 0.0, Status::pass, ""};
  r.status = measured >= bound ? Status::pass : Status::fail;
  return r;
}

/// Runs f over 0..count-1 on worker threads; results keep their index order.
template <class R>
std::vector<R> parallel_map(std::size_t count, const std::function<R(std::size_t)>& f) {
  std::vector<R> out(count);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> futs;
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < workers; ++w) {
    futs.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next++; i < count; i = next++) out[i] = f(i);
    }));
  }
  for (auto& fu : futs) fu.get();
  return out;
}

inline std::string label_of(std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : kv) {
    os << (first ? "" : ",") << k << "=" << v;
    first = false;
  }
  return os.str();
}

}  // namespace detail

/**
 * Random coefficient matrix with a common-sign diagonal in [0.5, 2] and
 * off-diagonal entries scaled so that the dominance margin C is uniform in
 * [0.1, 0.9].  Symmetric when `symmetric` is set.
 */
inline Eigen::MatrixXd random_gdd_matrix(int d, std::mt19937_64& rng, bool symmetric = true) {
  std::uniform_real_distribution<double> diag(0.5, 2.0), off(-1.0, 1.0), margin(0.1, 0.9);
  const double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) A(i, i) = sign * diag(rng);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j || (symmetric && j < i)) continue;
      A(i, j) = off(rng);
      if (symmetric) A(j, i) = A(i, j);
    }
  }
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    double row = 0.0;
    for (int j = 0; j < d; ++j) {
      if (j != i) row += std::abs(A(i, j));
    }
    s += row / std::abs(A(i, i));
  }
  const double target = 1.0 - margin(rng);
  if (s > 0.0) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i != j) A(i, j) *= target / s;
      }
    }
  }
  return A;
}

/// kappa / (d n^2) within the fixed band and ||L|| <= 4 pi^2 / 3 for periodic FDM.
inline std::vector<CheckRow> suite_fdm_kappa() {
  struct Case {
    int n, k, d;
  };
  std::vector<Case> cases;
  for (int d : {1, 2, 3}) {
    for (int k : {1, 2, 4}) {
      for (int n : {8, 16, 32, 64, 128}) cases.push_back({n, k, d});
    }
  }
  const auto per = detail::parallel_map<std::vector<CheckRow>>(cases.size(), [&](std::size_t i) {
    const Case c = cases[i];
    const auto op = kronecker_sum(build_circulant(make_stencil(c.k), c.n), c.d);
    const std::string label = detail::label_of({{"n", c.n}, {"k", c.k}, {"d", c.d}});
    const double ratio = condition_number(op) / (c.d * double(c.n) * c.n);
    CheckRow band{"fdm_kappa", label, "kappa/(d n^2)", ratio, "in", kFdmKappaLow, kFdmKappaHigh, Status::pass, ""};
    band.status = ratio >= kFdmKappaLow && ratio <= kFdmKappaHigh ? Status::pass : Status::fail;
    const double norm1 = spectral_norm(build_circulant(make_stencil(c.k), c.n));
    CheckRow nrm = detail::upper("fdm_kappa", label, "||L|| (1D)", norm1, 4.0 * std::numbers::pi * std::numbers::pi / 3.0);
    return std::vector<CheckRow>{band, nrm};
  });
  std::vector<CheckRow> rows;
  for (const auto& v : per) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

/// Extreme singular values of the boundary-completed second-derivative matrix.
template <Basis B>
std::vector<CheckRow> suite_svd(int n_lo = 4, int n_hi = 64) {
  const std::string suite = B == Basis::fourier ? "svd_fourier" : "svd_chebyshev";
  const auto per = detail::parallel_map<std::vector<CheckRow>>(static_cast<std::size_t>(n_hi - n_lo + 1), [&](std::size_t i) {
    const int n = n_lo + static_cast<int>(i);
    const auto e = dense_singular_extremes(DenseMatrix<B>(diff_matrix<B>(2, n, true).matrix));
    const std::string label = detail::label_of({{"n", n}});
    if constexpr (B == Basis::fourier) {
      return std::vector<CheckRow>{detail::upper(suite, label, "sigma_max", e.sigma_max, std::pow(2.0 * n, 2.5)),
                                   detail::lower(suite, label, "sigma_min", e.sigma_min, 1.0 / std::numbers::sqrt2)};
    } else {
      return std::vector<CheckRow>{detail::upper(suite, label, "sigma_max", e.sigma_max, std::pow(double(n), 4)),
                                   detail::lower(suite, label, "sigma_min", e.sigma_min, 1.0 / 16.0)};
    }
  });
  std::vector<CheckRow> rows;
  for (const auto& v : per) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

/// kappa(L_Poisson) <= (2n)^4 for d in {1,2,3}, n <= n_max, both bases, dense SVD.
inline std::vector<CheckRow> suite_kappa_poisson(int n_max = 8) {
  struct Case {
    Basis b;
    int d, n;
  };
  std::vector<Case> cases;
  for (Basis b : {Basis::fourier, Basis::chebyshev}) {
    for (int d : {1, 2, 3}) {
      for (int n = 2; n <= n_max; ++n) cases.push_back({b, d, n});
    }
  }
  return detail::parallel_map<CheckRow>(cases.size(), [&](std::size_t i) {
    const Case c = cases[i];
    const auto op = EllipticOperator::poisson(c.d);
    const std::string label = std::string(to_string(c.b)) + "," + detail::label_of({{"d", c.d}, {"n", c.n}});
    double kappa = 0.0;
    if (c.b == Basis::fourier) {
      const auto sys = assemble_system<Basis::fourier>(op, c.n, Vector<Basis::fourier>::Zero(checked_pow(c.n + 1, c.d)),
                                                       BoundaryData<Basis::fourier>::zero(c.d, c.n));
      kappa = condition_report(sys).kappa;
    } else {
      const auto sys = assemble_system<Basis::chebyshev>(op, c.n, Vector<Basis::chebyshev>::Zero(checked_pow(c.n + 1, c.d)),
                                                         BoundaryData<Basis::chebyshev>::zero(c.d, c.n));
      kappa = condition_report(sys).kappa;
    }
    CheckRow r = detail::upper("kappa_poisson", label, "kappa", kappa, std::pow(2.0 * c.n, 4));
    if (!std::isfinite(kappa)) r.note = "singular";
    return r;
  });
}

/**
 * For `count` seeded random GDD operators (d alternating 2, 3; n cycling
 * through 3..6; both bases): kappa(L) against the general bound and
 * ||L2 L1^{-1}|| against 1 - C.  A non-GDD operator is appended and must be
 * rejected before any bound is evaluated; it is reported as skipped.
 */
inline std::vector<CheckRow> suite_kappa_general(std::uint64_t seed, int count = 50) {
  struct Case {
    Basis b;
    int d, n;
    Eigen::MatrixXd A;
  };
  std::mt19937_64 rng(seed);
  std::vector<Case> cases;
  for (int i = 0; i < count; ++i) {
    const int d = 2 + i % 2;
    const int n = 3 + (i / 2) % 4;
    Eigen::MatrixXd A = random_gdd_matrix(d, rng);
    cases.push_back({Basis::fourier, d, n, A});
    cases.push_back({Basis::chebyshev, d, n, A});
  }
  auto per = detail::parallel_map<std::vector<CheckRow>>(cases.size(), [&](std::size_t i) {
    const Case& c = cases[i];
    const EllipticOperator op(c.A);
    const std::string label = std::string(to_string(c.b)) + "," +
                              detail::label_of({{"op", static_cast<double>(i / 2)}, {"d", c.d}, {"n", c.n}, {"C", op.gdd().C}});
    double kappa = 0.0, bound = 0.0, ratio = 0.0;
    const std::size_t N = checked_pow(c.n + 1, c.d);
    if (c.b == Basis::fourier) {
      const auto sys = assemble_system<Basis::fourier>(op, c.n, Vector<Basis::fourier>::Zero(N),
                                                       BoundaryData<Basis::fourier>::zero(c.d, c.n));
      const auto rep = condition_report(sys);
      kappa = rep.kappa;
      bound = rep.bound_general;
      ratio = perturbation_ratio<Basis::fourier>(op, c.n);
    } else {
      const auto sys = assemble_system<Basis::chebyshev>(op, c.n, Vector<Basis::chebyshev>::Zero(N),
                                                         BoundaryData<Basis::chebyshev>::zero(c.d, c.n));
      const auto rep = condition_report(sys);
      kappa = rep.kappa;
      bound = rep.bound_general;
      ratio = perturbation_ratio<Basis::chebyshev>(op, c.n);
    }
    return std::vector<CheckRow>{detail::upper("kappa_general", label, "kappa", kappa, bound),
                                 detail::upper("kappa_general", label, "||L2 L1^-1||", ratio, 1.0 - op.gdd().C)};
  });
  std::vector<CheckRow> rows;
  for (const auto& v : per) rows.insert(rows.end(), v.begin(), v.end());

  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 0.8, 0.8, 1.0;  // C = 1 - 0.8 - 0.8 < 0
  CheckRow skip{"kappa_general", "non-gdd,d=2", "kappa", 0.0, "<=", 0.0, 0.0, Status::skipped, ""};
  try {
    const EllipticOperator op(bad);
    assemble_system<Basis::chebyshev>(op, 4, Vector<Basis::chebyshev>::Zero(25), BoundaryData<Basis::chebyshev>::zero(2, 4));
    skip.status = Status::fail;
    skip.note = "non-GDD operator was not rejected";
  } catch (const GddRejected& e) {
    skip.note = std::string("rejected: ") + e.what();
  }
  rows.push_back(skip);
  return rows;
}

/// Exact rational stencil identities for k = 1..k_max.
inline std::vector<CheckRow> suite_stencil(int k_max = 30) {
  std::vector<CheckRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    const StencilIdentities s = check_exact_identities(k);
    const std::string label = detail::label_of({{"k", k}});
    auto row = [&](const char* what, bool ok) {
      CheckRow r{"stencil", label, what, ok ? 1.0 : 0.0, "==", 1.0, 0.0, ok ? Status::pass : Status::fail, "exact"};
      rows.push_back(r);
    };
    row("symmetry", s.symmetric);
    row("zero_sum", s.zero_sum);
    row("|r_j|<=2/j^2", s.bounded);
    row("sum r_j j^2 = 1", s.second_moment);
  }
  return rows;
}

/// Dispatches a suite by name; throws InvalidArgument for unknown names.
inline std::vector<CheckRow> run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "fdm_kappa") return suite_fdm_kappa();
  if (name == "svd_fourier") return suite_svd<Basis::fourier>();
  if (name == "svd_chebyshev") return suite_svd<Basis::chebyshev>();
  if (name == "kappa_poisson") return suite_kappa_poisson();
  if (name == "kappa_general") return suite_kappa_general(seed);
  if (name == "stencil") return suite_stencil();
  throw InvalidArgument("unknown suite '" + name + "'");
}

inline bool all_passed(const std::vector<CheckRow>& rows) {
  return std::none_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.status == Status::fail; });
}

inline std::string check_csv_header() { return "suite,case,quantity,measured,relation,bound,bound_hi,status,note"; }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string to_csv(const CheckRow& r) {
  char num[128];
  std::snprintf(num, sizeof num, "%.17g", r.measured);
  std::string out = csv_field(r.suite) + "," + csv_field(r.label) + "," + csv_field(r.quantity) + "," + num + "," +
                    r.relation + ",";
  std::snprintf(num, sizeof num, "%.17g,%.17g", r.bound, r.bound_hi);
  return out + num + "," + to_string(r.status) + "," + csv_field(r.note);
}

inline nlohmann::json to_json(const CheckRow& r) {
  nlohmann::json j = {{"suite", r.suite},   {"case", r.label},       {"quantity", r.quantity},
                      {"relation", r.relation}, {"bound", r.bound},  {"status", to_string(r.status)},
                      {"note", r.note}};
  j["measured"] = std::isfinite(r.measured) ? nlohmann::json(r.measured) : nlohmann::json(std::to_string(r.measured));
  if (r.relation == "in") j["bound_hi"] = r.bound_hi;
  return j;
}

/// Fixed-width table for terminals.
inline std::string to_table(const std::vector<CheckRow>& rows) {
  std::ostringstream os;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-14s %-40s %-18s %14s %4s %-24s %s\n", "suite", "case", "quantity", "measured", "", "bound",
                "status");
  os << buf;
  for (const auto& r : rows) {
    char bnd[64];
    if (r.relation == "in") {
      std::snprintf(bnd, sizeof bnd, "[%.4g, %.4g]", r.bound, r.bound_hi);
    } else {
      std::snprintf(bnd, sizeof bnd, "%.6g", r.bound);
    }
    std::snprintf(buf, sizeof buf, "%-14s %-40s %-18s %14.6g %4s %-24s %s", r.suite.c_str(), r.label.c_str(), r.quantity.c_str(),
                  r.measured, r.relation.c_str(), bnd, to_string(r.status));
    os << buf;
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << '\n';
  }
  return os.str();
}

}  // namespace pdelin::cli
