/**
 * @file fdm_solver.hpp
 * @brief Assembly and classical solution of (1/h^2) L' u = f for the Poisson
 *        equation with periodic, Neumann or Dirichlet boundaries.
 *
 * Periodic problems live on [0, 2pi)^d with h = pi/n and nodes pi (i+1)/n,
 * i = 0..2n-1.  Image problems live on [0, pi]^d with the nodes of
 * images.hpp; their d-dimensional operator is the Kronecker sum of the
 * restricted 1D matrix.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdelin/error.hpp"
#include "pdelin/fft.hpp"
#include "pdelin/images.hpp"
#include "pdelin/laplacian.hpp"
#include "pdelin/stencil.hpp"
#include "pdelin/tensor.hpp"

namespace pdelin {

enum class FdmBc { periodic, neumann, dirichlet, dirichlet_alt };

inline const char* to_string(FdmBc bc) {
  switch (bc) {
    case FdmBc::periodic: return "periodic";
    case FdmBc::neumann: return "neumann";
    case FdmBc::dirichlet: return "dirichlet";
    case FdmBc::dirichlet_alt: return "dirichlet_alt";
  }
  return "?";
}

inline FdmBc parse_fdm_bc(const std::string& s) {
  if (s == "periodic") return FdmBc::periodic;
  if (s == "neumann") return FdmBc::neumann;
  if (s == "dirichlet") return FdmBc::dirichlet;
  if (s == "dirichlet_alt") return FdmBc::dirichlet_alt;
  throw InvalidArgument("unknown FDM boundary condition '" + s + "'");
}

using PointFunction = std::function<double(std::span<const double>)>;

struct FdmProblem {
  int d = 1;
  FdmBc bc = FdmBc::periodic;
  PointFunction rhs;
  std::optional<PointFunction> exact;
  int n = 8;
  int k = 1;
};

struct FdmParameters {
  int n = 0;
  int k = 0;
  double error_bound = 0.0;  ///< 2^{d/2} n^{d/2-2k+1} D (e/2)^{2k}
};

/// 2^{d/2} n^{d/2 - 2k + 1} D (e/2)^{2k}, evaluated in log space.
inline double fdm_error_bound(int d, int n, int k, double deriv_bound) {
  const double lg = 0.5 * d * std::log(2.0) + (0.5 * d - 2.0 * k + 1.0) * std::log(static_cast<double>(n)) +
                    std::log(deriv_bound) + 2.0 * k * std::log(std::numbers::e / 2.0);
  return std::exp(lg);
}

/**
 * Smallest n with n^b ln n >= ln(D/eps)/d, k = ceil(d n^b); n is then raised
 * (with k recomputed) until the error bound is <= eps.
 */
inline FdmParameters select_parameters(int d, double eps, double deriv_bound, double b = 0.5,
                                       int n_max = 1 << 20) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1)");
  if (!(deriv_bound >= 1.0)) throw InvalidArgument("derivative bound must be >= 1");
  if (!(b > 0.0 && b < 2.0 / 3.0)) throw InvalidArgument("b must lie in (0, 2/3)");
  const double target = std::log(deriv_bound / eps) / d;
  int n = 2;
  while (std::pow(n, b) * std::log(n) < target) {
    if (++n > n_max) throw Infeasible("no n below " + std::to_string(n_max) + " meets the criterion");
  }
  for (; n <= n_max; ++n) {
    const int k = static_cast<int>(std::ceil(d * std::pow(n, b)));
    const double bound = fdm_error_bound(d, n, k, deriv_bound);
    if (bound <= eps) return {n, k, bound};
  }
  throw Infeasible("error bound not reached for n <= " + std::to_string(n_max));
}

/// Assembled system (1/h^2) L' u = f on the problem grid.
struct FdmSystem {
  int d = 1;
  FdmBc bc = FdmBc::periodic;
  int n = 0;
  int side = 0;  ///< grid points per axis
  double h = 0.0;
  Stencil stencil = make_stencil(1);
  std::vector<double> nodes;  ///< 1D node coordinates, shared by every axis
  std::vector<double> rhs;
  Eigen::MatrixXd restricted;  ///< unscaled 1D restricted matrix (image BCs only)

  bool has_kernel() const { return bc == FdmBc::periodic || bc == FdmBc::neumann; }
  std::size_t size() const { return rhs.size(); }

  /// Coordinates of flat grid index `flat`.
  std::vector<double> point(std::size_t flat) const {
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int a = d - 1; a >= 0; --a) {
      x[static_cast<std::size_t>(a)] = nodes[flat % static_cast<std::size_t>(side)];
      flat /= static_cast<std::size_t>(side);
    }
    return x;
  }

  /// y = (1/h^2) L' x.
  void apply(std::span<const double> x, std::span<double> y) const {
    if (bc == FdmBc::periodic) {
      pdelin::apply(kronecker_sum(build_circulant(stencil, n), d), x, y);
    } else {
      std::fill(y.begin(), y.end(), 0.0);
      std::vector<double> work(x.begin(), x.end());
      for (int a = 0; a < d; ++a) {
        std::copy(x.begin(), x.end(), work.begin());
        for_each_line(std::span<double>(work), side, d, a, [&](std::span<double> line) {
          Eigen::Map<Eigen::VectorXd> v(line.data(), static_cast<Eigen::Index>(line.size()));
          v = (restricted * v).eval();
        });
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += work[i];
      }
    }
    const double s = 1.0 / (h * h);
    for (auto& v : y) v *= s;
  }

  /// Sparse (1/h^2) L'.
  Eigen::SparseMatrix<double> matrix() const {
    Eigen::SparseMatrix<double> M;
    if (bc == FdmBc::periodic) {
      M = materialize_sparse(kronecker_sum(build_circulant(stencil, n), d));
    } else {
      const Eigen::SparseMatrix<double> L1 = restricted.sparseView();
      Eigen::SparseMatrix<double> I(side, side);
      I.setIdentity();
      const auto total = static_cast<Eigen::Index>(size());
      M.resize(total, total);
      for (int a = 0; a < d; ++a) {
        Eigen::SparseMatrix<double> term(1, 1);
        term.insert(0, 0) = 1.0;
        for (int b = 0; b < d; ++b) {
          Eigen::SparseMatrix<double> next = Eigen::kroneckerProduct(term, a == b ? L1 : I);
          term = next;
        }
        M += term;
      }
    }
    return M / (h * h);
  }
};

/// Largest and smallest nonzero |eigenvalue| of the 1D unscaled operator.
inline std::pair<double, double> fdm_spectrum_extremes(const FdmSystem& sys) {
  if (sys.bc == FdmBc::periodic) {
    const auto op = build_circulant(sys.stencil, sys.n);
    return {spectral_norm(op), smallest_nonzero_eigenvalue(op)};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.restricted, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseAbs();
  double mx = 0.0, mn = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    mx = std::max(mx, ev(i));
    if (ev(i) > 1e-9 * std::max(1.0, mx)) mn = std::min(mn, ev(i));
  }
  // a Neumann kernel eigenvalue is exactly zero up to roundoff and is skipped above
  return {mx, mn};
}

/**
 * Condition number of the d-dimensional operator with any kernel excluded.
 * Without a kernel the smallest d-fold sum is d times the 1D minimum.
 */
inline double fdm_condition_number(const FdmSystem& sys) {
  const auto [mx, mn] = fdm_spectrum_extremes(sys);
  return sys.has_kernel() ? sys.d * mx / mn : mx / mn;
}

/**
 * Samples the right-hand side on the problem grid.  Periodic and Neumann
 * data must have zero mean (the constant vector spans the kernel).
 */
inline FdmSystem assemble(const FdmProblem& p, double compat_tol = 1e-8) {
  if (p.d < 1) throw InvalidArgument("dimension must be >= 1");
  if (!p.rhs) throw InvalidArgument("right-hand side sampler is missing");
  FdmSystem s;
  s.d = p.d;
  s.bc = p.bc;
  s.n = p.n;
  s.stencil = make_stencil(p.k);
  if (p.bc == FdmBc::periodic) {
    build_circulant(s.stencil, p.n);  // validates k against n
    s.side = 2 * p.n;
    s.h = std::numbers::pi / p.n;
    s.nodes.resize(static_cast<std::size_t>(s.side));
    for (int i = 0; i < s.side; ++i) s.nodes[static_cast<std::size_t>(i)] = (i + 1) * s.h;
  } else {
    const auto ibc = p.bc == FdmBc::neumann     ? ImageBc::neumann
                     : p.bc == FdmBc::dirichlet ? ImageBc::dirichlet
                                                : ImageBc::dirichlet_alt;
    s.restricted = restrict_laplacian(s.stencil, p.n, ibc).matrix;
    s.side = p.n;
    s.h = image_spacing(p.n, ibc);
    s.nodes = physical_nodes(p.n, ibc);
  }
  const std::size_t total = checked_pow(static_cast<std::size_t>(s.side), p.d, std::size_t{1} << 28);
  s.rhs.resize(total);
  for (std::size_t f = 0; f < total; ++f) s.rhs[f] = p.rhs(s.point(f));
  if (s.has_kernel()) {
    double mean = 0.0, rms = 0.0;
    for (double v : s.rhs) {
      mean += v;
      rms += v * v;
    }
    mean /= static_cast<double>(total);
    rms = std::sqrt(rms / static_cast<double>(total));
    if (std::abs(mean) > compat_tol * std::max(1.0, rms)) {
      throw CompatibilityError("right-hand side has mean " + std::to_string(mean) +
                               "; it must vanish for " + to_string(p.bc) + " boundaries");
    }
  }
  return s;
}

struct FdmSolution {
  std::vector<double> u;
  int iterations = 0;
  double residual = 0.0;  ///< ||(1/h^2) L' u - f|| / ||f||
  double runtime_ms = 0.0;
};

namespace detail {
inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline void remove_mean(std::span<double> v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  for (auto& x : v) x -= m;
}

inline double relative_residual(const FdmSystem& s, std::span<const double> u) {
  std::vector<double> r(u.size());
  s.apply(u, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= s.rhs[i];
  const double fn = norm2(s.rhs);
  return fn > 0.0 ? norm2(r) / fn : norm2(r);
}
}  // namespace detail

/// Periodic solve by division by the closed-form eigenvalues; the mean is pinned to zero.
inline FdmSolution solve_periodic(const FdmSystem& s) {
  if (s.bc != FdmBc::periodic) throw InvalidArgument("solve_periodic needs a periodic system");
  const auto t0 = std::chrono::steady_clock::now();
  const int N = s.side;
  std::vector<std::complex<double>> w(s.rhs.begin(), s.rhs.end());
  std::vector<int> dims(static_cast<std::size_t>(s.d), N);
  for (int a = 0; a < s.d; ++a) fft::dft_axis(w, dims, a, fft::Sign::negative);
  const std::vector<double> lam = eigenvalues(build_circulant(s.stencil, s.n));
  const double inv_h2 = 1.0 / (s.h * s.h);
  for (std::size_t f = 0; f < w.size(); ++f) {
    std::size_t rest = f;
    double mu = 0.0;
    for (int a = 0; a < s.d; ++a) {
      mu += lam[rest % static_cast<std::size_t>(N)];
      rest /= static_cast<std::size_t>(N);
    }
    w[f] = f == 0 ? 0.0 : w[f] / (mu * inv_h2);
  }
  for (int a = 0; a < s.d; ++a) fft::dft_axis(w, dims, a, fft::Sign::positive);
  FdmSolution sol;
  sol.u.resize(w.size());
  const double norm = 1.0 / static_cast<double>(w.size());
  for (std::size_t f = 0; f < w.size(); ++f) sol.u[f] = w[f].real() * norm;
  sol.residual = detail::relative_residual(s, sol.u);
  sol.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

/**
 * Conjugate gradient on -(1/h^2) L' u = -f (positive semidefinite).  Stops
 * at relative residual `tol`; the iteration cap is 10 sqrt(kappa) ln(1/tol).
 * For operators with a constant kernel the iterates are kept mean-free.
 */
inline FdmSolution solve_cg(const FdmSystem& s, double tol = 1e-12) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t N = s.size();
  const double kappa = fdm_condition_number(s);
  const int cap = static_cast<int>(std::ceil(10.0 * std::sqrt(kappa) * std::log(1.0 / tol))) + 10;
  std::vector<double> x(N, 0.0), r(s.rhs.begin(), s.rhs.end()), p(N), Ap(N);
  for (auto& v : r) v = -v;
  if (s.has_kernel()) detail::remove_mean(r);
  const double bnorm = detail::norm2(r);
  FdmSolution sol;
  if (bnorm == 0.0) {
    sol.u = x;
    return sol;
  }
  p = r;
  double rr = 0.0;
  for (double v : r) rr += v * v;
  int it = 0;
  for (; it < cap && std::sqrt(rr) > tol * bnorm; ++it) {
    s.apply(p, Ap);
    for (auto& v : Ap) v = -v;
    double pAp = 0.0;
    for (std::size_t i = 0; i < N; ++i) pAp += p[i] * Ap[i];
    const double alpha = rr / pAp;
    for (std::size_t i = 0; i < N; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    if (s.has_kernel()) detail::remove_mean(r);
    double rr_new = 0.0;
    for (double v : r) rr_new += v * v;
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < N; ++i) p[i] = r[i] + beta * p[i];
  }
  if (s.has_kernel()) detail::remove_mean(x);
  sol.u = std::move(x);
  sol.iterations = it;
  sol.residual = detail::relative_residual(s, sol.u);
  sol.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (std::sqrt(rr) > tol * bnorm) {
    throw NonConvergence("conjugate gradient hit its iteration cap of " + std::to_string(cap),
                         std::sqrt(rr) / bnorm, it);
  }
  return sol;
}

/// Eigen-division for periodic systems, conjugate gradient otherwise.
inline FdmSolution solve(const FdmSystem& s) {
  return s.bc == FdmBc::periodic ? solve_periodic(s) : solve_cg(s);
}

struct FdmErrorReport {
  double l2_abs = 0.0;      ///< ||u - u_exact||_2 over grid values
  double l2_rel = 0.0;      ///< l2_abs / ||u_exact||_2
  double linf = 0.0;        ///< max |u - u_exact|
  double normalized = 0.0;  ///< || u/||u|| - u_exact/||u_exact|| ||
};

/**
 * Errors against the exact solution sampled on the grid.  With a constant
 * kernel the exact samples are shifted to zero mean first, matching the
 * pinned solution.
 */
inline FdmErrorReport error_report(const FdmSystem& s, std::span<const double> u,
                                   const PointFunction& exact) {
  std::vector<double> ue(u.size());
  for (std::size_t f = 0; f < u.size(); ++f) ue[f] = exact(s.point(f));
  if (s.has_kernel()) detail::remove_mean(ue);
  const double en = detail::norm2(ue);
  if (en == 0.0) throw InvalidArgument("exact solution vanishes on the grid; relative errors undefined");
  const double un = detail::norm2(u);
  FdmErrorReport rep;
  double d2 = 0.0, dn2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double e = u[i] - ue[i];
    d2 += e * e;
    rep.linf = std::max(rep.linf, std::abs(e));
    const double en_i = (un > 0.0 ? u[i] / un : 0.0) - ue[i] / en;
    dn2 += en_i * en_i;
  }
  rep.l2_abs = std::sqrt(d2);
  rep.l2_rel = rep.l2_abs / en;
  rep.normalized = std::sqrt(dn2);
  return rep;
}

/// One row of an FDM sweep: n, k, d, l2_rel, linf, kappa, runtime_ms.
struct FdmCsvRow {
  int n, k, d;
  double l2_rel, linf, kappa, runtime_ms;
};

inline std::string fdm_csv_header() { return "n,k,d,l2_rel,linf,kappa,runtime_ms"; }

inline std::string to_csv(const FdmCsvRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g,%.6f", r.n, r.k, r.d, r.l2_rel, r.linf,
                r.kappa, r.runtime_ms);
  return buf;
}

}  // namespace pdelin
