/**
 * @file spectral_system.hpp
 * @brief Coefficient-space linear system L c = b for constant-coefficient
 *        second-order elliptic problems, the truncation-order rule, the
 *        state-preparation ratio q and condition-number reports.
 *
 * L = sum_j A_jj D2bar^{(j)} + sum_{j1<j2} (A_j1j2 + A_j2j1) D^{(j1)} D^{(j2)}.
 *
 * Right-hand side: the coefficients fhat, zeroed on rows whose every index
 * is a boundary index, plus A_jj times the boundary coefficients of axis j
 * placed in the slice k_j = n (data at x_j = +1) and k_j = n-1 (data at
 * x_j = -1).  For the Fourier basis the single boundary slice is
 * k_j = floor(n/2); its all-ones row evaluates the series at x_j = 0, so the
 * "plus" data of axis j is u restricted to that hyperplane and the "minus"
 * data must be absent.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pdelin/error.hpp"
#include "pdelin/spectral_ops.hpp"
#include "pdelin/tensor.hpp"

namespace pdelin {

/// How the periodic (Fourier) system is made invertible.
enum class FourierClosure {
  kronecker,        ///< all-ones row on every axis, as in the Kronecker-sum operator
  point_value,      ///< single all-ones row at the centre: u(0, ..., 0) = gamma
  coefficient_pin,  ///< single unit row at the centre: c_{m,...,m} = gamma
};

inline const char* to_string(FourierClosure c) {
  switch (c) {
    case FourierClosure::kronecker: return "kronecker";
    case FourierClosure::point_value: return "point_value";
    case FourierClosure::coefficient_pin: return "coefficient_pin";
  }
  return "?";
}

inline FourierClosure parse_closure(const std::string& s) {
  if (s == "kronecker") return FourierClosure::kronecker;
  if (s == "point_value") return FourierClosure::point_value;
  if (s == "coefficient_pin") return FourierClosure::coefficient_pin;
  throw InvalidArgument("unknown closure '" + s + "'");
}

/**
 * n = floor(ln Omega / ln ln Omega), Omega = g' (1 + eps) / (g eps), clamped
 * below at 2.
 */
inline int choose_truncation(double g, double g_prime, double eps) {
  if (!(g > 0.0)) throw InvalidArgument("g must be positive");
  if (!(g_prime >= g)) throw InvalidArgument("g' must be >= g");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1)");
  const double omega = g_prime * (1.0 + eps) / (g * eps);
  if (!(omega > std::numbers::e)) {
    throw EpsTooLarge("Omega = " + std::to_string(omega) + " <= e; ln ln Omega is not positive");
  }
  const double n = std::floor(std::log(omega) / std::log(std::log(omega)));
  return std::max(2, static_cast<int>(n));
}

/// g' e^n / (2n)^n, the left side of the inequality the truncation rule targets.
inline double truncation_lhs(double g_prime, int n) {
  return g_prime * std::exp(n - n * std::log(2.0 * n));
}

/// g eps / (1 + eps), the right side.
inline double truncation_rhs(double g, double eps) { return g * eps / (1.0 + eps); }

/// Boundary coefficients per axis, each of length (n+1)^{d-1} (1 when d = 1).
template <Basis B>
struct BoundaryData {
  std::vector<Vector<B>> plus;
  std::vector<Vector<B>> minus;
  Scalar<B> point = Scalar<B>(0);  ///< gamma for the single-row Fourier closures

  static BoundaryData zero(int d, int n) {
    BoundaryData b;
    const auto len = static_cast<Eigen::Index>(checked_pow(static_cast<std::size_t>(n + 1), d) / (n + 1));
    b.plus.assign(static_cast<std::size_t>(d), Vector<B>::Zero(len));
    b.minus.assign(static_cast<std::size_t>(d), Vector<B>::Zero(len));
    return b;
  }
};

/**
 * Places a (d-1)-dimensional coefficient block into slice k_axis = slice of a
 * full (n+1)^d vector (remaining axes keep their relative order).
 */
template <Basis B>
Vector<B> embed_slice(const Vector<B>& g, int axis, int slice, int d, int n) {
  const int N = n + 1;
  const std::size_t total = checked_pow(static_cast<std::size_t>(N), d);
  if (static_cast<std::size_t>(g.size()) * static_cast<std::size_t>(N) != total) {
    throw InvalidArgument("boundary block has length " + std::to_string(g.size()) + ", expected " +
                          std::to_string(total / static_cast<std::size_t>(N)));
  }
  Vector<B> out = Vector<B>::Zero(static_cast<Eigen::Index>(total));
  std::size_t inner = 1;
  for (int a = axis + 1; a < d; ++a) inner *= static_cast<std::size_t>(N);
  const std::size_t outer = total / (inner * static_cast<std::size_t>(N));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      out(static_cast<Eigen::Index>((o * N + static_cast<std::size_t>(slice)) * inner + i)) =
          g(static_cast<Eigen::Index>(o * inner + i));
    }
  }
  return out;
}

template <Basis B>
struct SpectralSystem {
  int n = 0;
  int d = 0;
  EllipticOperator op = EllipticOperator::poisson(1);
  FourierClosure closure = FourierClosure::kronecker;
  SparseMatrix<B> L;
  Vector<B> rhs;
};

namespace detail {

template <Basis B>
void check_shapes(const EllipticOperator& op, int n, const Vector<B>& fhat) {
  if (n < min_truncation<B>()) throw InvalidArgument("truncation n too small for this basis");
  const std::size_t total = checked_pow(static_cast<std::size_t>(n + 1), op.d());
  if (static_cast<std::size_t>(fhat.size()) != total) {
    throw InvalidArgument("fhat has length " + std::to_string(fhat.size()) + ", expected " +
                          std::to_string(total));
  }
}

inline std::size_t centre_index(int n, int d) {
  const std::size_t N = static_cast<std::size_t>(n + 1);
  std::size_t f = 0;
  for (int a = 0; a < d; ++a) f = f * N + static_cast<std::size_t>(n / 2);
  return f;
}

/// Replaces row `row` of a column-major sparse matrix by the given dense row.
template <class T>
Eigen::SparseMatrix<T> replace_row(const Eigen::SparseMatrix<T>& M, Eigen::Index row,
                                   const std::vector<std::pair<Eigen::Index, T>>& entries) {
  std::vector<Eigen::Triplet<T>> trip;
  for (int c = 0; c < M.outerSize(); ++c) {
    for (typename Eigen::SparseMatrix<T>::InnerIterator it(M, c); it; ++it) {
      if (it.row() != row) trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (const auto& [col, v] : entries) trip.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
  Eigen::SparseMatrix<T> out(M.rows(), M.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace detail

/**
 * Assembles L and the right-hand side.  The operator must pass the global
 * diagonal dominance test.  `closure` applies to the Fourier basis only.
 */
template <Basis B>
SpectralSystem<B> assemble_system(const EllipticOperator& op, int n, const Vector<B>& fhat,
                                  const BoundaryData<B>& gamma,
                                  FourierClosure closure = FourierClosure::kronecker) {
  if (!op.gdd().accepted) {
    throw GddRejected("coefficient matrix fails global diagonal dominance (C = " +
                      std::to_string(op.gdd().C) + ")");
  }
  detail::check_shapes<B>(op, n, fhat);
  const int d = op.d();
  const int N = n + 1;
  SpectralSystem<B> sys;
  sys.n = n;
  sys.d = d;
  sys.op = op;
  sys.closure = B == Basis::fourier ? closure : FourierClosure::kronecker;

  if (B == Basis::fourier && closure != FourierClosure::kronecker) {
    const SparseMatrix<B> D2 = diff_matrix<B>(2, n, false).matrix;
    SparseMatrix<B> L = assemble_mixed_part<B>(op, n);
    for (int a = 0; a < d; ++a) L += Scalar<B>(op(a, a)) * on_axis<B>(D2, a, d);
    const auto c = static_cast<Eigen::Index>(detail::centre_index(n, d));
    std::vector<std::pair<Eigen::Index, Scalar<B>>> row;
    if (closure == FourierClosure::point_value) {
      for (Eigen::Index j = 0; j < L.cols(); ++j) row.emplace_back(j, Scalar<B>(1));
    } else {
      row.emplace_back(c, Scalar<B>(1));
    }
    sys.L = detail::replace_row(L, c, row);
    sys.rhs = fhat;
    sys.rhs(c) = gamma.point;
    return sys;
  }

  sys.L = assemble_diagonal_part<B>(op, n) + assemble_mixed_part<B>(op, n);
  if (gamma.plus.size() != static_cast<std::size_t>(d) || gamma.minus.size() != static_cast<std::size_t>(d)) {
    throw InvalidArgument("boundary data must provide plus and minus blocks for each of the " +
                          std::to_string(d) + " axes");
  }
  sys.rhs = fhat;
  // f survives only on rows where at least one axis index is interior
  for (std::size_t f = 0; f < static_cast<std::size_t>(fhat.size()); ++f) {
    std::size_t rest = f;
    bool all_boundary = true;
    for (int a = 0; a < d && all_boundary; ++a) {
      all_boundary = is_boundary_index<B>(static_cast<int>(rest % N), n);
      rest /= N;
    }
    if (all_boundary) sys.rhs(static_cast<Eigen::Index>(f)) = Scalar<B>(0);
  }
  for (int a = 0; a < d; ++a) {
    const Scalar<B> Aaa(op(a, a));
    const auto& gp = gamma.plus[static_cast<std::size_t>(a)];
    const auto& gm = gamma.minus[static_cast<std::size_t>(a)];
    if constexpr (B == Basis::fourier) {
      if (gm.size() != 0 && gm.cwiseAbs().maxCoeff() != 0.0) {
        throw InvalidArgument("Fourier boundary rows take a single data block per axis; minus block must be zero");
      }
    }
    sys.rhs += Aaa * embed_slice<B>(gp, a, boundary_row_plus<B>(n), d, n);
    if constexpr (B == Basis::chebyshev) {
      sys.rhs += Aaa * embed_slice<B>(gm, a, boundary_row_minus<B>(n), d, n);
    }
  }
  return sys;
}

struct StatePrep {
  double q = 1.0;
  double success_probability = 1.0;  ///< 1/q^2
};

/**
 * q = sqrt( sum_k sum_j [|f_k|^2 + |A_jj g+_jk|^2 + |A_jj g-_jk|^2]
 *         / sum_k sum_j |f_k + A_jj g+_jk + A_jj g-_jk|^2 )
 * with g+-_j the full-length embedded boundary vectors of axis j.
 */
template <Basis B>
StatePrep state_prep_q(const Vector<B>& fhat, const std::vector<Vector<B>>& gplus_full,
                       const std::vector<Vector<B>>& gminus_full, const EllipticOperator& op) {
  const int d = op.d();
  if (gplus_full.size() != static_cast<std::size_t>(d) || gminus_full.size() != static_cast<std::size_t>(d)) {
    throw InvalidArgument("need one plus and one minus vector per axis");
  }
  double num = 0.0, den = 0.0;
  for (int j = 0; j < d; ++j) {
    const auto& gp = gplus_full[static_cast<std::size_t>(j)];
    const auto& gm = gminus_full[static_cast<std::size_t>(j)];
    if (gp.size() != fhat.size() || gm.size() != fhat.size()) throw InvalidArgument("length mismatch in q");
    const double a = op(j, j);
    num += fhat.squaredNorm() + (a * gp).squaredNorm() + (a * gm).squaredNorm();
    den += (fhat + a * gp + a * gm).squaredNorm();
  }
  if (!(den > 0.0)) throw DegenerateRhs("state-preparation denominator vanishes");
  StatePrep s;
  s.q = std::sqrt(num / den);
  s.success_probability = 1.0 / (s.q * s.q);
  return s;
}

/// q from per-axis boundary blocks, embedded in their designated slices.
template <Basis B>
StatePrep state_prep_q(const Vector<B>& fhat, const BoundaryData<B>& gamma, const EllipticOperator& op,
                       int n) {
  detail::check_shapes<B>(op, n, fhat);
  const int d = op.d();
  std::vector<Vector<B>> gp, gm;
  for (int a = 0; a < d; ++a) {
    gp.push_back(embed_slice<B>(gamma.plus.at(static_cast<std::size_t>(a)), a, boundary_row_plus<B>(n), d, n));
    gm.push_back(B == Basis::chebyshev
                     ? embed_slice<B>(gamma.minus.at(static_cast<std::size_t>(a)), a, boundary_row_minus<B>(n), d, n)
                     : Vector<B>::Zero(fhat.size()));
  }
  return state_prep_q<B>(fhat, gp, gm, op);
}

struct SingularExtremes {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  bool approximate = false;
};

/// Extreme singular values of a dense matrix via divide-and-conquer SVD.
template <class Dense>
SingularExtremes dense_singular_extremes(const Dense& M) {
  Eigen::BDCSVD<Dense> svd(M);
  const auto& s = svd.singularValues();
  return {s(0), s(s.size() - 1), false};
}

/**
 * Iterative estimates: power iteration on L^H L for sigma_max, inverse
 * iteration through a sparse LU of L and L^H for sigma_min, both to a
 * relative change of `tol`.
 */
template <class T>
SingularExtremes iterative_singular_extremes(const Eigen::SparseMatrix<T>& L, double tol = 1e-6,
                                             int max_iter = 2000) {
  using V = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  SingularExtremes r;
  r.approximate = true;
  V x = V::Ones(L.cols()).normalized();
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    V y = L.adjoint() * (L * x);
    const double lam = y.norm();
    x = y / lam;
    r.sigma_max = std::sqrt(lam);
    if (std::abs(lam - prev) <= tol * lam) break;
    prev = lam;
  }
  Eigen::SparseMatrix<T> Lc = L;
  Lc.makeCompressed();
  Eigen::SparseMatrix<T> LH = L.adjoint();
  LH.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<T>> lu(Lc), luh(LH);
  if (lu.info() != Eigen::Success || luh.info() != Eigen::Success) {
    r.sigma_min = 0.0;
    return r;
  }
  x = V::Ones(L.cols()).normalized();
  prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    V y = lu.solve(V(luh.solve(x)));
    const double mu = y.norm();
    x = y / mu;
    r.sigma_min = 1.0 / std::sqrt(mu);
    if (std::abs(mu - prev) <= tol * mu) break;
    prev = mu;
  }
  return r;
}

struct ConditionReport {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double kappa = 0.0;
  double bound_poisson = 0.0;  ///< (2n)^4
  double bound_general = 0.0;  ///< ||A||_Sigma / (C ||A||_*) (2n)^4
  bool within_poisson = false;
  bool within_general = false;
  bool approximate = false;
};

/// Extreme singular values of L: dense SVD up to `dense_budget` rows, iterative above.
template <Basis B>
ConditionReport condition_report(const SpectralSystem<B>& sys, std::size_t dense_budget = 4096) {
  ConditionReport r;
  SingularExtremes e;
  if (static_cast<std::size_t>(sys.L.rows()) <= dense_budget) {
    e = dense_singular_extremes(DenseMatrix<B>(sys.L));
  } else {
    e = iterative_singular_extremes(sys.L);
  }
  r.sigma_max = e.sigma_max;
  r.sigma_min = e.sigma_min;
  r.approximate = e.approximate;
  r.kappa = e.sigma_min > 0.0 ? e.sigma_max / e.sigma_min : std::numeric_limits<double>::infinity();
  r.bound_poisson = std::pow(2.0 * sys.n, 4);
  const auto& g = sys.op.gdd();
  r.bound_general = g.norm_sigma / (g.C * g.norm_star) * r.bound_poisson;
  r.within_poisson = r.kappa <= r.bound_poisson;
  r.within_general = r.kappa <= r.bound_general;
  return r;
}

/// ||L_2 L_1^{-1}||_2 with L_1 the diagonal-coefficient part and L_2 the mixed part (dense).
template <Basis B>
double perturbation_ratio(const EllipticOperator& op, int n, std::size_t dense_budget = 4096) {
  const std::size_t total = checked_pow(static_cast<std::size_t>(n + 1), op.d(), dense_budget);
  (void)total;
  const DenseMatrix<B> L1 = DenseMatrix<B>(assemble_diagonal_part<B>(op, n));
  const DenseMatrix<B> L2 = DenseMatrix<B>(assemble_mixed_part<B>(op, n));
  if (!Eigen::FullPivLU<DenseMatrix<B>>(L1).isInvertible()) return std::numeric_limits<double>::infinity();
  // X = L2 L1^{-1} solves X L1 = L2, i.e. L1^T X^T = L2^T
  const DenseMatrix<B> Xt = L1.transpose().partialPivLu().solve(L2.transpose());
  Eigen::BDCSVD<DenseMatrix<B>> svd(Xt);
  return svd.singularValues()(0);
}

}  // namespace pdelin
