/**
 * @file laplacian.hpp
 * @brief Periodic finite-difference Laplacians on a 2n-site cycle and their
 *        d-dimensional Kronecker sums.
 *
 * The 1D operator is the circulant r_0 I + sum_{j=1}^k r_j (S^j + S^{-j}),
 * held through its symbol (first column).  Its eigenvalues are
 *
 *     lambda_l = sum_{j=1}^k 2 r_j (cos(pi l j / n) - 1),   l = 0..2n-1,
 *
 * which equals r_0 + sum 2 r_j cos(pi l j / n) because r_0 = -2 sum r_j, and
 * makes lambda_0 vanish exactly.  The d-dimensional operator
 * L' = sum_i I^{(i-1)} (x) L (x) I^{(d-i)} has eigenvalues that are d-fold sums.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "pdelin/error.hpp"
#include "pdelin/stencil.hpp"
#include "pdelin/tensor.hpp"

namespace pdelin {

/// Default cap on the number of rows of any dense materialization.
inline constexpr std::size_t kDenseBudget = 4096;

class CirculantOperator {
 public:
  CirculantOperator(Stencil s, int n, int dim) : stencil_(std::move(s)), n_(n), dim_(dim) {}

  int n() const noexcept { return n_; }
  int dim() const noexcept { return dim_; }
  const Stencil& stencil() const noexcept { return stencil_; }

  /// Sites per axis (2n).
  int sites() const noexcept { return 2 * n_; }

  /// Total unknowns (2n)^d.
  std::size_t size() const { return checked_pow(static_cast<std::size_t>(sites()), dim_); }

  /// True when k >= n^{2/3}, outside the regime k = o(n^{2/3}) the scaling analysis assumes.
  bool wide_stencil() const noexcept {
    return stencil_.k() >= std::cbrt(static_cast<double>(n_) * n_);
  }

  /// First column of the 1D circulant: entry m holds r_j for m = +-j (mod 2n).
  std::vector<double> symbol() const {
    const int N = sites();
    std::vector<double> c(static_cast<std::size_t>(N), 0.0);
    c[0] = stencil_.r(0);
    for (int j = 1; j <= stencil_.k(); ++j) {
      c[static_cast<std::size_t>(j % N)] += stencil_.r(j);
      c[static_cast<std::size_t>((N - j) % N)] += stencil_.r(j);
    }
    return c;
  }

 private:
  Stencil stencil_;
  int n_;
  int dim_;
};

/**
 * 1D circulant on 2n sites.  Requires k < n so that the 2k+1 stencil points
 * are distinct sites of the cycle.
 */
inline CirculantOperator build_circulant(const Stencil& s, int n) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (s.k() >= n) {
    throw InvalidArgument("stencil half-width k = " + std::to_string(s.k()) +
                          " does not fit on a cycle of " + std::to_string(2 * n) + " sites");
  }
  return CirculantOperator(s, n, 1);
}

/// d-dimensional Kronecker sum of a 1D operator.
inline CirculantOperator kronecker_sum(const CirculantOperator& op, int d) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  if (op.dim() != 1) throw InvalidArgument("kronecker_sum expects a 1D operator");
  return CirculantOperator(op.stencil(), op.n(), d);
}

/// Closed-form eigenvalues lambda_l of the 1D operator, l = 0..2n-1.
inline std::vector<double> eigenvalues(const CirculantOperator& op) {
  const int N = op.sites();
  const Stencil& s = op.stencil();
  std::vector<double> lam(static_cast<std::size_t>(N));
  for (int l = 0; l < N; ++l) {
    double acc = 0.0;
    for (int j = s.k(); j >= 1; --j) {
      const double c = std::cos(std::numbers::pi * static_cast<double>(l) * j / op.n());
      acc += 2.0 * s.r(j) * (c - 1.0);
    }
    lam[static_cast<std::size_t>(l)] = acc;
  }
  return lam;
}

/// All (2n)^d eigenvalues of the Kronecker sum, in flat row-major order.
inline std::vector<double> eigenvalues_nd(const CirculantOperator& op,
                                          std::size_t budget = kDenseBudget * 64) {
  const std::vector<double> lam = eigenvalues(op);
  const int N = op.sites();
  const std::size_t total = checked_pow(static_cast<std::size_t>(N), op.dim(), budget);
  std::vector<double> out(total, 0.0);
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t rest = f;
    double acc = 0.0;
    for (int a = 0; a < op.dim(); ++a) {
      acc += lam[rest % static_cast<std::size_t>(N)];
      rest /= static_cast<std::size_t>(N);
    }
    out[f] = acc;
  }
  return out;
}

namespace detail {
struct SpectrumExtremes {
  double max_abs;
  double min_nonzero_abs;
};

inline SpectrumExtremes extremes_1d(const CirculantOperator& op) {
  const std::vector<double> lam = eigenvalues(op);
  SpectrumExtremes e{0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t l = 0; l < lam.size(); ++l) {
    const double a = std::abs(lam[l]);
    e.max_abs = std::max(e.max_abs, a);
    if (l != 0) e.min_nonzero_abs = std::min(e.min_nonzero_abs, a);
  }
  return e;
}
}  // namespace detail

/**
 * Spectral norm of the operator.  All 1D eigenvalues are <= 0, so the
 * largest d-fold sum in magnitude is d max|lambda|.
 */
inline double spectral_norm(const CirculantOperator& op) {
  return op.dim() * detail::extremes_1d(op).max_abs;
}

/// Smallest nonzero |eigenvalue|; for the Kronecker sum it equals the 1D value.
inline double smallest_nonzero_eigenvalue(const CirculantOperator& op) {
  return detail::extremes_1d(op).min_nonzero_abs;
}

/// max|lambda| / min_{lambda != 0}|lambda| with the constant kernel excluded.
inline double condition_number(const CirculantOperator& op) {
  if (op.n() < 2) throw InvalidArgument("condition number needs n >= 2");
  const auto e = detail::extremes_1d(op);
  return op.dim() * e.max_abs / e.min_nonzero_abs;
}

inline double condition_number_1d(const CirculantOperator& op) {
  if (op.dim() != 1) throw InvalidArgument("condition_number_1d expects a 1D operator");
  return condition_number(op);
}

/// Gershgorin radius 2 sum_{j>=1} |r_j| around the diagonal r_0.
inline double gershgorin_radius(const Stencil& s) {
  double acc = 0.0;
  for (int j = 1; j <= s.k(); ++j) acc += std::abs(s.r(j));
  return 2.0 * acc;
}

/// Sparse matrix of the (Kronecker-sum) operator; rows capped by `budget`.
inline Eigen::SparseMatrix<double> materialize_sparse(const CirculantOperator& op,
                                                      std::size_t budget = kDenseBudget * 64) {
  const int N = op.sites();
  const std::size_t total = checked_pow(static_cast<std::size_t>(N), op.dim(), budget);
  const Stencil& s = op.stencil();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(total * (static_cast<std::size_t>(op.dim()) * 2 * s.k() + 1));
  std::size_t stride = 1;
  for (int a = op.dim() - 1; a >= 0; --a) {
    for (std::size_t row = 0; row < total; ++row) {
      const int i = static_cast<int>((row / stride) % N);
      const std::size_t base = row - static_cast<std::size_t>(i) * stride;
      for (int j = -s.k(); j <= s.k(); ++j) {
        const std::size_t m = static_cast<std::size_t>(((i + j) % N + N) % N);
        trip.emplace_back(static_cast<int>(row), static_cast<int>(base + m * stride), s.r(j));
      }
    }
    stride *= static_cast<std::size_t>(N);
  }
  Eigen::SparseMatrix<double> M(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

/// Dense matrix; throws TooLarge above `budget` rows.
inline Eigen::MatrixXd materialize(const CirculantOperator& op,
                                   std::size_t budget = kDenseBudget) {
  checked_pow(static_cast<std::size_t>(op.sites()), op.dim(), budget);
  return Eigen::MatrixXd(materialize_sparse(op, budget));
}

/// Matrix-free y = L' x on the (2n)^d grid.
inline void apply(const CirculantOperator& op, std::span<const double> x, std::span<double> y) {
  const std::size_t total = op.size();
  if (x.size() != total || y.size() != total) throw InvalidArgument("vector length mismatch");
  const int N = op.sites();
  const Stencil& s = op.stencil();
  std::fill(y.begin(), y.end(), 0.0);
  std::size_t stride = 1;
  for (int a = op.dim() - 1; a >= 0; --a) {
    for (std::size_t row = 0; row < total; ++row) {
      const int i = static_cast<int>((row / stride) % N);
      const std::size_t base = row - static_cast<std::size_t>(i) * stride;
      double acc = s.r(0) * x[row];
      for (int j = 1; j <= s.k(); ++j) {
        acc += s.r(j) * (x[base + static_cast<std::size_t>((i + j) % N) * stride] +
                         x[base + static_cast<std::size_t>((i - j + N) % N) * stride]);
      }
      y[row] += acc;
    }
    stride *= static_cast<std::size_t>(N);
  }
}

}  // namespace pdelin
