/**
 * @file spectral_ops.hpp
 * @brief Fourier and Chebyshev differentiation matrices in coefficient
 *        space, boundary rows, tensor-product operators and the global
 *        diagonal dominance test for coefficient matrices.
 *
 * Coefficient index k = 0..n.  Fourier basis functions are
 * exp(i (k - floor(n/2)) pi x); Chebyshev basis functions are T_k(x).
 * Multi-dimensional coefficients are stored row-major with axis 0 slowest,
 * so the operator acting on axis a is I^{(a)} (x) M (x) I^{(d-1-a)}.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "pdelin/error.hpp"
#include "pdelin/tensor.hpp"

namespace pdelin {

enum class Basis { fourier, chebyshev };

inline const char* to_string(Basis b) { return b == Basis::fourier ? "fourier" : "chebyshev"; }

inline Basis parse_basis(const std::string& s) {
  if (s == "fourier") return Basis::fourier;
  if (s == "chebyshev") return Basis::chebyshev;
  throw InvalidArgument("unknown basis '" + s + "'");
}

/// Complex scalars on the Fourier path, real on the Chebyshev path.
template <Basis B>
using Scalar = std::conditional_t<B == Basis::fourier, std::complex<double>, double>;

template <Basis B>
using SparseMatrix = Eigen::SparseMatrix<Scalar<B>>;

template <Basis B>
using Vector = Eigen::Matrix<Scalar<B>, Eigen::Dynamic, 1>;

template <Basis B>
using DenseMatrix = Eigen::Matrix<Scalar<B>, Eigen::Dynamic, Eigen::Dynamic>;

/// Row holding the boundary constraint(s) for one axis.
template <Basis B>
constexpr int boundary_row_plus(int n) {
  return B == Basis::fourier ? n / 2 : n;
}

/// Second boundary row (Chebyshev only; equals the first row for Fourier).
template <Basis B>
constexpr int boundary_row_minus(int n) {
  return B == Basis::fourier ? n / 2 : n - 1;
}

template <Basis B>
constexpr bool is_boundary_index(int k, int n) {
  return k == boundary_row_plus<B>(n) || k == boundary_row_minus<B>(n);
}

template <Basis B>
struct DiffMatrix {
  int order = 1;
  int n = 0;
  bool with_boundary_rows = false;
  SparseMatrix<B> matrix;
};

template <Basis B>
int min_truncation() {
  return B == Basis::fourier ? 1 : 2;
}

/// sigma_0 = 2, sigma_k = 1 otherwise.
inline double chebyshev_sigma(int k) { return k == 0 ? 2.0 : 1.0; }

/**
 * D_n (order 1) or D_n^2 (order 2).  With boundary rows (order 2 only), the
 * zero rows of D_n^2 are replaced: Fourier row floor(n/2) by all ones;
 * Chebyshev row n-1 by (-1)^k and row n by all ones.
 */
template <Basis B>
DiffMatrix<B> diff_matrix(int order, int n, bool with_boundary_rows) {
  if (order != 1 && order != 2) throw InvalidArgument("derivative order must be 1 or 2");
  if (n < min_truncation<B>()) {
    throw InvalidArgument(std::string(to_string(B)) + " differentiation needs n >= " +
                          std::to_string(min_truncation<B>()));
  }
  if (with_boundary_rows && order != 2) {
    throw InvalidArgument("boundary rows complete the second-order matrix only");
  }
  using T = Scalar<B>;
  std::vector<Eigen::Triplet<T>> trip;
  const int N = n + 1;
  if constexpr (B == Basis::fourier) {
    const int m = n / 2;
    for (int k = 0; k < N; ++k) {
      const double w = (k - m) * std::numbers::pi;
      if (k == m) {
        if (with_boundary_rows) {
          for (int r = 0; r < N; ++r) trip.emplace_back(k, r, T(1.0));
        }
        continue;
      }
      trip.emplace_back(k, k, order == 1 ? T(0.0, w) : T(-w * w));
    }
  } else {
    for (int k = 0; k < N; ++k) {
      if (with_boundary_rows && k == n - 1) {
        for (int r = 0; r < N; ++r) trip.emplace_back(k, r, (r % 2 == 0) ? 1.0 : -1.0);
        continue;
      }
      if (with_boundary_rows && k == n) {
        for (int r = 0; r < N; ++r) trip.emplace_back(k, r, 1.0);
        continue;
      }
      for (int r = k + 1; r < N; ++r) {
        if (order == 1 && (k + r) % 2 == 1) {
          trip.emplace_back(k, r, 2.0 * r / chebyshev_sigma(k));
        } else if (order == 2 && (k + r) % 2 == 0 && r > k + 1) {
          trip.emplace_back(k, r, static_cast<double>(r) * (r * r - k * k) / chebyshev_sigma(k));
        }
      }
    }
  }
  DiffMatrix<B> D;
  D.order = order;
  D.n = n;
  D.with_boundary_rows = with_boundary_rows;
  D.matrix.resize(N, N);
  D.matrix.setFromTriplets(trip.begin(), trip.end());
  return D;
}

template <Basis B>
SparseMatrix<B> sparse_identity(int N) {
  SparseMatrix<B> I(N, N);
  I.setIdentity();
  return I;
}

/// Kronecker product of per-axis factors, axis 0 leftmost.
template <Basis B>
SparseMatrix<B> kron_chain(const std::vector<SparseMatrix<B>>& factors) {
  SparseMatrix<B> acc = factors.front();
  for (std::size_t a = 1; a < factors.size(); ++a) {
    SparseMatrix<B> next = Eigen::kroneckerProduct(acc, factors[a]);
    acc = std::move(next);
  }
  return acc;
}

/// I (x) ... (x) M (x) ... (x) I with M on `axis`.
template <Basis B>
SparseMatrix<B> on_axis(const SparseMatrix<B>& M, int axis, int d) {
  std::vector<SparseMatrix<B>> f(static_cast<std::size_t>(d), sparse_identity<B>(static_cast<int>(M.rows())));
  f[static_cast<std::size_t>(axis)] = M;
  return kron_chain<B>(f);
}

/**
 * Operator for the multi-index j with |j|_1 = 2: a single 2 gives the
 * boundary-completed second derivative on that axis; two 1s give D (x) D on
 * those axes with no boundary rows.
 */
template <Basis B>
SparseMatrix<B> multi_diff(const std::vector<int>& j, int n) {
  const int d = static_cast<int>(j.size());
  if (d < 1) throw InvalidArgument("multi-index must have at least one entry");
  int sum = 0;
  for (int v : j) {
    if (v < 0) throw InvalidArgument("multi-index entries must be non-negative");
    sum += v;
  }
  if (sum != 2) throw InvalidArgument("multi-index must have |j|_1 = 2");
  const SparseMatrix<B> I = sparse_identity<B>(n + 1);
  std::vector<SparseMatrix<B>> f(static_cast<std::size_t>(d), I);
  for (int a = 0; a < d; ++a) {
    if (j[static_cast<std::size_t>(a)] == 2) {
      f[static_cast<std::size_t>(a)] = diff_matrix<B>(2, n, true).matrix;
    } else if (j[static_cast<std::size_t>(a)] == 1) {
      f[static_cast<std::size_t>(a)] = diff_matrix<B>(1, n, false).matrix;
    }
  }
  return kron_chain<B>(f);
}

struct GddReport {
  double C = 0.0;           ///< 1 - sum_j1 (1/|A_j1j1|) sum_{j2 != j1} |A_j1j2|
  double norm_sigma = 0.0;  ///< sum of |A_ij|
  double norm_star = 0.0;   ///< sum of |A_jj|
  bool accepted = false;    ///< C > 0
};

/**
 * Global diagonal dominance margin of a real coefficient matrix.  Throws on
 * a zero diagonal entry or on diagonal entries of mixed sign.
 */
inline GddReport gdd_check(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() == 0) throw InvalidArgument("coefficient matrix must be square");
  const Eigen::Index d = A.rows();
  GddReport r;
  double off = 0.0;
  int sign = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double a = A(i, i);
    if (a == 0.0) throw InvalidArgument("zero diagonal coefficient A(" + std::to_string(i) + "," +
                                        std::to_string(i) + ")");
    const int s = a > 0 ? 1 : -1;
    if (sign != 0 && s != sign) throw InvalidArgument("diagonal coefficients have mixed signs");
    sign = s;
    double row = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j != i) row += std::abs(A(i, j));
    }
    off += row / std::abs(a);
    r.norm_star += std::abs(a);
  }
  r.norm_sigma = A.cwiseAbs().sum();
  r.C = 1.0 - off;
  r.accepted = r.C > 0.0;
  return r;
}

/// Constant-coefficient operator sum_{j1,j2} A_{j1j2} d^2/dx_j1 dx_j2.
class EllipticOperator {
 public:
  explicit EllipticOperator(Eigen::MatrixXd A) : A_(std::move(A)), gdd_(gdd_check(A_)) {}

  static EllipticOperator poisson(int d) { return EllipticOperator(Eigen::MatrixXd::Identity(d, d)); }

  int d() const noexcept { return static_cast<int>(A_.rows()); }
  const Eigen::MatrixXd& A() const noexcept { return A_; }
  const GddReport& gdd() const noexcept { return gdd_; }
  double operator()(int i, int j) const { return A_(i, j); }

 private:
  Eigen::MatrixXd A_;
  GddReport gdd_;
};

/// Diagonal part L_1 = sum_j A_jj D2bar^{(j)}.
template <Basis B>
SparseMatrix<B> assemble_diagonal_part(const EllipticOperator& op, int n) {
  const int d = op.d();
  const SparseMatrix<B> D2 = diff_matrix<B>(2, n, true).matrix;
  SparseMatrix<B> L(static_cast<Eigen::Index>(checked_pow(n + 1, d)),
                    static_cast<Eigen::Index>(checked_pow(n + 1, d)));
  for (int a = 0; a < d; ++a) L += Scalar<B>(op(a, a)) * on_axis<B>(D2, a, d);
  return L;
}

/// Mixed part L_2 = sum_{j1<j2} (A_j1j2 + A_j2j1) D^{(j1)} D^{(j2)}.
template <Basis B>
SparseMatrix<B> assemble_mixed_part(const EllipticOperator& op, int n) {
  const int d = op.d();
  const auto N = static_cast<Eigen::Index>(checked_pow(n + 1, d));
  SparseMatrix<B> L(N, N);
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      const double c = op(a, b) + op(b, a);
      if (c == 0.0) continue;
      std::vector<int> j(static_cast<std::size_t>(d), 0);
      j[static_cast<std::size_t>(a)] = 1;
      j[static_cast<std::size_t>(b)] = 1;
      L += Scalar<B>(c) * multi_diff<B>(j, n);
    }
  }
  return L;
}

/// Largest number of stored nonzeros in any row.
template <class SpMat>
Eigen::Index max_row_nonzeros(const SpMat& M) {
  Eigen::Matrix<Eigen::Index, Eigen::Dynamic, 1> count = Eigen::Matrix<Eigen::Index, Eigen::Dynamic, 1>::Zero(M.rows());
  for (int c = 0; c < M.outerSize(); ++c) {
    for (typename SpMat::InnerIterator it(M, c); it; ++it) {
      if (it.value() != typename SpMat::Scalar(0)) ++count(it.row());
    }
  }
  return count.size() ? count.maxCoeff() : 0;
}

}  // namespace pdelin
