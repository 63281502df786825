// Independent reference computations used by the tests.  Each oracle builds
// its answer from a definition different from the library's algorithm
// (moment equations instead of closed forms, explicit shift matrices instead
// of stencil loops, dense formulas instead of FFTs, point evaluation instead
// of recurrences).
#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

/// Symmetric second-derivative weights w_0..w_k from the moment equations
/// sum_{j=-k}^{k} w_|j| j^{2m} = 2 delta_{m,1}, m = 0..k, solved exactly.
inline std::vector<Rational> stencil_by_moments(int k) {
  const int N = k + 1;
  std::vector<std::vector<Rational>> M(N, std::vector<Rational>(N + 1));
  for (int m = 0; m < N; ++m) {
    for (int j = 0; j <= k; ++j) {
      Rational p = 1;
      for (int e = 0; e < 2 * m; ++e) p *= j;
      if (m == 0 && j == 0) p = 1;
      M[m][j] = j == 0 ? p : 2 * p;
    }
    M[m][N] = m == 1 ? 2 : 0;
  }
  for (int c = 0; c < N; ++c) {
    int piv = c;
    while (M[piv][c] == 0) ++piv;
    std::swap(M[piv], M[c]);
    for (int r = 0; r < N; ++r) {
      if (r == c || M[r][c] == 0) continue;
      const Rational f = M[r][c] / M[c][c];
      for (int q = c; q <= N; ++q) M[r][q] -= f * M[c][q];
    }
  }
  std::vector<Rational> w(N);
  for (int j = 0; j < N; ++j) w[j] = M[j][N] / M[j][j];
  return w;
}

/// r_0 I + sum_j r_j (S^j + S^{-j}) from explicit cyclic shift matrices on 2n sites.
inline Eigen::MatrixXd circulant_by_shifts(const std::vector<double>& r, int n) {
  const int N = 2 * n;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) S((i + 1) % N, i) = 1.0;
  Eigen::MatrixXd L = r[0] * Eigen::MatrixXd::Identity(N, N);
  Eigen::MatrixXd Sj = Eigen::MatrixXd::Identity(N, N);
  for (std::size_t j = 1; j < r.size(); ++j) {
    Sj = Sj * S;
    L += r[j] * (Sj + Sj.transpose());
  }
  return L;
}

/// Kronecker sum L (+) L (+) ... (d copies) built densely.
inline Eigen::MatrixXd dense_kron_sum(const Eigen::MatrixXd& L, int d) {
  const Eigen::Index N = L.rows();
  Eigen::MatrixXd acc = L;
  for (int a = 1; a < d; ++a) {
    const Eigen::Index M = acc.rows();
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(M * N, M * N);
    for (Eigen::Index i = 0; i < M; ++i) {
      for (Eigen::Index j = 0; j < M; ++j) {
        next.block(i * N, j * N, N, N) += acc(i, j) * Eigen::MatrixXd::Identity(N, N);
      }
      next.block(i * N, i * N, N, N) += L;
    }
    acc = next;
  }
  return acc;
}

/// F_{lk} = N^{-1/2} exp(2 pi i k l / N).
inline Eigen::MatrixXcd dft_matrix(int N) {
  Eigen::MatrixXcd F(N, N);
  for (int l = 0; l < N; ++l) {
    for (int k = 0; k < N; ++k) F(l, k) = std::polar(1.0 / std::sqrt(double(N)), 2 * pi * k * l / N);
  }
  return F;
}

/// Shifted transform entries exp(2 pi i (k - floor(n/2))(l - (n+1)/2)/(n+1)) / sqrt(n+1).
inline Eigen::MatrixXcd qsft_matrix(int n) {
  const int N = n + 1;
  Eigen::MatrixXcd F(N, N);
  for (int l = 0; l < N; ++l) {
    for (int k = 0; k < N; ++k) {
      F(l, k) = std::polar(1.0 / std::sqrt(double(N)), 2 * pi * (k - n / 2) * (l - N / 2.0) / N);
    }
  }
  return F;
}

/// sqrt(2/n) delta_l delta_k cos(k l pi / n).
inline Eigen::MatrixXd qct_matrix(int n) {
  auto delta = [n](int k) { return (k == 0 || k == n) ? 1.0 / std::sqrt(2.0) : 1.0; };
  Eigen::MatrixXd C(n + 1, n + 1);
  for (int l = 0; l <= n; ++l) {
    for (int k = 0; k <= n; ++k) C(l, k) = std::sqrt(2.0 / n) * delta(l) * delta(k) * std::cos(k * l * pi / n);
  }
  return C;
}

/// The cyclic permutation with a 1 in the top-right corner and on the subdiagonal.
inline Eigen::MatrixXd cyclic_permutation(int N) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N, N);
  P(0, N - 1) = 1.0;
  for (int i = 1; i < N; ++i) P(i, i - 1) = 1.0;
  return P;
}

/// Chebyshev-Gauss-Lobatto nodes cos(pi l / n).
inline std::vector<double> cgl_nodes(int n) {
  std::vector<double> x(n + 1);
  for (int l = 0; l <= n; ++l) x[l] = std::cos(pi * l / n);
  return x;
}

/// T_k(x) by the trigonometric definition.
inline double cheb_T(int k, double x) {
  return std::cos(k * std::acos(std::clamp(x, -1.0, 1.0)));
}

/// T_k^{(order)}(x) for order 1, 2 at interior points by the theta-derivative
/// chain rule, and at x = +-1 by the endpoint formulas.
inline double cheb_T_deriv(int k, double x, int order) {
  if (std::abs(std::abs(x) - 1.0) < 1e-14) {
    const double s = x > 0 ? 1.0 : -1.0;
    const double sign1 = std::pow(s, k + 1), sign2 = std::pow(s, k);
    if (order == 1) return sign1 * k * k;
    return sign2 * k * k * (k * k - 1.0) / 3.0;
  }
  const double t = std::acos(x), st = std::sin(t), ct = std::cos(t);
  const double d1 = k * std::sin(k * t) / st;  // dT/dx
  if (order == 1) return d1;
  // d2T/dx2 = (-k^2 cos(kt) + ct * dT/dx) / st^2 ... via x-derivative of d1
  return (-k * k * std::cos(k * t) + ct * d1) / (st * st);
}

/// Coefficient-space derivative matrix (order 1 or 2) via interpolation:
/// D = V^{-1} W with V_{lk} = T_k(x_l), W_{lr} = T_r^{(order)}(x_l).
inline Eigen::MatrixXd chebyshev_diff_by_interpolation(int n, int order) {
  const auto x = cgl_nodes(n);
  Eigen::MatrixXd V(n + 1, n + 1), W(n + 1, n + 1);
  for (int l = 0; l <= n; ++l) {
    for (int k = 0; k <= n; ++k) {
      V(l, k) = cheb_T(k, x[l]);
      W(l, k) = cheb_T_deriv(k, x[l], order);
    }
  }
  return V.fullPivLu().solve(W);
}

/// sum_k c_k T_k(x) by direct summation.
inline double chebyshev_series(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * cheb_T(static_cast<int>(k), x);
  return s;
}

/// sum_k c_k exp(i pi (k - floor(n/2)) x).
inline cplx fourier_series(const std::vector<cplx>& c, double x) {
  const int m = static_cast<int>(c.size() - 1) / 2;
  cplx s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * std::polar(1.0, pi * (int(k) - m) * x);
  return s;
}

/**
 * Direct summation of q with explicit multi-index loops: for every k in
 * [0,n]^d and axis j, the boundary contribution of axis j is gp[j][k_rest]
 * when k_j == plus_slice and gm[j][k_rest] when k_j == minus_slice.
 */
inline double q_direct(const std::vector<double>& f, const std::vector<std::vector<double>>& gp,
                       const std::vector<std::vector<double>>& gm, const std::vector<double>& Adiag, int n,
                       int plus_slice, int minus_slice) {
  const int d = static_cast<int>(Adiag.size());
  const int N = n + 1;
  long double num = 0, den = 0;
  std::vector<int> k(d, 0);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    std::size_t rest = flat;
    for (int a = d - 1; a >= 0; --a) {
      k[a] = static_cast<int>(rest % N);
      rest /= N;
    }
    for (int j = 0; j < d; ++j) {
      std::size_t sub = 0;
      for (int a = 0; a < d; ++a) {
        if (a != j) sub = sub * N + k[a];
      }
      const long double p = k[j] == plus_slice ? Adiag[j] * gp[j][sub] : 0.0L;
      const long double m = (k[j] == minus_slice && minus_slice != plus_slice) ? Adiag[j] * gm[j][sub] : 0.0L;
      const long double fv = f[flat];
      num += fv * fv + p * p + m * m;
      den += (fv + p + m) * (fv + p + m);
    }
  }
  return static_cast<double>(std::sqrt(num / den));
}

/// Orthonormal basis of the (anti)symmetric sector of a 2n-site periodic lattice
/// under reflection i <-> 2n-1-i.
inline Eigen::MatrixXd sector_basis(int n, bool antisymmetric) {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * n, n);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    Q(i, i) = s;
    Q(2 * n - 1 - i, i) = antisymmetric ? -s : s;
  }
  return Q;
}

}  // namespace oracle
