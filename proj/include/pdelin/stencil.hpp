/**
 * @file stencil.hpp
 * @brief Order-2k central difference weights for the second derivative.
 *
 * The weights r_{-k..k} satisfy
 *
 *     f''(x) ~ (1/h^2) sum_j r_j f(x + j h)
 *
 * with r_j = 2 (-1)^{j+1} (k!)^2 / (j^2 (k-j)! (k+j)!) for 1 <= j <= k,
 * r_0 = -2 sum_{j>=1} r_j and r_{-j} = r_j.  Two representations are
 * provided: doubles for assembling operators, and exact rationals for
 * checking the algebraic identities the condition-number analysis rests on.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pdelin/error.hpp"

namespace pdelin {

using Rational = boost::multiprecision::cpp_rational;

class Stencil {
 public:
  /// Builds a stencil from the full symmetric weight vector r_{-k..k}.
  static Stencil from_coefficients(std::vector<double> coeffs) {
    if (coeffs.size() < 3 || coeffs.size() % 2 == 0) {
      throw InvalidArgument("stencil needs an odd number (>= 3) of weights");
    }
    Stencil s;
    s.k_ = static_cast<int>(coeffs.size() / 2);
    s.coeffs_ = std::move(coeffs);
    return s;
  }

  int k() const noexcept { return k_; }

  /// Weight r_j for j in [-k, k]; zero outside the support.
  double r(int j) const noexcept {
    if (j < -k_ || j > k_) return 0.0;
    return coeffs_[static_cast<std::size_t>(j + k_)];
  }

  /// Full vector indexed by j + k.
  std::span<const double> coeffs() const noexcept { return coeffs_; }

 private:
  Stencil() = default;
  int k_ = 0;
  std::vector<double> coeffs_;
};

/// Floating-point weights via the ratio r_{j+1}/r_j = -j^2 (k-j) / ((j+1)^2 (k+j+1)).
inline Stencil make_stencil(int k) {
  if (k < 1) throw InvalidArgument("stencil half-width k must be >= 1");
  std::vector<double> half(static_cast<std::size_t>(k) + 1, 0.0);
  // r_1 = 2 (k!)^2 / ((k-1)! (k+1)!) = 2k / (k+1)
  half[1] = 2.0 * k / (k + 1.0);
  for (int j = 1; j < k; ++j) {
    const double jj = j;
    half[j + 1] = -half[j] * (jj * jj * (k - jj)) / ((jj + 1) * (jj + 1) * (k + jj + 1));
  }
  double sum = 0.0;
  for (int j = k; j >= 1; --j) {  // smallest magnitudes first
    if (!std::isnormal(half[j])) {
      throw PrecisionExhausted("stencil weight r_" + std::to_string(j) + " underflows for k = " +
                               std::to_string(k));
    }
    sum += half[j];
  }
  half[0] = -2.0 * sum;

  std::vector<double> full(2 * static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    full[static_cast<std::size_t>(k + j)] = half[j];
    full[static_cast<std::size_t>(k - j)] = half[j];
  }
  return Stencil::from_coefficients(std::move(full));
}

/// Exact weights r_0..r_k (non-negative indices only; r_{-j} = r_j).
inline std::vector<Rational> make_exact_stencil(int k) {
  if (k < 1) throw InvalidArgument("stencil half-width k must be >= 1");
  std::vector<Rational> half(static_cast<std::size_t>(k) + 1);
  half[1] = Rational(2 * k, k + 1);
  for (int j = 1; j < k; ++j) {
    half[j + 1] = -half[j] * Rational(j * j * (k - j)) / Rational((j + 1) * (j + 1) * (k + j + 1));
  }
  Rational sum = 0;
  for (int j = 1; j <= k; ++j) sum += half[j];
  half[0] = -2 * sum;
  return half;
}

/// Exact r_j from the factorial closed form, valid for any j in [-k, k] (j != 0).
inline Rational exact_weight_closed_form(int k, int j) {
  if (j == 0 || j < -k || j > k) throw InvalidArgument("closed form needs 0 < |j| <= k");
  using boost::multiprecision::cpp_int;
  auto fact = [](int m) {
    cpp_int f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
  };
  const cpp_int kf = fact(k);
  Rational r(2 * kf * kf, cpp_int(j) * j * fact(k - j) * fact(k + j));
  return (std::abs(j) % 2 == 1) ? r : Rational(-r);
}

struct StencilIdentities {
  int k = 0;
  bool symmetric = false;      ///< closed form gives r_{-j} = r_j, and matches the recurrence
  bool zero_sum = false;       ///< r_0 + 2 sum r_j = 0 with r_0 = -2 sum 1/j^2
  bool bounded = false;        ///< |r_j| <= 2 / j^2
  bool second_moment = false;  ///< sum_{j>=1} r_j j^2 = 1
  bool all() const noexcept { return symmetric && zero_sum && bounded && second_moment; }
};

/// Checks the stencil identities in exact rational arithmetic.
inline StencilIdentities check_exact_identities(int k) {
  const std::vector<Rational> r = make_exact_stencil(k);
  StencilIdentities s;
  s.k = k;
  s.symmetric = true;
  s.bounded = true;
  Rational sum = 0, inv_sq = 0, moment = 0;
  for (int j = 1; j <= k; ++j) {
    const Rational plus = exact_weight_closed_form(k, j);
    const Rational minus = exact_weight_closed_form(k, -j);
    s.symmetric = s.symmetric && plus == minus && plus == r[static_cast<std::size_t>(j)];
    const Rational a = r[static_cast<std::size_t>(j)] < 0 ? Rational(-r[static_cast<std::size_t>(j)]) : r[static_cast<std::size_t>(j)];
    s.bounded = s.bounded && a <= Rational(2, j * j);
    sum += r[static_cast<std::size_t>(j)];
    inv_sq += Rational(1, j * j);
    moment += r[static_cast<std::size_t>(j)] * j * j;
  }
  s.zero_sum = r[0] == -2 * inv_sq && r[0] + 2 * sum == 0;
  s.second_moment = moment == 1;
  return s;
}

/**
 * True iff |sum_{j=1}^k r_j j^2 - 1| <= tol.  The moment is +1: the 2k+1
 * weights reproduce (x^2)'' = 2, i.e. sum_{j=-k}^{k} r_j j^2 = 2, and this
 * is what makes lambda_1 = -pi^2/n^2 + O(k^3/n^4).
 */
inline bool verify_second_moment(const Stencil& s, double tol) {
  double m = 0.0;
  for (int j = 1; j <= s.k(); ++j) m += s.r(j) * j * j;
  return std::abs(m - 1.0) <= tol;
}

/**
 * Envelope of the local truncation error, deriv_bound * (e h / 2)^{2k-1}.
 * The hidden constant of the O(.) remainder is fixed at 1, so this is a
 * scale, not a rigorous bound.
 */
inline double truncation_error_bound(const Stencil& s, double h, double deriv_bound) {
  if (!(h > 0.0)) throw InvalidArgument("lattice spacing must be positive");
  if (deriv_bound < 0.0) throw InvalidArgument("derivative bound must be non-negative");
  if (deriv_bound == 0.0) return 0.0;
  return deriv_bound * std::pow(std::numbers::e * h / 2.0, 2 * s.k() - 1);
}

}  // namespace pdelin
