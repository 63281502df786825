/**
 * @file transforms.hpp
 * @brief Shifted Fourier and cosine transforms on N = n+1 points, their
 *        diagonal/permutation factors, and tensor-product application.
 *
 * Conventions (indices k, l = 0..n, N = n+1, m = floor(n/2)):
 *
 *     qft     (F v)_l   = N^{-1/2} sum_k exp(2 pi i k l / N) v_k
 *     qsft    (F^s v)_l = N^{-1/2} sum_k exp(2 pi i (k - m)(l - N/2) / N) v_k
 *     qct     (C v)_l   = sqrt(2/n) sum_k delta_k delta_l cos(k l pi / n) v_k
 *     phase_R = diag((-1)^k)
 *     phase_S = diag(exp(-2 pi i m (l - N/2) / N))
 *     phase_T = diag(exp(-2 pi i k / N))
 *     perm_P  e_k -> e_{k+1 mod N}
 *
 * with delta_0 = delta_n = 1/sqrt(2) and delta_k = 1 otherwise.  Then
 * F^s = S F R and P = F T F^{-1}.
 */
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pdelin/error.hpp"
#include "pdelin/fft.hpp"
#include "pdelin/tensor.hpp"

namespace pdelin {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

enum class TransformKind { qsft, qct, qft, phase_R, phase_S, phase_T, perm_P };

inline const char* to_string(TransformKind t) {
  switch (t) {
    case TransformKind::qsft: return "qsft";
    case TransformKind::qct: return "qct";
    case TransformKind::qft: return "qft";
    case TransformKind::phase_R: return "phase_R";
    case TransformKind::phase_S: return "phase_S";
    case TransformKind::phase_T: return "phase_T";
    case TransformKind::perm_P: return "perm_P";
  }
  return "?";
}

/// delta_k weight of the cosine transform on n+1 points.
inline double qct_delta(int k, int n) { return (k == 0 || k == n) ? std::numbers::sqrt2 / 2 : 1.0; }

namespace detail {

inline void scale(std::span<cplx> v, double s) {
  for (auto& x : v) x *= s;
}

inline void unitary_dft(std::span<cplx> v, bool inverse) {
  fft::dft(v, inverse ? fft::Sign::negative : fft::Sign::positive);
  scale(v, 1.0 / std::sqrt(static_cast<double>(v.size())));
}

inline cplx phase_S_entry(int l, int N, bool inverse) {
  const int m = (N - 1) / 2;
  const double arg = -2.0 * std::numbers::pi * m * (l - N / 2.0) / N;
  return std::polar(1.0, inverse ? -arg : arg);
}

inline void qct_fast(std::span<cplx> v) {
  const int n = static_cast<int>(v.size()) - 1;
  if (n < 1) throw InvalidArgument("qct needs at least 2 points (n >= 1)");
  const double c = std::numbers::sqrt2 / 2;
  CVector x(static_cast<std::size_t>(2 * n));
  x[0] = c * v[0];
  x[static_cast<std::size_t>(n)] = c * v[static_cast<std::size_t>(n)];
  for (int k = 1; k < n; ++k) {
    x[static_cast<std::size_t>(k)] = 0.5 * v[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(2 * n - k)] = 0.5 * v[static_cast<std::size_t>(k)];
  }
  fft::dft(x, fft::Sign::negative);
  const double pre = std::sqrt(2.0 / n);
  for (int l = 0; l <= n; ++l) {
    // the even extension makes the DFT real up to roundoff for real input
    v[static_cast<std::size_t>(l)] = pre * qct_delta(l, n) * x[static_cast<std::size_t>(l)];
  }
}

}  // namespace detail

/// In-place application of a transform (or its inverse) to a length-(n+1) vector.
inline void apply_transform(TransformKind kind, std::span<cplx> v, bool inverse = false) {
  const int N = static_cast<int>(v.size());
  if (N < 1) throw InvalidArgument("transform of an empty vector");
  switch (kind) {
    case TransformKind::qft:
      detail::unitary_dft(v, inverse);
      return;
    case TransformKind::phase_R:
      for (int k = 1; k < N; k += 2) v[static_cast<std::size_t>(k)] = -v[static_cast<std::size_t>(k)];
      return;
    case TransformKind::phase_S:
      for (int l = 0; l < N; ++l) v[static_cast<std::size_t>(l)] *= detail::phase_S_entry(l, N, inverse);
      return;
    case TransformKind::phase_T:
      for (int k = 0; k < N; ++k) {
        const double arg = -2.0 * std::numbers::pi * k / N;
        v[static_cast<std::size_t>(k)] *= std::polar(1.0, inverse ? -arg : arg);
      }
      return;
    case TransformKind::perm_P:
      if (inverse) {
        std::rotate(v.begin(), v.begin() + 1, v.end());
      } else {
        std::rotate(v.begin(), v.end() - 1, v.end());
      }
      return;
    case TransformKind::qsft:
      if (!inverse) {
        apply_transform(TransformKind::phase_R, v);
        detail::unitary_dft(v, false);
        apply_transform(TransformKind::phase_S, v);
      } else {
        apply_transform(TransformKind::phase_S, v, true);
        detail::unitary_dft(v, true);
        apply_transform(TransformKind::phase_R, v);
      }
      return;
    case TransformKind::qct:
      detail::qct_fast(v);  // symmetric and orthogonal, so self-inverse
      return;
  }
}

inline CVector transform(TransformKind kind, std::span<const cplx> v, bool inverse = false) {
  CVector out(v.begin(), v.end());
  apply_transform(kind, out, inverse);
  return out;
}

inline CVector qsft(std::span<const cplx> v, bool inverse = false) {
  return transform(TransformKind::qsft, v, inverse);
}
inline CVector qct(std::span<const cplx> v, bool inverse = false) {
  return transform(TransformKind::qct, v, inverse);
}
inline CVector qft(std::span<const cplx> v, bool inverse = false) {
  return transform(TransformKind::qft, v, inverse);
}

/// Dense matrix of a transform on N points, built column by column.
inline Eigen::MatrixXcd transform_matrix(TransformKind kind, int N, bool inverse = false,
                                    int budget = 4096) {
  if (N < 1) throw InvalidArgument("transform size must be >= 1");
  if (N > budget) throw TooLarge("transform of size " + std::to_string(N) + " exceeds budget");
  Eigen::MatrixXcd M(N, N);
  CVector e(static_cast<std::size_t>(N));
  for (int c = 0; c < N; ++c) {
    std::fill(e.begin(), e.end(), cplx{});
    e[static_cast<std::size_t>(c)] = 1.0;
    apply_transform(kind, e, inverse);
    for (int r = 0; r < N; ++r) M(r, c) = e[static_cast<std::size_t>(r)];
  }
  return M;
}

/// Side length s with s^d == len; throws if no such integer exists.
inline int tensor_side(std::size_t len, int d) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  const auto guess = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(len), 1.0 / d)));
  for (std::size_t s = guess > 1 ? guess - 1 : 1; s <= guess + 1; ++s) {
    std::size_t p = 1;
    for (int a = 0; a < d; ++a) p *= s;
    if (p == len) return static_cast<int>(s);
  }
  throw InvalidArgument("vector length " + std::to_string(len) + " is not a perfect " +
                        std::to_string(d) + "-th power");
}

/**
 * Applies the 1D transform along each listed axis of a row-major
 * (n+1)^d array (axis 0 slowest).
 */
inline void tensor_apply_inplace(TransformKind kind, int d, std::span<cplx> v,
                                 std::span<const int> axes, bool inverse = false) {
  const int side = tensor_side(v.size(), d);
  for (int a : axes) {
    if (a < 0 || a >= d) throw InvalidArgument("axis " + std::to_string(a) + " out of range");
    for_each_line(v, side, d, a, [&](std::span<cplx> line) { apply_transform(kind, line, inverse); });
  }
}

inline CVector tensor_apply(TransformKind kind, int d, std::span<const cplx> v,
                            std::span<const int> axes, bool inverse = false) {
  CVector out(v.begin(), v.end());
  tensor_apply_inplace(kind, d, out, axes, inverse);
  return out;
}

/// All axes 0..d-1.
inline std::vector<int> all_axes(int d) {
  std::vector<int> a(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) a[static_cast<std::size_t>(i)] = i;
  return a;
}

}  // namespace pdelin
