/**
 * @file fft.hpp
 * @brief Thin FFTW wrapper: unnormalized complex DFTs of arbitrary length.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "pdelin/error.hpp"

namespace pdelin::fft {

enum class Sign { negative, positive };

namespace detail {
// FFTW planning is not thread-safe; execution on distinct arrays is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/**
 * In-place strided batch of 1D DFTs:
 *   y_l = sum_k exp(sign * 2 pi i k l / len) x_k
 * applied to `howmany` lines of length `len`, element stride `stride`, line
 * distance `dist`.
 */
inline void dft_lines(std::complex<double>* data, int len, int howmany, int stride, int dist,
                      Sign sign) {
  if (len <= 0 || howmany <= 0) return;
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan;
  {
    std::lock_guard lock(detail::planner_mutex());
    plan = fftw_plan_many_dft(1, &len, howmany, p, nullptr, stride, dist, p, nullptr, stride, dist,
                              sign == Sign::negative ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("FFTW failed to build a plan");
  fftw_execute(plan);
  {
    std::lock_guard lock(detail::planner_mutex());
    fftw_destroy_plan(plan);
  }
}

inline void dft(std::span<std::complex<double>> v, Sign sign) {
  dft_lines(v.data(), static_cast<int>(v.size()), 1, 1, static_cast<int>(v.size()), sign);
}

/**
 * Applies a 1D DFT along `axis` of a row-major array with `dims` extents
 * (axis 0 slowest).
 */
inline void dft_axis(std::span<std::complex<double>> data, std::span<const int> dims, int axis,
                     Sign sign) {
  std::size_t inner = 1;
  for (std::size_t a = static_cast<std::size_t>(axis) + 1; a < dims.size(); ++a) inner *= dims[a];
  std::size_t outer = 1;
  for (int a = 0; a < axis; ++a) outer *= dims[a];
  const int len = dims[axis];
  const std::size_t block = inner * len;
  for (std::size_t o = 0; o < outer; ++o) {
    // lines start at consecutive inner offsets, stride `inner` between samples
    dft_lines(data.data() + o * block, len, static_cast<int>(inner), static_cast<int>(inner), 1,
              sign);
  }
}

}  // namespace pdelin::fft
