/**
 * @file tensor.hpp
 * @brief Helpers for d-dimensional arrays stored row-major (axis 0 slowest).
 *
 * The flat index of (i_0, ..., i_{d-1}) on an n^d grid is
 * sum_a i_a n^{d-1-a}, matching the Kronecker ordering A_0 (x) ... (x) A_{d-1}.
 */
#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pdelin/error.hpp"

namespace pdelin {

/// side^d, throwing TooLarge when the result exceeds `cap`.
inline std::size_t checked_pow(std::size_t side, int d,
                               std::size_t cap = std::numeric_limits<std::size_t>::max()) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) {
    if (side != 0 && total > cap / side) {
      throw TooLarge(std::to_string(side) + "^" + std::to_string(d) + " exceeds budget " +
                     std::to_string(cap));
    }
    total *= side;
  }
  return total;
}

/// Multi-index of flat position `flat` on a side^d grid.
inline std::vector<int> unravel(std::size_t flat, int side, int d) {
  std::vector<int> idx(static_cast<std::size_t>(d));
  for (int a = d - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % side);
    flat /= side;
  }
  return idx;
}

/**
 * Calls `f(line)` for every 1D line along `axis`; `line` is a gathered copy of
 * length `side` that is scattered back after the call.
 */
template <class T, class F>
void for_each_line(std::span<T> data, int side, int d, int axis, F&& f) {
  std::size_t inner = 1;
  for (int a = axis + 1; a < d; ++a) inner *= static_cast<std::size_t>(side);
  const std::size_t block = inner * static_cast<std::size_t>(side);
  const std::size_t outer = data.size() / block;
  std::vector<T> line(static_cast<std::size_t>(side));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      T* base = data.data() + o * block + i;
      for (int s = 0; s < side; ++s) line[static_cast<std::size_t>(s)] = base[s * inner];
      f(std::span<T>(line));
      for (int s = 0; s < side; ++s) base[s * inner] = line[static_cast<std::size_t>(s)];
    }
  }
}

}  // namespace pdelin
