/**
 * @file images.hpp
 * @brief Dirichlet and Neumann Laplacians obtained by restricting the periodic
 *        circulant to a symmetry sector (method of images).
 *
 * Index map.  For neumann/dirichlet the parent is the cycle on 2n sites,
 * stored 0-indexed as p = 0..2n-1 (site p+1 in 1-indexed labels).  The
 * mirror of p is 2n-1-p, and reduced coordinate i = 0..n-1 owns the pair
 * (i, 2n-1-i).  With I = i+1, J = j+1 the restricted entries are
 *
 *     L''_{IJ} = r_{|I-J|} + s (r_{I+J-1} + r_{2n-I-J+1}),
 *
 * s = +1 (neumann) or -1 (dirichlet).  At most one correction is nonzero per
 * entry when 2k < n.
 *
 * For dirichlet_alt the parent is the cycle on 2n+2 sites p = 0..2n+1, the
 * sites 0 and n+1 are pinned to zero, reduced coordinate i = 0..n-1 owns
 * (i+1, 2n+1-i), and
 *
 *     L''_{IJ} = r_{|I-J|} - r_{I+J} - r_{2n+2-I-J}.
 *
 * Reduced dirichlet_alt vectors carry n+1 slots, the last one being the
 * unsupported direction (always zero).
 */
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pdelin/error.hpp"
#include "pdelin/laplacian.hpp"
#include "pdelin/stencil.hpp"

namespace pdelin {

enum class ImageBc { neumann, dirichlet, dirichlet_alt };

inline const char* to_string(ImageBc bc) {
  switch (bc) {
    case ImageBc::neumann: return "neumann";
    case ImageBc::dirichlet: return "dirichlet";
    case ImageBc::dirichlet_alt: return "dirichlet_alt";
  }
  return "?";
}

inline constexpr double kSymmetryTol = 1e-10;

/// Number of sites of the periodic parent lattice.
inline int parent_sites(int n, ImageBc bc) { return bc == ImageBc::dirichlet_alt ? 2 * n + 2 : 2 * n; }

/// Length of a reduced vector (n, or n+1 for dirichlet_alt).
inline int reduced_length(int n, ImageBc bc) { return bc == ImageBc::dirichlet_alt ? n + 1 : n; }

/// Lattice spacing when the physical interval is [0, pi].
inline double image_spacing(int n, ImageBc bc) {
  return std::numbers::pi / (bc == ImageBc::dirichlet_alt ? n + 1 : n);
}

/**
 * Physical coordinates of the n unknowns on [0, pi].  neumann/dirichlet are
 * cell centred, (j + 1/2) h; dirichlet_alt is vertex centred, (j + 1) h.
 */
inline std::vector<double> physical_nodes(int n, ImageBc bc) {
  const double h = image_spacing(n, bc);
  const double off = bc == ImageBc::dirichlet_alt ? 1.0 : 0.5;
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = (j + off) * h;
  return x;
}

struct RestrictedLaplacian {
  int n = 0;
  ImageBc bc = ImageBc::neumann;
  int sign = 1;
  Eigen::MatrixXd matrix;  ///< n x n, unscaled (multiply by 1/h^2)

  /// (n+1) x (n+1) block diag(L'', 1) for dirichlet_alt; `matrix` otherwise.
  Eigen::MatrixXd padded() const {
    if (bc != ImageBc::dirichlet_alt) return matrix;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n + 1, n + 1);
    P.topLeftCorner(n, n) = matrix;
    P(n, n) = 1.0;
    return P;
  }
};

inline RestrictedLaplacian restrict_laplacian(const Stencil& s, int n, ImageBc bc) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (2 * s.k() >= n) {
    throw InvalidArgument("edge corrections collide: need k < n/2, got k = " +
                          std::to_string(s.k()) + ", n = " + std::to_string(n));
  }
  RestrictedLaplacian R;
  R.n = n;
  R.bc = bc;
  R.sign = bc == ImageBc::neumann ? 1 : -1;
  R.matrix.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int I = i + 1, J = j + 1;
      double v = s.r(std::abs(I - J));
      if (bc == ImageBc::dirichlet_alt) {
        v -= s.r(I + J) + s.r(2 * n + 2 - I - J);
      } else {
        v += R.sign * (s.r(I + J - 1) + s.r(2 * n - I - J + 1));
      }
      R.matrix(i, j) = v;
    }
  }
  return R;
}

/// Parent-lattice indices (p, mirror of p) owned by reduced coordinate i.
inline std::pair<int, int> image_pair(int i, int n, ImageBc bc) {
  if (bc == ImageBc::dirichlet_alt) return {i + 1, 2 * n + 1 - i};
  return {i, 2 * n - 1 - i};
}

/**
 * Isometry P (parent x n) whose columns are (e_p + s e_mirror)/sqrt(2); the
 * restricted Laplacian equals P^T L P.
 */
inline Eigen::MatrixXd projector(int n, ImageBc bc) {
  const double s = bc == ImageBc::neumann ? 1.0 : -1.0;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(parent_sites(n, bc), n);
  for (int i = 0; i < n; ++i) {
    const auto [p, m] = image_pair(i, n, bc);
    P(p, i) = std::numbers::sqrt2 / 2;
    P(m, i) = s * std::numbers::sqrt2 / 2;
  }
  return P;
}

/**
 * Coordinates of a parent-lattice vector in the selected sector.  Throws
 * SymmetryViolation when the component outside the sector exceeds
 * tol * ||v||.
 */
inline std::vector<double> fold_vector(std::span<const double> v, int n, ImageBc bc,
                                       double tol = kSymmetryTol) {
  if (static_cast<int>(v.size()) != parent_sites(n, bc)) {
    throw InvalidArgument("fold_vector: expected " + std::to_string(parent_sites(n, bc)) +
                          " entries, got " + std::to_string(v.size()));
  }
  const double s = bc == ImageBc::neumann ? 1.0 : -1.0;
  const double c = std::numbers::sqrt2 / 2;
  std::vector<double> u(static_cast<std::size_t>(reduced_length(n, bc)), 0.0);
  double total2 = 0.0, off2 = 0.0;
  for (double x : v) total2 += x * x;
  for (int i = 0; i < n; ++i) {
    const auto [p, m] = image_pair(i, n, bc);
    u[static_cast<std::size_t>(i)] = c * (v[p] + s * v[m]);
    const double w = c * (v[p] - s * v[m]);
    off2 += w * w;
  }
  if (bc == ImageBc::dirichlet_alt) {
    off2 += v[0] * v[0] + v[static_cast<std::size_t>(n + 1)] * v[static_cast<std::size_t>(n + 1)];
  }
  if (std::sqrt(off2) > tol * std::sqrt(total2)) {
    throw SymmetryViolation(std::string("vector has a component of relative size ") +
                            std::to_string(std::sqrt(off2 / total2)) + " outside the " +
                            to_string(bc) + " sector");
  }
  return u;
}

/// Inverse of fold_vector: P u on the parent lattice.
inline std::vector<double> unfold_vector(std::span<const double> u, int n, ImageBc bc,
                                         double tol = kSymmetryTol) {
  if (static_cast<int>(u.size()) != reduced_length(n, bc)) {
    throw InvalidArgument("unfold_vector: expected " + std::to_string(reduced_length(n, bc)) +
                          " entries, got " + std::to_string(u.size()));
  }
  if (bc == ImageBc::dirichlet_alt) {
    double norm2 = 0.0;
    for (double x : u) norm2 += x * x;
    if (std::abs(u[static_cast<std::size_t>(n)]) > tol * std::sqrt(norm2)) {
      throw SymmetryViolation("dirichlet_alt vector has support on its padding slot");
    }
  }
  const double s = bc == ImageBc::neumann ? 1.0 : -1.0;
  const double c = std::numbers::sqrt2 / 2;
  std::vector<double> v(static_cast<std::size_t>(parent_sites(n, bc)), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto [p, m] = image_pair(i, n, bc);
    v[static_cast<std::size_t>(p)] = c * u[static_cast<std::size_t>(i)];
    v[static_cast<std::size_t>(m)] = s * c * u[static_cast<std::size_t>(i)];
  }
  return v;
}

/// Periodic parent operator whose sector restriction gives `restrict_laplacian`.
inline CirculantOperator parent_operator(const Stencil& s, int n, ImageBc bc) {
  return build_circulant(s, bc == ImageBc::dirichlet_alt ? n + 1 : n);
}

}  // namespace pdelin
