/**
 * @file solver_core.hpp
 * @brief Classical solution of assembled spectral systems, node synthesis,
 *        coefficient analysis, series evaluation and convergence studies.
 *
 * Interpolation nodes per axis: Fourier chi_l = 2l/(n+1) - 1, Chebyshev
 * chi_l = cos(pi l / n), l = 0..n.  Node synthesis is
 *     Fourier:   u = sqrt(n+1) F^s c
 *     Chebyshev: u = diag(1/(sqrt(2/n) delta)) C diag(1/delta) c
 * applied along every axis; analysis is the inverse map.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
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
#include <type_traits>
#include <vector>

#include "pdelin/error.hpp"
#include "pdelin/spectral_ops.hpp"
#include "pdelin/spectral_system.hpp"
#include "pdelin/tensor.hpp"
#include "pdelin/transforms.hpp"

namespace pdelin {

using PointFn = std::function<double(std::span<const double>)>;

struct SolveInfo {
  double residual = 0.0;  ///< ||L c - b|| / ||b||
  int refinements = 0;
};

/**
 * Sparse LU followed by iterative refinement until the relative residual is
 * at most `tol`.  Throws RankDeficient when factorization fails or the
 * residual target is missed.
 */
template <Basis B>
Vector<B> solve_system(const SpectralSystem<B>& sys, SolveInfo* info = nullptr, double tol = 1e-12) {
  SparseMatrix<B> L = sys.L;
  L.makeCompressed();
  Eigen::SparseLU<SparseMatrix<B>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(L);
  lu.factorize(L);
  if (lu.info() != Eigen::Success) {
    throw RankDeficient("sparse LU failed on the " + std::to_string(L.rows()) + "x" +
                        std::to_string(L.cols()) + " system: " + lu.lastErrorMessage());
  }
  const double bn = sys.rhs.norm();
  Vector<B> c = lu.solve(sys.rhs);
  double res = bn > 0.0 ? (sys.rhs - L * c).norm() / bn : (L * c).norm();
  int it = 0;
  for (; it < 5 && res > tol; ++it) {
    c += lu.solve(Vector<B>(sys.rhs - L * c));
    res = bn > 0.0 ? (sys.rhs - L * c).norm() / bn : (L * c).norm();
  }
  if (!std::isfinite(res) || res > tol) {
    throw RankDeficient("relative residual " + std::to_string(res) + " exceeds " + std::to_string(tol) +
                        " after " + std::to_string(it) + " refinement steps");
  }
  if (info) *info = {res, it};
  return c;
}

/// Node coordinates along one axis.
template <Basis B>
std::vector<double> interpolation_nodes(int n) {
  std::vector<double> x(static_cast<std::size_t>(n + 1));
  for (int l = 0; l <= n; ++l) {
    x[static_cast<std::size_t>(l)] =
        B == Basis::fourier ? 2.0 * l / (n + 1) - 1.0 : std::cos(std::numbers::pi * l / n);
  }
  return x;
}

namespace detail {

template <Basis B>
void synthesis_line(std::span<cplx> v, bool inverse) {
  const int n = static_cast<int>(v.size()) - 1;
  if constexpr (B == Basis::fourier) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    if (!inverse) {
      apply_transform(TransformKind::qsft, v);
      for (auto& x : v) x *= s;
    } else {
      apply_transform(TransformKind::qsft, v, true);
      for (auto& x : v) x /= s;
    }
  } else {
    const double pre = std::sqrt(2.0 / n);
    if (!inverse) {
      for (int k = 0; k <= n; ++k) v[static_cast<std::size_t>(k)] /= qct_delta(k, n);
      apply_transform(TransformKind::qct, v);
      for (int l = 0; l <= n; ++l) v[static_cast<std::size_t>(l)] /= pre * qct_delta(l, n);
    } else {
      for (int l = 0; l <= n; ++l) v[static_cast<std::size_t>(l)] *= pre * qct_delta(l, n);
      apply_transform(TransformKind::qct, v);
      for (int k = 0; k <= n; ++k) v[static_cast<std::size_t>(k)] *= qct_delta(k, n);
    }
  }
}

template <Basis B>
Vector<B> map_all_axes(const Vector<B>& in, int d, bool inverse) {
  CVector w(static_cast<std::size_t>(in.size()));
  for (Eigen::Index i = 0; i < in.size(); ++i) w[static_cast<std::size_t>(i)] = cplx(in(i));
  const int side = tensor_side(w.size(), d);
  for (int a = 0; a < d; ++a) {
    for_each_line(std::span<cplx>(w), side, d, a, [&](std::span<cplx> line) { synthesis_line<B>(line, inverse); });
  }
  Vector<B> out(in.size());
  for (Eigen::Index i = 0; i < in.size(); ++i) {
    if constexpr (B == Basis::fourier) {
      out(i) = w[static_cast<std::size_t>(i)];
    } else {
      out(i) = w[static_cast<std::size_t>(i)].real();
    }
  }
  return out;
}

}  // namespace detail

/// Values of sum_k c_k phi_k at the tensor interpolation grid.
template <Basis B>
Vector<B> synthesize_nodes(const Vector<B>& c, int d) {
  return detail::map_all_axes<B>(c, d, false);
}

/// Coefficients of the interpolant of nodal values (inverse of synthesize_nodes).
template <Basis B>
Vector<B> analysis(const Vector<B>& u, int d) {
  return detail::map_all_axes<B>(u, d, true);
}

namespace detail {
/// sum_k c_k T_k(x) by the Clenshaw recurrence.
template <class T>
T clenshaw(std::span<const T> c, double x) {
  T b1(0), b2(0);
  for (std::size_t k = c.size(); k-- > 1;) {
    const T b0 = c[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + x * b1 - b2;
}

template <class T>
T fourier_sum(std::span<const T> c, double x) {
  const int m = static_cast<int>(c.size() - 1) / 2;
  cplx acc(0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    acc += cplx(c[k]) * std::polar(1.0, (static_cast<int>(k) - m) * std::numbers::pi * x);
  }
  if constexpr (std::is_same_v<T, cplx>) {
    return acc;
  } else {
    return acc.real();
  }
}
}  // namespace detail

/**
 * Evaluates the truncated series at arbitrary points of [-1, 1]^d, one axis
 * at a time from the fastest.  Throws DomainError outside the box.
 */
template <Basis B>
std::vector<Scalar<B>> evaluate_at(const Vector<B>& c, int d, const std::vector<std::vector<double>>& points) {
  using T = Scalar<B>;
  const int side = tensor_side(static_cast<std::size_t>(c.size()), d);
  std::vector<T> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != d) throw InvalidArgument("point has the wrong dimension");
    for (double x : p) {
      if (!(x >= -1.0 && x <= 1.0)) {
        throw DomainError("point coordinate " + std::to_string(x) + " lies outside [-1, 1]");
      }
    }
    std::vector<T> cur(c.data(), c.data() + c.size());
    for (int a = d - 1; a >= 0; --a) {
      const std::size_t lines = cur.size() / static_cast<std::size_t>(side);
      std::vector<T> next(lines);
      for (std::size_t i = 0; i < lines; ++i) {
        std::span<const T> line(cur.data() + i * side, static_cast<std::size_t>(side));
        next[i] = B == Basis::chebyshev ? detail::clenshaw<T>(line, p[static_cast<std::size_t>(a)])
                                        : detail::fourier_sum<T>(line, p[static_cast<std::size_t>(a)]);
      }
      cur = std::move(next);
    }
    out.push_back(cur[0]);
  }
  return out;
}

/// A problem sum A_ij d_i d_j u = f with boundary data gamma (or u(0) for point closures).
struct SpectralProblem {
  Basis basis = Basis::chebyshev;
  int d = 1;
  int n = 8;
  EllipticOperator op = EllipticOperator::poisson(1);
  PointFn f;
  PointFn gamma;
  std::optional<PointFn> exact;
  FourierClosure closure = FourierClosure::kronecker;
};

template <Basis B>
struct SolutionField {
  int n = 0;
  int d = 0;
  Vector<B> coeffs;
  Vector<B> nodal;
  double residual = 0.0;
  double runtime_ms = 0.0;
  double q = 1.0;
};

namespace detail {

/// Samples `fn` on the node grid of the axes other than `skip`, with x_skip = fixed.
template <Basis B>
Vector<B> sample_face(const PointFn& fn, int d, int n, int skip, double fixed) {
  const auto nodes = interpolation_nodes<B>(n);
  const int dd = d - 1;
  const std::size_t total = dd == 0 ? 1 : checked_pow(static_cast<std::size_t>(n + 1), dd);
  Vector<B> v(static_cast<Eigen::Index>(total));
  std::vector<double> x(static_cast<std::size_t>(d));
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t rest = f;
    for (int a = d - 1; a >= 0; --a) {
      if (a == skip) {
        x[static_cast<std::size_t>(a)] = fixed;
        continue;
      }
      x[static_cast<std::size_t>(a)] = nodes[rest % static_cast<std::size_t>(n + 1)];
      rest /= static_cast<std::size_t>(n + 1);
    }
    v(static_cast<Eigen::Index>(f)) = Scalar<B>(fn(x));
  }
  return v;
}

}  // namespace detail

/// Samples a function on the full d-dimensional node grid.
template <Basis B>
Vector<B> sample_nodes(const PointFn& fn, int d, int n) {
  const auto nodes = interpolation_nodes<B>(n);
  const std::size_t total = checked_pow(static_cast<std::size_t>(n + 1), d);
  Vector<B> v(static_cast<Eigen::Index>(total));
  for (std::size_t f = 0; f < total; ++f) {
    const std::vector<int> idx = unravel(f, n + 1, d);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) x[static_cast<std::size_t>(a)] = nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
    v(static_cast<Eigen::Index>(f)) = Scalar<B>(fn(x));
  }
  return v;
}

/**
 * fhat from samples of f, and boundary blocks from gamma: Chebyshev faces
 * x_j = +1 / -1, Fourier hyperplanes x_j = 0, each analysed in d-1
 * dimensions.  Point closures use gamma(0).
 */
template <Basis B>
std::pair<Vector<B>, BoundaryData<B>> problem_data(const SpectralProblem& p) {
  if (!p.f) throw InvalidArgument("problem has no right-hand side");
  if (!p.gamma) throw InvalidArgument("problem has no boundary data");
  const Vector<B> fhat = analysis<B>(sample_nodes<B>(p.f, p.d, p.n), p.d);
  BoundaryData<B> g = BoundaryData<B>::zero(p.d, p.n);
  auto face_coeffs = [&](int axis, double x) {
    Vector<B> s = detail::sample_face<B>(p.gamma, p.d, p.n, axis, x);
    return p.d == 1 ? s : analysis<B>(s, p.d - 1);
  };
  if constexpr (B == Basis::fourier) {
    if (p.closure == FourierClosure::kronecker) {
      for (int a = 0; a < p.d; ++a) g.plus[static_cast<std::size_t>(a)] = face_coeffs(a, 0.0);
    } else {
      const std::vector<double> origin(static_cast<std::size_t>(p.d), 0.0);
      g.point = p.gamma(origin);
    }
  } else {
    for (int a = 0; a < p.d; ++a) {
      g.plus[static_cast<std::size_t>(a)] = face_coeffs(a, 1.0);
      g.minus[static_cast<std::size_t>(a)] = face_coeffs(a, -1.0);
    }
  }
  return {fhat, g};
}

/// Assemble, solve and synthesize.
template <Basis B>
SolutionField<B> solve_problem(const SpectralProblem& p, SpectralSystem<B>* out_system = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  auto [fhat, g] = problem_data<B>(p);
  SpectralSystem<B> sys = assemble_system<B>(p.op, p.n, fhat, g, p.closure);
  SolveInfo info;
  SolutionField<B> s;
  s.n = p.n;
  s.d = p.d;
  s.coeffs = solve_system<B>(sys, &info);
  s.nodal = synthesize_nodes<B>(s.coeffs, p.d);
  s.residual = info.residual;
  if (B == Basis::chebyshev || p.closure == FourierClosure::kronecker) {
    try {
      s.q = state_prep_q<B>(fhat, g, p.op, p.n).q;
    } catch (const DegenerateRhs&) {
      s.q = std::numeric_limits<double>::infinity();
    }
  }
  s.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (out_system) *out_system = std::move(sys);
  return s;
}

struct FieldErrors {
  double raw_l2 = 0.0;         ///< ||u - u_exact||_2 over the nodes
  double normalized_l2 = 0.0;  ///< || u/||u|| - u_exact/||u_exact|| ||
  double exact_norm = 0.0;     ///< ||u_exact||_2 over the nodes
};

template <Basis B>
FieldErrors field_errors(const Vector<B>& nodal, const PointFn& exact, int d, int n) {
  const Vector<B> ue = sample_nodes<B>(exact, d, n);
  FieldErrors e;
  e.exact_norm = ue.norm();
  e.raw_l2 = (nodal - ue).norm();
  if (e.exact_norm == 0.0 || nodal.norm() == 0.0) {
    throw InvalidArgument("normalized error undefined for a vanishing field");
  }
  e.normalized_l2 = (nodal / nodal.norm() - ue / e.exact_norm).norm();
  return e;
}

struct StudyRow {
  std::string basis;
  int d = 0;
  int n = 0;
  double raw_l2 = 0.0;
  double normalized_l2 = 0.0;
  double kappa = 0.0;
  double q = 1.0;
  double residual = 0.0;
  double runtime_ms = 0.0;
};

inline std::string study_csv_header() { return "basis,d,n,raw_l2,normalized_l2,kappa,q,residual,runtime_ms"; }

inline std::string to_csv(const StudyRow& r) {
  char buf[320];
  std::snprintf(buf, sizeof buf, "%s,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.6f", r.basis.c_str(), r.d, r.n,
                r.raw_l2, r.normalized_l2, r.kappa, r.q, r.residual, r.runtime_ms);
  return buf;
}

/// One row per n of `n_list`; `with_kappa` adds a condition-number estimate.
template <Basis B>
std::vector<StudyRow> convergence_study(SpectralProblem p, const std::vector<int>& n_list, bool with_kappa = true) {
  if (!p.exact) throw InvalidArgument("convergence study needs an exact solution");
  std::vector<StudyRow> rows;
  for (int n : n_list) {
    p.n = n;
    SpectralSystem<B> sys;
    const SolutionField<B> s = solve_problem<B>(p, &sys);
    const FieldErrors e = field_errors<B>(s.nodal, *p.exact, p.d, n);
    StudyRow r;
    r.basis = to_string(B);
    r.d = p.d;
    r.n = n;
    r.raw_l2 = e.raw_l2;
    r.normalized_l2 = e.normalized_l2;
    r.kappa = with_kappa ? condition_report<B>(sys).kappa : std::nan("");
    r.q = s.q;
    r.residual = s.residual;
    r.runtime_ms = s.runtime_ms;
    rows.push_back(r);
  }
  return rows;
}

/// Least-squares slope of log(err) against n log n (negative for super-geometric decay).
inline double super_geometric_slope(const std::vector<int>& n, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double x = n[i] * std::log(static_cast<double>(n[i]));
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace pdelin
