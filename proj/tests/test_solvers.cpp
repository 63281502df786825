#include <gtest/gtest.h>

#include <cmath>

#include "pdelin/expressions.hpp"
#include "pdelin/fdm_solver.hpp"
#include "pdelin/solver_core.hpp"

using namespace pdelin;

namespace {
SpectralProblem make_problem(Basis b, int d, int n, const Expression& u, const Eigen::MatrixXd& A) {
  SpectralProblem p;
  p.basis = b;
  p.d = d;
  p.n = n;
  p.op = EllipticOperator(A);
  p.f = [u, A, d](std::span<const double> x) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) s += A(i, j) * u.second(x, i, j);
    }
    return s;
  };
  p.gamma = [u](std::span<const double> x) { return u(x); };
  p.exact = p.gamma;
  return p;
}

Eigen::MatrixXd dense_fdm_solve(const FdmSystem& s) {
  const Eigen::MatrixXd M(s.matrix());
  const Eigen::Map<const Eigen::VectorXd> f(s.rhs.data(), static_cast<Eigen::Index>(s.rhs.size()));
  return M.completeOrthogonalDecomposition().solve(f);
}
}  // namespace

TEST(SpectralSolve, CubicIsReproducedExactly) {
  const auto u = Expression::product({"poly3", "poly3"});
  Eigen::MatrixXd A(2, 2);
  A << 1.0, 0.25, 0.25, 2.0;
  const auto p = make_problem(Basis::chebyshev, 2, 6, u, A);
  const auto s = solve_problem<Basis::chebyshev>(p);
  EXPECT_LE(s.residual, 1e-12);
  const auto e = field_errors<Basis::chebyshev>(s.nodal, *p.exact, 2, 6);
  EXPECT_LT(e.raw_l2, 1e-10);
}

TEST(SpectralSolve, FourierPeriodicConverges) {
  const auto u = Expression::named("exp_sin_pi");
  const auto p = make_problem(Basis::fourier, 1, 24, u, Eigen::MatrixXd::Identity(1, 1));
  const auto s = solve_problem<Basis::fourier>(p);
  EXPECT_LT(field_errors<Basis::fourier>(s.nodal, *p.exact, 1, 24).normalized_l2, 1e-10);
  EXPECT_GE(s.q, 1.0 / std::sqrt(2.0) - 1e-12);
}

TEST(SpectralSolve, FourierClosuresAgree) {
  const auto u = Expression::named("exp_sin_pi");
  auto p = make_problem(Basis::fourier, 2, 16, u, Eigen::MatrixXd::Identity(2, 2));
  const double base = field_errors<Basis::fourier>(solve_problem<Basis::fourier>(p).nodal, *p.exact, 2, 16).normalized_l2;
  p.closure = FourierClosure::point_value;
  const double pv = field_errors<Basis::fourier>(solve_problem<Basis::fourier>(p).nodal, *p.exact, 2, 16).normalized_l2;
  EXPECT_LT(base, 1e-6);
  EXPECT_LT(pv, 1e-6);
  EXPECT_EQ(parse_closure("coefficient_pin"), FourierClosure::coefficient_pin);
  EXPECT_THROW(parse_closure("pin"), InvalidArgument);
}

TEST(SpectralSolve, ConvergenceStudyIsSuperGeometric) {
  const auto u = Expression::named("exp_sin_half_pi");
  const auto p = make_problem(Basis::chebyshev, 1, 4, u, Eigen::MatrixXd::Identity(1, 1));
  const std::vector<int> ns = {4, 6, 8, 10, 12};
  const auto rows = convergence_study<Basis::chebyshev>(p, ns, false);
  ASSERT_EQ(rows.size(), ns.size());
  std::vector<double> err;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) EXPECT_LT(rows[i].normalized_l2, rows[i - 1].normalized_l2);
    err.push_back(rows[i].normalized_l2);
  }
  EXPECT_LT(super_geometric_slope(ns, err), 0.0);
  EXPECT_EQ(to_csv(rows[0]).substr(0, 15), "chebyshev,1,4,0");
  EXPECT_EQ(study_csv_header(), "basis,d,n,raw_l2,normalized_l2,kappa,q,residual,runtime_ms");
}

TEST(FdmSolve, PeriodicMatchesDenseSolve) {
  const auto u = Expression::product({"sin", "cos"});
  FdmProblem p;
  p.d = 2;
  p.n = 6;
  p.k = 2;
  p.rhs = [u](std::span<const double> x) { return u.laplacian(x) + 0.3 * std::sin(2 * x[0]); };
  const FdmSystem s = assemble(p);
  const FdmSolution sol = solve(s);
  EXPECT_LT(sol.residual, 1e-12);
  Eigen::VectorXd ref = dense_fdm_solve(s);
  ref.array() -= ref.mean();
  for (std::size_t i = 0; i < sol.u.size(); ++i) EXPECT_NEAR(sol.u[i], ref(static_cast<Eigen::Index>(i)), 1e-10);
}

TEST(FdmSolve, ImageBoundariesMatchDenseSolve) {
  for (auto bc : {FdmBc::dirichlet, FdmBc::dirichlet_alt, FdmBc::neumann}) {
    FdmProblem p;
    p.d = 2;
    p.bc = bc;
    p.n = 9;
    p.k = 2;
    p.rhs = [bc](std::span<const double> x) {
      return bc == FdmBc::neumann ? std::cos(x[0]) * std::cos(2 * x[1]) : std::sin(x[0]) * std::sin(3 * x[1]) + x[0];
    };
    const FdmSystem s = assemble(p);
    const FdmSolution sol = solve_cg(s);
    EXPECT_LT(sol.residual, 1e-10) << to_string(bc);
    Eigen::VectorXd ref = dense_fdm_solve(s);
    if (bc == FdmBc::neumann) ref.array() -= ref.mean();
    for (std::size_t i = 0; i < sol.u.size(); ++i) EXPECT_NEAR(sol.u[i], ref(static_cast<Eigen::Index>(i)), 1e-8);
  }
}

TEST(FdmSolve, DirichletConvergesToSine) {
  const auto u = Expression::product({"sin", "sin"});
  double prev = 1.0;
  for (int n : {8, 16, 32}) {
    FdmProblem p;
    p.d = 2;
    p.bc = FdmBc::dirichlet;
    p.n = n;
    p.k = 1;
    p.rhs = [u](std::span<const double> x) { return u.laplacian(x); };
    const FdmSystem s = assemble(p);
    const auto rep = error_report(s, solve(s).u, [u](std::span<const double> x) { return u(x); });
    EXPECT_LT(rep.linf, prev);
    prev = rep.linf;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(FdmSolve, CompatibilityAndValidation) {
  FdmProblem p;
  p.d = 1;
  p.n = 8;
  p.k = 1;
  p.rhs = [](std::span<const double>) { return 1.0; };
  EXPECT_THROW(assemble(p), CompatibilityError);
  p.bc = FdmBc::neumann;
  EXPECT_THROW(assemble(p), CompatibilityError);
  p.bc = FdmBc::dirichlet;
  EXPECT_NO_THROW(assemble(p));
  p.k = 4;
  EXPECT_THROW(assemble(p), InvalidArgument);
  EXPECT_EQ(parse_fdm_bc("dirichlet_alt"), FdmBc::dirichlet_alt);
  EXPECT_THROW(parse_fdm_bc("robin"), InvalidArgument);
}

TEST(FdmSolve, ConditionNumberMatchesDenseEigenvalues) {
  FdmProblem p;
  p.d = 2;
  p.bc = FdmBc::dirichlet;
  p.n = 10;
  p.k = 2;
  p.rhs = [](std::span<const double> x) { return x[0]; };
  const FdmSystem s = assemble(p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(s.matrix())};
  const Eigen::VectorXd ev = es.eigenvalues().cwiseAbs();
  EXPECT_NEAR(fdm_condition_number(s), ev.maxCoeff() / ev.minCoeff(), 1e-8 * ev.maxCoeff() / ev.minCoeff());
}

TEST(FdmParameters, SelectionMeetsBound) {
  const auto par = select_parameters(2, 1e-6, 10.0);
  EXPECT_LE(par.error_bound, 1e-6);
  EXPECT_EQ(par.k, static_cast<int>(std::ceil(2 * std::sqrt(par.n))));
  EXPECT_NEAR(par.error_bound, fdm_error_bound(2, par.n, par.k, 10.0), 1e-18);
  // the bound decreases when k grows at fixed n
  EXPECT_LT(fdm_error_bound(1, 64, 4, 1.0), fdm_error_bound(1, 64, 3, 1.0));
  EXPECT_THROW(select_parameters(0, 1e-6, 1.0), InvalidArgument);
  EXPECT_THROW(select_parameters(1, 2.0, 1.0), InvalidArgument);
  EXPECT_THROW(select_parameters(1, 1e-6, 1.0, 0.9), InvalidArgument);
}

TEST(Expressions, DerivativesMatchFiniteDifferences) {
  const double h = 1e-4;
  for (const char* name : {"poly3", "sin_pi", "cos", "exp_sin", "exp_sin_half_pi", "x"}) {
    const auto f = Factor::parse(name);
    for (double x : {-0.7, 0.1, 0.9}) {
      const double d1 = (f.eval(x + h) - f.eval(x - h)) / (2 * h);
      const double d2 = (f.eval(x + h) - 2 * f.eval(x) + f.eval(x - h)) / (h * h);
      EXPECT_NEAR(f.eval(x, 1), d1, 1e-6) << name;
      EXPECT_NEAR(f.eval(x, 2), d2, 1e-4) << name;
    }
  }
  EXPECT_THROW(Factor::parse("tan"), InvalidArgument);
  const auto e = Expression::product({"sin", "cos"}, 2.0);
  const std::vector<double> x = {0.3, 0.4};
  EXPECT_NEAR(e(x), 2 * std::sin(0.3) * std::cos(0.4), 1e-15);
  EXPECT_NEAR(e.second(x, 0, 1), -2 * std::cos(0.3) * std::sin(0.4), 1e-15);
  EXPECT_TRUE(Expression::named("zero").is_zero());
}
