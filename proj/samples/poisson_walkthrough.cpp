// Poisson's equation on [-1,1]^2 with u = exp(sin(pi x / 2)) cos(y), solved
// with the Chebyshev collocation system at increasing n, then the same
// family on the periodic finite-difference side.
#include <cmath>
#include <cstdio>

#include "pdelin/pdelin.hpp"

using namespace pdelin;

int main() {
  const Expression u = Expression::product({"exp_sin_half_pi", "cos"});

  SpectralProblem p;
  p.basis = Basis::chebyshev;
  p.d = 2;
  p.op = EllipticOperator::poisson(2);
  p.f = [u](std::span<const double> x) { return u.laplacian(x); };
  p.gamma = [u](std::span<const double> x) { return u(x); };
  p.exact = p.gamma;

  std::printf("Chebyshev collocation, d = 2\n%s\n", study_csv_header().c_str());
  for (const auto& row : convergence_study<Basis::chebyshev>(p, {4, 8, 12, 16, 20, 24})) {
    std::printf("%s\n", to_csv(row).c_str());
  }

  // The coefficients give the solution anywhere in the box.
  p.n = 24;
  const auto s = solve_problem<Basis::chebyshev>(p);
  const std::vector<double> probe = {0.25, -0.6};
  const double got = evaluate_at<Basis::chebyshev>(s.coeffs, 2, {probe})[0];
  std::printf("\nu(0.25, -0.6): series %.15f, exact %.15f\n", got, u(probe));

  // Periodic finite differences: raising the stencil half-width k at fixed n.
  const Expression v = Expression::product({"sin", "cos"});
  std::printf("\nperiodic FDM, d = 2, n = 32\n%s\n", fdm_csv_header().c_str());
  for (int k = 1; k <= 5; ++k) {
    FdmProblem fp;
    fp.d = 2;
    fp.n = 32;
    fp.k = k;
    fp.rhs = [v](std::span<const double> x) { return v.laplacian(x); };
    const FdmSystem sys = assemble(fp);
    const FdmSolution sol = solve(sys);
    const auto err = error_report(sys, sol.u, [v](std::span<const double> x) { return v(x); });
    std::printf("%s\n", to_csv(FdmCsvRow{fp.n, k, fp.d, err.l2_rel, err.linf, fdm_condition_number(sys),
                                         sol.runtime_ms})
                            .c_str());
  }
  return 0;
}
