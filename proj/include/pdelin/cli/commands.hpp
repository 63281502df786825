/**
 * @file commands.hpp
 * @brief Subcommand drivers of the pdelin tool.  Each returns the process
 *        exit code: 0 success, 1 verification failure, 2 invalid input.
 */
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdelin/appendix_a.hpp"
#include "pdelin/cli/problem_spec.hpp"
#include "pdelin/cli/verify.hpp"
#include "pdelin/fdm_solver.hpp"
#include "pdelin/matrix_io.hpp"
#include "pdelin/solver_core.hpp"

namespace pdelin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitSpecError = 2;

enum class Format { csv, json };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw SpecError("--format must be csv or json, got '" + s + "'");
}

namespace detail {

/// JSON number, or a string for non-finite values (JSON has no inf/nan).
inline json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SpecError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

inline std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw SpecError("cannot write '" + file.string() + "'");
  return out;
}

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Golden replacements: {"D_3": ["0 1 0 3", ...], ...}.
inline std::map<std::string, appendix_a::Golden> load_golden_overrides(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw SpecError("cannot open golden file '" + file.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("golden file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw SpecError("golden file must map matrix names to arrays of row strings");
  std::map<std::string, appendix_a::Golden> out;
  std::vector<std::string> known;
  for (const auto& g : appendix_a::goldens()) known.push_back(g.name);
  for (const auto& [name, rows] : j.items()) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw SpecError("golden file names unknown matrix '" + name + "'");
    }
    appendix_a::Golden g{name, {}};
    try {
      g.rows = rows.get<std::vector<std::string>>();
      appendix_a::parse_golden(g);
    } catch (const std::exception& e) {
      throw SpecError("golden '" + name + "': " + e.what());
    }
    out[name] = g;
  }
  return out;
}

/**
 * Compares the assembled worked-example matrices with the embedded (or
 * overridden) references.  With `out_dir`, each assembled matrix is also
 * written in coordinate format and read back to confirm the round trip.
 */
inline int cmd_reproduce_appendix_a(const std::optional<std::filesystem::path>& golden_file,
                                    const std::optional<std::filesystem::path>& out_dir, std::ostream& out) {
  std::map<std::string, appendix_a::Golden> overrides;
  if (golden_file) overrides = load_golden_overrides(*golden_file);
  const auto results = appendix_a::reproduce(overrides);
  bool ok = true;
  for (const auto& r : results) {
    out << (r.ok ? "PASS " : "FAIL ") << r.name << ": " << r.message << '\n';
    ok = ok && r.ok;
  }
  if (out_dir) {
    detail::ensure_dir(*out_dir);
    for (const auto& g : appendix_a::goldens()) {
      const Eigen::MatrixXcd M = appendix_a::computed(g.name);
      const std::string text = to_coordinate_string(M);
      auto f = detail::open_out(*out_dir / (g.name + ".mtx"));
      f << text;
      const bool same = from_coordinate_string(text) == M;
      if (!same) out << "FAIL " << g.name << ": coordinate round trip changed the matrix\n";
      ok = ok && same;
    }
    out << "wrote " << appendix_a::goldens().size() << " coordinate files to " << out_dir->string() << '\n';
  }
  return ok ? kExitOk : kExitFailure;
}

/// Runs one suite (or "all") and prints the table; nonzero exit on any failure.
inline int cmd_verify_bounds(const std::string& suite, std::uint64_t seed, std::optional<Format> format,
                             const std::optional<std::filesystem::path>& out_dir, std::ostream& out) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else if (std::find(suite_names().begin(), suite_names().end(), suite) != suite_names().end()) {
    names = {suite};
  } else {
    throw SpecError("unknown suite '" + suite + "' (fdm_kappa, svd_fourier, svd_chebyshev, kappa_poisson, "
                    "kappa_general, stencil, all)");
  }
  std::vector<CheckRow> rows;
  for (const auto& n : names) {
    auto r = run_suite(n, seed);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  std::size_t pass = 0, fail = 0, skip = 0;
  for (const auto& r : rows) {
    (r.status == Status::pass ? pass : r.status == Status::fail ? fail : skip)++;
  }
  std::string body;
  if (!format) {
    body = to_table(rows);
  } else if (*format == Format::csv) {
    body = check_csv_header() + "\n";
    for (const auto& r : rows) body += to_csv(r) + "\n";
  } else {
    json j = json::array();
    for (const auto& r : rows) j.push_back(to_json(r));
    body = json({{"seed", seed}, {"pass", pass}, {"fail", fail}, {"skipped", skip}, {"rows", j}}).dump(2) + "\n";
  }
  if (out_dir) {
    detail::ensure_dir(*out_dir);
    const std::string ext = format && *format == Format::json ? ".json" : (format ? ".csv" : ".txt");
    detail::open_out(*out_dir / ("verify_" + suite + ext)) << body;
  } else {
    out << body;
  }
  out << "summary: " << pass << " pass, " << fail << " fail, " << skip << " skipped\n";
  return fail == 0 ? kExitOk : kExitFailure;
}

struct SolveReport {
  json metadata;
  std::vector<std::vector<double>> points;
  std::vector<double> values;
  std::vector<double> values_imag;  ///< Fourier only
  std::optional<Eigen::MatrixXcd> matrix;
};

namespace detail {

template <Basis B>
SolveReport solve_spectral(const ProblemSpec& p, int n) {
  SpectralProblem sp;
  sp.basis = B;
  sp.d = p.d;
  sp.n = n;
  sp.op = EllipticOperator(p.A);
  sp.closure = p.closure;
  sp.f = field_function(p.f, p, true);
  sp.gamma = field_function(*p.gamma, p, false);
  if (p.exact) sp.exact = field_function(*p.exact, p, false);

  SpectralSystem<B> sys;
  const SolutionField<B> s = solve_problem<B>(sp, &sys);
  const ConditionReport cr = condition_report<B>(sys);

  SolveReport r;
  json& m = r.metadata;
  m["basis"] = to_string(B);
  if (B == Basis::fourier) m["closure"] = to_string(p.closure);
  m["unknowns"] = sys.L.rows();
  m["residual"] = number(s.residual);
  m["kappa"] = number(cr.kappa);
  m["kappa_approximate"] = cr.approximate;
  m["sigma_max"] = number(cr.sigma_max);
  m["sigma_min"] = number(cr.sigma_min);
  m["kappa_bound_general"] = number(cr.bound_general);
  m["q"] = number(s.q);
  m["success_probability"] = number(1.0 / (s.q * s.q));
  const auto& g = sys.op.gdd();
  m["gdd"] = {{"C", g.C}, {"norm_sigma", g.norm_sigma}, {"norm_star", g.norm_star}};
  m["solve_runtime_ms"] = s.runtime_ms;
  if (sp.exact) {
    const FieldErrors e = field_errors<B>(s.nodal, *sp.exact, p.d, n);
    m["errors"] = {{"raw_l2", number(e.raw_l2)}, {"normalized_l2", number(e.normalized_l2)}, {"exact_norm", e.exact_norm}};
  }
  const auto nodes = interpolation_nodes<B>(n);
  for (Eigen::Index f = 0; f < s.nodal.size(); ++f) {
    const auto idx = unravel(static_cast<std::size_t>(f), n + 1, p.d);
    std::vector<double> x;
    for (int a : idx) x.push_back(nodes[static_cast<std::size_t>(a)]);
    r.points.push_back(std::move(x));
    if constexpr (B == Basis::fourier) {
      r.values.push_back(s.nodal(f).real());
      r.values_imag.push_back(s.nodal(f).imag());
    } else {
      r.values.push_back(s.nodal(f));
    }
  }
  if (p.matrix_file) {
    if constexpr (B == Basis::fourier) {
      r.matrix = Eigen::MatrixXcd(sys.L);
    } else {
      r.matrix = Eigen::MatrixXd(sys.L).cast<std::complex<double>>();
    }
  }
  return r;
}

inline SolveReport solve_fdm(const ProblemSpec& p, int n, int k, std::vector<std::string>& warnings) {
  FdmProblem fp;
  fp.d = p.d;
  fp.bc = p.bc;
  fp.n = n;
  fp.k = k;
  fp.rhs = field_function(p.f, p, true);
  if (p.exact) fp.exact = field_function(*p.exact, p, false);
  const FdmSystem sys = assemble(fp);
  if (CirculantOperator(sys.stencil, n, 1).wide_stencil()) {
    warnings.push_back("stencil half-width k = " + std::to_string(k) + " is at least n^(2/3); the Theta(d n^2) "
                       "condition-number scaling assumes k = o(n^(2/3))");
  }
  const FdmSolution sol = solve(sys);
  SolveReport r;
  json& m = r.metadata;
  m["bc"] = to_string(p.bc);
  m["unknowns"] = sys.size();
  m["h"] = sys.h;
  m["residual"] = number(sol.residual);
  m["iterations"] = sol.iterations;
  m["kappa"] = number(fdm_condition_number(sys));
  m["solve_runtime_ms"] = sol.runtime_ms;
  if (fp.exact) {
    const FdmErrorReport e = error_report(sys, sol.u, *fp.exact);
    m["errors"] = {{"l2_abs", number(e.l2_abs)}, {"l2_rel", number(e.l2_rel)}, {"linf", number(e.linf)},
                   {"normalized_l2", number(e.normalized)}};
  }
  for (std::size_t f = 0; f < sys.size(); ++f) {
    r.points.push_back(sys.point(f));
    r.values.push_back(sol.u[f]);
  }
  if (p.matrix_file) r.matrix = Eigen::MatrixXd(sys.matrix()).cast<std::complex<double>>();
  return r;
}

inline void write_solution(const SolveReport& r, int d, const std::filesystem::path& file, Format format) {
  auto out = open_out(file);
  const bool imag = !r.values_imag.empty();
  if (format == Format::csv) {
    for (int a = 0; a < d; ++a) out << "x" << a << ",";
    out << (imag ? "u_re,u_im" : "u") << '\n';
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      for (double x : r.points[i]) out << fmt17(x) << ',';
      out << fmt17(r.values[i]);
      if (imag) out << ',' << fmt17(r.values_imag[i]);
      out << '\n';
    }
  } else {
    json j = {{"points", r.points}, {"u", r.values}};
    if (imag) j["u_im"] = r.values_imag;
    out << j.dump() << '\n';
  }
}

}  // namespace detail

/**
 * Full pipeline for one problem: choose n (fixed or by rule), assemble,
 * solve, synthesize, and write the solution table and metadata into
 * `out_dir`.  Returns the exit code; the metadata is also returned through
 * `metadata_out` when given.
 */
inline int cmd_solve(const ProblemSpec& p, const std::filesystem::path& out_dir, Format format, std::uint64_t seed,
                     std::ostream& out, json* metadata_out = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  json meta;
  meta["name"] = p.name;
  meta["method"] = p.method == Method::fdm ? "fdm" : "spectral";
  meta["d"] = p.d;
  meta["seed"] = seed;
  std::vector<std::string> warnings;

  int n = 0, k = 0;
  if (p.method == Method::spectral) {
    if (p.auto_n) {
      const auto& a = *p.auto_n;
      try {
        n = choose_truncation(a.g, a.g_prime, a.eps);
      } catch (const InvalidArgument& e) {
        throw SpecError(std::string("auto-n: ") + e.what());
      } catch (const EpsTooLarge& e) {
        throw SpecError(std::string("auto-n: ") + e.what());
      }
      n = std::max(n, min_truncation<Basis::chebyshev>());
      const double lhs = truncation_lhs(a.g_prime, n), rhs = truncation_rhs(a.g, a.eps);
      meta["n_source"] = "auto";
      meta["truncation"] = {{"eps", a.eps}, {"g", a.g}, {"g_prime", a.g_prime},
                            {"omega", a.g_prime * (1 + a.eps) / (a.g * a.eps)},
                            {"lhs_gprime_e^n_over_(2n)^n", lhs}, {"rhs_g_eps_over_1_plus_eps", rhs},
                            {"inequality_holds", lhs <= rhs}};
    } else {
      n = *p.n;
      meta["n_source"] = "fixed";
    }
  } else {
    if (p.auto_n) {
      const auto& a = *p.auto_n;
      FdmParameters fp;
      try {
        fp = select_parameters(p.d, a.eps, a.deriv_bound, a.b);
      } catch (const InvalidArgument& e) {
        throw SpecError(std::string("auto-n: ") + e.what());
      }
      n = fp.n;
      k = fp.k;
      meta["n_source"] = "auto";
      meta["parameter_selection"] = {{"eps", a.eps}, {"deriv_bound", a.deriv_bound}, {"b", a.b},
                                     {"error_bound", fp.error_bound}};
    } else {
      n = *p.n;
      k = *p.k;
      meta["n_source"] = "fixed";
    }
    meta["k"] = k;
  }
  meta["n"] = n;

  SolveReport r;
  try {
    if (p.method == Method::spectral) {
      r = p.basis == Basis::fourier ? detail::solve_spectral<Basis::fourier>(p, n)
                                    : detail::solve_spectral<Basis::chebyshev>(p, n);
    } else {
      r = detail::solve_fdm(p, n, k, warnings);
    }
  } catch (const CompatibilityError& e) {
    throw SpecError(e.what());
  } catch (const DomainError& e) {
    throw SpecError(e.what());
  } catch (const GddRejected& e) {
    throw SpecError(e.what());
  }
  meta.update(r.metadata);
  meta["warnings"] = warnings;
  meta["spec"] = p.source;
  meta["outputs"] = {{"solution", p.solution_file}, {"metadata", p.metadata_file}};
  if (p.matrix_file) meta["outputs"]["matrix"] = *p.matrix_file;
  meta["runtime_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  detail::ensure_dir(out_dir);
  detail::write_solution(r, p.d, out_dir / p.solution_file, format);
  if (r.matrix) {
    auto f = detail::open_out(out_dir / *p.matrix_file);
    write_coordinate(f, *r.matrix);
  }
  detail::open_out(out_dir / p.metadata_file) << meta.dump(2) << '\n';
  for (const auto& w : warnings) out << "warning: " << w << '\n';
  out << p.name << ": n=" << n << (p.method == Method::fdm ? ", k=" + std::to_string(k) : std::string())
      << ", residual=" << meta["residual"].dump() << ", kappa=" << meta["kappa"].dump();
  if (meta.contains("errors")) out << ", errors=" << meta["errors"].dump();
  out << "\nwrote " << (out_dir / p.solution_file).string() << " and " << (out_dir / p.metadata_file).string() << '\n';
  if (metadata_out) *metadata_out = meta;
  return kExitOk;
}

/// Convergence sweep over the spec's "sweep" lists; one CSV/JSON row per instance.
inline int cmd_sweep(const ProblemSpec& p, const std::filesystem::path& out_dir, Format format, std::ostream& out) {
  if (p.sweep_n.empty()) throw SpecError("sweep needs a 'sweep' block with an 'n' list");
  if (!p.exact) throw SpecError("sweep needs an 'exact' solution to measure errors");
  std::string header;
  std::vector<std::string> lines;
  json rows = json::array();
  if (p.method == Method::spectral) {
    SpectralProblem sp;
    sp.basis = p.basis;
    sp.d = p.d;
    sp.op = EllipticOperator(p.A);
    sp.closure = p.closure;
    sp.f = field_function(p.f, p, true);
    sp.gamma = field_function(*p.gamma, p, false);
    sp.exact = field_function(*p.exact, p, false);
    const auto study = detail::parallel_map<StudyRow>(p.sweep_n.size(), [&](std::size_t i) {
      const std::vector<int> one{p.sweep_n[i]};
      return p.basis == Basis::fourier ? convergence_study<Basis::fourier>(sp, one)[0]
                                       : convergence_study<Basis::chebyshev>(sp, one)[0];
    });
    header = study_csv_header();
    for (const auto& r : study) {
      lines.push_back(to_csv(r));
      rows.push_back({{"basis", r.basis}, {"d", r.d}, {"n", r.n}, {"raw_l2", detail::number(r.raw_l2)},
                      {"normalized_l2", detail::number(r.normalized_l2)}, {"kappa", detail::number(r.kappa)},
                      {"q", detail::number(r.q)}, {"residual", detail::number(r.residual)}, {"runtime_ms", r.runtime_ms}});
    }
  } else {
    std::vector<int> ks = p.sweep_k;
    if (ks.empty()) {
      if (!p.k) throw SpecError("fdm sweep needs 'k' or a 'sweep.k' list");
      ks = {*p.k};
    }
    std::vector<std::pair<int, int>> cases;
    for (int k : ks) {
      for (int n : p.sweep_n) cases.emplace_back(n, k);
    }
    const auto res = detail::parallel_map<FdmCsvRow>(cases.size(), [&](std::size_t i) {
      FdmProblem fp;
      fp.d = p.d;
      fp.bc = p.bc;
      fp.n = cases[i].first;
      fp.k = cases[i].second;
      fp.rhs = field_function(p.f, p, true);
      fp.exact = field_function(*p.exact, p, false);
      const FdmSystem sys = assemble(fp);
      const FdmSolution sol = solve(sys);
      const FdmErrorReport e = error_report(sys, sol.u, *fp.exact);
      return FdmCsvRow{fp.n, fp.k, fp.d, e.l2_rel, e.linf, fdm_condition_number(sys), sol.runtime_ms};
    });
    header = fdm_csv_header();
    for (const auto& r : res) {
      lines.push_back(to_csv(r));
      rows.push_back({{"n", r.n}, {"k", r.k}, {"d", r.d}, {"l2_rel", detail::number(r.l2_rel)},
                      {"linf", detail::number(r.linf)}, {"kappa", detail::number(r.kappa)}, {"runtime_ms", r.runtime_ms}});
    }
  }
  detail::ensure_dir(out_dir);
  const auto file = out_dir / (format == Format::csv ? "sweep.csv" : "sweep.json");
  auto f = detail::open_out(file);
  if (format == Format::csv) {
    f << header << '\n';
    for (const auto& l : lines) f << l << '\n';
  } else {
    f << rows.dump(2) << '\n';
  }
  out << header << '\n';
  for (const auto& l : lines) out << l << '\n';
  out << "wrote " << file.string() << '\n';
  return kExitOk;
}

}  // namespace pdelin::cli
