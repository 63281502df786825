/**
 * @file problem_spec.hpp
 * @brief JSON problem descriptions for the command-line tool, validated in
 *        full before any computation starts.
 *
 * Expression fields (f, gamma, exact) accept
 *   "exp_sin_pi"                               a built-in name,
 *   {"factors": ["exp_sin_half_pi", "cos"], "scale": 2}   a product,
 *   {"samples": "values.csv"}                  rows "x_0,...,x_{d-1},value",
 *   "from_exact"                               derived from the exact solution
 *                                              (f = sum A_ij d_i d_j u, gamma = u).
 */
#pragma once

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pdelin/error.hpp"
#include "pdelin/expressions.hpp"
#include "pdelin/fdm_solver.hpp"
#include "pdelin/solver_core.hpp"
#include "pdelin/spectral_ops.hpp"
#include "pdelin/spectral_system.hpp"

namespace pdelin::cli {

using json = nlohmann::json;

/// A problem description that failed validation; maps to exit code 2.
class SpecError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class Method { fdm, spectral };

/// Point values read from a file, looked up by coordinates rounded to 1e-9.
class SampleTable {
 public:
  SampleTable(const std::filesystem::path& path, int d) : path_(path.string()) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open sample file '" + path_ + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream is(line);
      std::vector<double> row;
      double v;
      while (is >> v) row.push_back(v);
      if (static_cast<int>(row.size()) != d + 1) {
        throw SpecError("sample file '" + path_ + "' line " + std::to_string(lineno) + ": expected " +
                        std::to_string(d + 1) + " numbers (coordinates then value)");
      }
      values_[key(std::span<const double>(row.data(), static_cast<std::size_t>(d)))] = row.back();
    }
    if (values_.empty()) throw SpecError("sample file '" + path_ + "' holds no values");
  }

  double operator()(std::span<const double> x) const {
    const auto it = values_.find(key(x));
    if (it == values_.end()) {
      std::ostringstream os;
      os << "sample file '" << path_ << "' has no value at (";
      for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
      os << ")";
      throw DomainError(os.str());
    }
    return it->second;
  }

 private:
  static std::vector<long long> key(std::span<const double> x) {
    std::vector<long long> k;
    for (double v : x) k.push_back(std::llround(v * 1e9));
    return k;
  }

  std::string path_;
  std::map<std::vector<long long>, double> values_;
};

struct FieldSpec {
  enum class Kind { expression, samples, from_exact } kind = Kind::expression;
  Expression expr;
  std::shared_ptr<SampleTable> samples;
  std::string text;  ///< original description, echoed in metadata
};

struct AutoN {
  double eps = 0.0;
  double g = 1.0;        ///< spectral: lower bound on ||u||
  double g_prime = 1.0;  ///< spectral: derivative envelope
  double deriv_bound = 1.0;  ///< fdm: bound D on high derivatives
  double b = 0.5;            ///< fdm: exponent in k = ceil(d n^b)
};

struct ProblemSpec {
  std::string name = "problem";
  Method method = Method::spectral;
  Basis basis = Basis::chebyshev;
  FourierClosure closure = FourierClosure::kronecker;
  FdmBc bc = FdmBc::periodic;
  int d = 1;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<AutoN> auto_n;
  Eigen::MatrixXd A;
  FieldSpec f;
  std::optional<FieldSpec> gamma;
  std::optional<FieldSpec> exact;
  std::string solution_file = "solution.csv";
  std::string metadata_file = "metadata.json";
  std::optional<std::string> matrix_file;
  std::vector<int> sweep_n;
  std::vector<int> sweep_k;
  json source;  ///< the validated input, echoed into metadata
};

namespace detail {

inline FieldSpec parse_field(const json& j, const std::string& field, int d, const std::filesystem::path& base) {
  FieldSpec s;
  s.text = j.dump();
  try {
    if (j.is_string()) {
      const std::string v = j.get<std::string>();
      if (v == "from_exact") {
        s.kind = FieldSpec::Kind::from_exact;
      } else {
        s.expr = Expression::named(v);
      }
      return s;
    }
    if (j.is_object() && j.contains("samples")) {
      s.kind = FieldSpec::Kind::samples;
      s.samples = std::make_shared<SampleTable>(base / j.at("samples").get<std::string>(), d);
      return s;
    }
    if (j.is_object() && j.contains("factors")) {
      const auto names = j.at("factors").get<std::vector<std::string>>();
      if (names.size() != 1 && static_cast<int>(names.size()) != d) {
        throw SpecError("'" + field + "': give 1 or d = " + std::to_string(d) + " factors, got " +
                        std::to_string(names.size()));
      }
      s.expr = Expression::product(names, j.value("scale", 1.0));
      return s;
    }
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError("'" + field + "': " + e.what());
  }
  throw SpecError("'" + field +
                  "' must be a built-in name, \"from_exact\", {\"factors\": [...]} or {\"samples\": file}");
}

inline int positive_int(const json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > (1 << 24)) {
    throw SpecError("'" + key + "' must be a positive integer");
  }
  return j.get<int>();
}

inline double positive_number(const json& j, const std::string& key) {
  if (!j.is_number() || !(j.get<double>() > 0.0)) throw SpecError("'" + key + "' must be a positive number");
  return j.get<double>();
}

}  // namespace detail

namespace detail {
inline ProblemSpec parse_problem_spec_impl(const json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw SpecError("problem spec must be a JSON object");
  static const std::vector<std::string> known = {"name", "method", "basis", "closure", "bc",    "d",
                                                 "n",    "k",      "auto",  "A",       "f",     "gamma",
                                                 "exact", "outputs", "sweep", "seed"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw SpecError("unknown field '" + key + "'");
  }
  ProblemSpec p;
  p.source = j;
  p.name = j.value("name", std::string("problem"));
  if (!j.contains("method")) throw SpecError("'method' is required (\"fdm\" or \"spectral\")");
  const std::string method = j.at("method").get<std::string>();
  if (method == "fdm") {
    p.method = Method::fdm;
  } else if (method == "spectral") {
    p.method = Method::spectral;
  } else {
    throw SpecError("'method' must be \"fdm\" or \"spectral\", got \"" + method + "\"");
  }
  if (!j.contains("d")) throw SpecError("'d' (dimension) is required");
  p.d = detail::positive_int(j.at("d"), "d");
  if (p.d > 6) throw SpecError("'d' must be at most 6");

  try {
    if (p.method == Method::spectral) {
      p.basis = parse_basis(j.value("basis", std::string("chebyshev")));
      p.closure = parse_closure(j.value("closure", std::string("kronecker")));
      if (j.contains("bc")) throw SpecError("'bc' applies to fdm problems; spectral boundaries follow the basis");
    } else {
      p.bc = parse_fdm_bc(j.value("bc", std::string("periodic")));
      if (j.contains("basis") || j.contains("closure")) throw SpecError("'basis'/'closure' apply to spectral problems");
    }
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(e.what());
  }

  if (j.contains("n") && j.at("n").is_string() && j.at("n").get<std::string>() == "auto") {
    if (!j.contains("auto")) throw SpecError("\"n\": \"auto\" requires an 'auto' block");
  } else if (j.contains("n")) {
    p.n = detail::positive_int(j.at("n"), "n");
  }
  if (j.contains("auto")) {
    if (p.n) throw SpecError("give either an integer 'n' or \"n\": \"auto\" with an 'auto' block, not both");
    const json& a = j.at("auto");
    AutoN an;
    if (!a.contains("eps")) throw SpecError("'auto.eps' is required");
    an.eps = detail::positive_number(a.at("eps"), "auto.eps");
    if (p.method == Method::spectral) {
      if (!a.contains("g") || !a.contains("g_prime")) {
        throw SpecError("auto-n for spectral problems requires 'auto.g' and 'auto.g_prime'");
      }
      an.g = detail::positive_number(a.at("g"), "auto.g");
      an.g_prime = detail::positive_number(a.at("g_prime"), "auto.g_prime");
    } else {
      if (a.contains("deriv_bound")) an.deriv_bound = detail::positive_number(a.at("deriv_bound"), "auto.deriv_bound");
      if (a.contains("b")) an.b = detail::positive_number(a.at("b"), "auto.b");
    }
    p.auto_n = an;
  }
  if (j.contains("k")) {
    if (p.method != Method::fdm) throw SpecError("'k' applies to fdm problems only");
    p.k = detail::positive_int(j.at("k"), "k");
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    if (s.contains("n")) p.sweep_n = s.at("n").get<std::vector<int>>();
    if (s.contains("k")) p.sweep_k = s.at("k").get<std::vector<int>>();
  }
  const bool sweeping = !p.sweep_n.empty();
  if (!p.n && !p.auto_n && !sweeping) throw SpecError("'n' is required (an integer, or \"auto\" with an 'auto' block)");
  if (p.method == Method::fdm && !p.k && !p.auto_n && p.sweep_k.empty()) {
    throw SpecError("'k' (stencil half-width) is required for fdm problems unless n is \"auto\"");
  }

  if (j.contains("A")) {
    if (p.method == Method::fdm) throw SpecError("'A' is not used by fdm problems (Poisson only)");
    const auto rows = j.at("A").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != p.d) throw SpecError("'A' must be a d x d matrix");
    p.A.resize(p.d, p.d);
    for (int r = 0; r < p.d; ++r) {
      if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != p.d) throw SpecError("'A' must be a d x d matrix");
      for (int c = 0; c < p.d; ++c) p.A(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  } else {
    p.A = Eigen::MatrixXd::Identity(p.d, p.d);
  }
  if (p.method == Method::spectral) {
    try {
      const GddReport g = gdd_check(p.A);
      if (!g.accepted) {
        throw SpecError("'A' is not globally diagonally dominant (C = " + std::to_string(g.C) + " <= 0)");
      }
    } catch (const SpecError&) {
      throw;
    } catch (const std::exception& e) {
      throw SpecError(std::string("'A': ") + e.what());
    }
  }

  if (j.contains("exact")) {
    p.exact = detail::parse_field(j.at("exact"), "exact", p.d, base);
    if (p.exact->kind == FieldSpec::Kind::from_exact) throw SpecError("'exact' cannot be \"from_exact\"");
  }
  if (!j.contains("f")) throw SpecError("'f' (right-hand side) is required");
  p.f = detail::parse_field(j.at("f"), "f", p.d, base);
  if (j.contains("gamma")) p.gamma = detail::parse_field(j.at("gamma"), "gamma", p.d, base);

  auto needs_exact_expr = [&](const FieldSpec& s, const std::string& field) {
    if (s.kind != FieldSpec::Kind::from_exact) return;
    if (!p.exact) throw SpecError("'" + field + "' is \"from_exact\" but no 'exact' solution is given");
    if (p.exact->kind != FieldSpec::Kind::expression) {
      throw SpecError("'" + field + "' is \"from_exact\" but 'exact' is a sample table, not an expression");
    }
  };
  needs_exact_expr(p.f, "f");
  if (p.gamma) needs_exact_expr(*p.gamma, "gamma");

  const bool needs_gamma = p.method == Method::spectral || p.bc == FdmBc::dirichlet || p.bc == FdmBc::dirichlet_alt ||
                           p.bc == FdmBc::neumann;
  if (needs_gamma && !p.gamma) {
    throw SpecError(p.method == Method::spectral
                        ? "'gamma' (boundary data) is required for spectral problems"
                        : std::string("'gamma' (boundary data) is required for ") + to_string(p.bc) +
                              " boundaries; only \"zero\" is supported by the image construction");
  }
  if (p.method == Method::fdm && p.gamma && p.bc != FdmBc::periodic) {
    if (p.gamma->kind != FieldSpec::Kind::expression || !p.gamma->expr.is_zero()) {
      throw SpecError("fdm " + std::string(to_string(p.bc)) + " problems take homogeneous data: set \"gamma\": \"zero\"");
    }
  }
  if (p.method == Method::fdm && p.gamma && p.bc == FdmBc::periodic) {
    throw SpecError("'gamma' has no meaning for periodic fdm problems; remove it");
  }

  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    p.solution_file = o.value("solution", p.solution_file);
    p.metadata_file = o.value("metadata", p.metadata_file);
    if (o.contains("matrix")) p.matrix_file = o.at("matrix").get<std::string>();
  }
  return p;
}
}  // namespace detail

/**
 * Validates and converts a JSON description.  Relative sample paths are
 * resolved against `base`.  Throws SpecError naming the offending field.
 */
inline ProblemSpec parse_problem_spec(const json& j, const std::filesystem::path& base = ".") {
  try {
    return detail::parse_problem_spec_impl(j, base);
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed field: ") + e.what());
  }
}

inline ProblemSpec load_problem_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw SpecError("cannot open spec file '" + file.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("spec file '" + file.string() + "' is not valid JSON: " + e.what());
  }
  return parse_problem_spec(j, file.parent_path().empty() ? std::filesystem::path(".") : file.parent_path());
}

/// Built-in examples selectable with --example.
inline json builtin_example(const std::string& name) {
  if (name == "poisson-2d-cheb") {
    return {{"name", name},
            {"method", "spectral"},
            {"basis", "chebyshev"},
            {"d", 2},
            {"n", 16},
            {"exact", {{"factors", {"exp_sin_half_pi", "cos"}}}},
            {"f", "from_exact"},
            {"gamma", "from_exact"}};
  }
  if (name == "poisson-2d-cheb-auto") {
    return {{"name", name},
            {"method", "spectral"},
            {"basis", "chebyshev"},
            {"d", 2},
            {"n", "auto"},
            {"auto", {{"eps", 1e-6}, {"g", 1.0}, {"g_prime", 1.0}}},
            {"exact", {{"factors", {"exp_sin_half_pi", "cos"}}}},
            {"f", "from_exact"},
            {"gamma", "from_exact"}};
  }
  if (name == "poisson-1d-fourier") {
    return {{"name", name},   {"method", "spectral"}, {"basis", "fourier"},  {"d", 1},
            {"n", 24},        {"exact", "exp_sin_pi"}, {"f", "from_exact"}, {"gamma", "from_exact"}};
  }
  if (name == "elliptic-2d-cheb") {
    return {{"name", name},
            {"method", "spectral"},
            {"basis", "chebyshev"},
            {"d", 2},
            {"n", 20},
            {"A", {{1.0, 0.2}, {0.2, 1.5}}},
            {"exact", {{"factors", {"exp_sin_half_pi", "cos"}}}},
            {"f", "from_exact"},
            {"gamma", "from_exact"}};
  }
  if (name == "fdm-2d-periodic") {
    return {{"name", name}, {"method", "fdm"}, {"bc", "periodic"}, {"d", 2}, {"n", 32}, {"k", 3},
            {"exact", {{"factors", {"sin", "cos"}}}}, {"f", "from_exact"}};
  }
  if (name == "fdm-2d-dirichlet") {
    return {{"name", name}, {"method", "fdm"}, {"bc", "dirichlet"}, {"d", 2}, {"n", 32}, {"k", 3},
            {"exact", "sin"}, {"f", "from_exact"}, {"gamma", "zero"}};
  }
  throw SpecError("unknown built-in example '" + name +
                  "' (known: poisson-2d-cheb, poisson-2d-cheb-auto, poisson-1d-fourier, elliptic-2d-cheb, "
                  "fdm-2d-periodic, fdm-2d-dirichlet)");
}

/// Point function for a field; "from_exact" resolves through the operator A.
inline PointFn field_function(const FieldSpec& s, const ProblemSpec& p, bool as_rhs) {
  switch (s.kind) {
    case FieldSpec::Kind::expression: {
      Expression e = s.expr;
      return [e](std::span<const double> x) { return e(x); };
    }
    case FieldSpec::Kind::samples: {
      auto t = s.samples;
      return [t](std::span<const double> x) { return (*t)(x); };
    }
    case FieldSpec::Kind::from_exact: {
      Expression u = p.exact->expr;
      if (!as_rhs) return [u](std::span<const double> x) { return u(x); };
      Eigen::MatrixXd A = p.A;
      return [u, A](std::span<const double> x) {
        double acc = 0.0;
        for (int i = 0; i < A.rows(); ++i) {
          for (int j = 0; j < A.cols(); ++j) {
            if (A(i, j) != 0.0) acc += A(i, j) * u.second(x, i, j);
          }
        }
        return acc;
      };
    }
  }
  throw SpecError("unhandled field kind");
}

}  // namespace pdelin::cli
