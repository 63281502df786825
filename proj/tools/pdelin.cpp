// Command-line front end: appendix reproduction, bound verification, solves and sweeps.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "pdelin/cli/commands.hpp"

namespace {

using namespace pdelin::cli;

std::optional<Format> optional_format(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_format(s);
}

ProblemSpec spec_from(const std::string& spec_file, const std::string& example) {
  if (!spec_file.empty() && !example.empty()) throw SpecError("give --spec or --example, not both");
  if (!example.empty()) return parse_problem_spec(builtin_example(example));
  if (spec_file.empty()) throw SpecError("a problem is required: --spec <file.json> or --example <name>");
  return load_problem_spec(spec_file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdelin: linear systems for Poisson and elliptic PDEs (finite-difference and spectral)"};
  app.require_subcommand(1);

  std::string golden, out_dir, suite = "all", spec_file, example, format;
  std::uint64_t seed = 20240611;

  auto* repro = app.add_subcommand("reproduce-appendix-a", "assemble the 2D Poisson worked example and diff against references");
  repro->add_option("--golden", golden, "JSON file replacing reference matrices by name");
  repro->add_option("--out", out_dir, "directory for coordinate-format dumps of the assembled matrices");

  auto* verify = app.add_subcommand("verify-bounds", "check condition-number, singular-value and stencil bounds");
  verify->add_option("--suite", suite, "fdm_kappa | svd_fourier | svd_chebyshev | kappa_poisson | kappa_general | stencil | all");
  verify->add_option("--seed", seed, "seed for randomized suites");
  verify->add_option("--format", format, "csv | json (default: table)");
  verify->add_option("--out", out_dir, "write the report into this directory");

  auto* solve = app.add_subcommand("solve", "assemble, solve and report one problem");
  solve->add_option("--spec", spec_file, "problem description (JSON)");
  solve->add_option("--example", example, "built-in problem, e.g. poisson-2d-cheb");
  solve->add_option("--out", out_dir, "output directory (default: out)");
  solve->add_option("--format", format, "solution table format: csv | json (default csv)");
  solve->add_option("--seed", seed, "recorded in the metadata; solves are deterministic");

  auto* sweep = app.add_subcommand("sweep", "convergence sweep over the spec's 'sweep' lists");
  sweep->add_option("--spec", spec_file, "problem description (JSON) with a 'sweep' block");
  sweep->add_option("--example", example, "built-in problem");
  sweep->add_option("--out", out_dir, "output directory (default: out)");
  sweep->add_option("--format", format, "csv | json (default csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitSpecError;
  }

  try {
    if (*repro) {
      return cmd_reproduce_appendix_a(golden.empty() ? std::nullopt : std::optional<std::filesystem::path>(golden),
                                      out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir),
                                      std::cout);
    }
    if (*verify) {
      return cmd_verify_bounds(suite, seed, optional_format(format),
                               out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir), std::cout);
    }
    const ProblemSpec p = spec_from(spec_file, example);
    const Format f = format.empty() ? Format::csv : parse_format(format);
    const std::filesystem::path dir = out_dir.empty() ? "out" : out_dir;
    if (*solve) return cmd_solve(p, dir, f, seed, std::cout);
    return cmd_sweep(p, dir, f, std::cout);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSpecError;
  } catch (const pdelin::NonConvergence& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (const pdelin::RankDeficient& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (const pdelin::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSpecError;
  }
}
