// harmcoc <task> [spec.json]: run one computation and print a JSON report.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "harmcoc/problem.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw harmcoc::Error(harmcoc::ErrorKind::Parse, "cli/read", "CannotOpen", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const harmcoc::Json& report, const std::string& output) {
  const std::string text = report.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output);
    out << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cocycles, harmonic cocycles and affine actions for unitary representations"};
  std::string task;
  std::string spec_path;
  std::string output;
  double tol_rank = 0.0, tol_res = 0.0;
  std::uint64_t seed = 0;
  int trials = 0;
  bool emit_bases = false;

  app.add_option("task", task, "z1, har, project, irreducible, commutant, vndim, exists, wreath, selftest")
      ->required()
      ->check(CLI::IsMember({"z1", "har", "project", "irreducible", "commutant", "vndim", "exists", "wreath",
                             "selftest"}));
  app.add_option("spec", spec_path, "problem spec (JSON); '-' reads standard input");
  auto* rank_opt = app.add_option("--tol-rank", tol_rank, "relative singular value cut-off (default 1e-9)");
  auto* res_opt = app.add_option("--tol-res", tol_res, "residual tolerance (default 1e-8)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* trials_opt = app.add_option("--trials", trials, "sampler trials");
  app.add_flag("--emit-bases", emit_bases, "include bases and witnesses in the report");
  app.add_option("--output", output, "write the report here instead of standard output");
  CLI11_PARSE(app, argc, argv);

  harmcoc::RunOptions opts;
  if (*rank_opt) opts.tol_rank = tol_rank;
  if (*res_opt) opts.tol_res = tol_res;
  if (*seed_opt) opts.seed = seed;
  if (*trials_opt) opts.trials = trials;
  opts.emit_bases = emit_bases;

  try {
    harmcoc::Json input = harmcoc::Json::object();
    if (!spec_path.empty() || task != "selftest") {
      try {
        input = harmcoc::Json::parse(read_input(spec_path));
      } catch (const harmcoc::Json::parse_error& e) {
        throw harmcoc::Error(harmcoc::ErrorKind::Parse, "cli/read", "MalformedJson", e.what());
      }
    }
    harmcoc::ProblemSpec spec;
    try {
      spec = harmcoc::parse_problem(input, opts);
    } catch (const harmcoc::Json::exception& e) {
      throw harmcoc::Error(harmcoc::ErrorKind::Parse, "cli/parse_problem", "BadField", e.what());
    }
    harmcoc::Json report = harmcoc::run_task(task, spec, opts);
    emit(report, output);
    if (task == "selftest" && !report.at("passed").get<bool>()) return 1;
    return 0;
  } catch (const harmcoc::Error& e) {
    emit(harmcoc::error_report(e), output);
    std::cerr << e.what() << "\n";
    return harmcoc::exit_code_for(e);
  }
}
