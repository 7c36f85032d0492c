#pragma once

// JSON problem specs and reports for the command-line driver.
//
// Input: {"group": {...}, "rep": {gen: matrix}, "measure": [{"element": word, "weight": w}],
//         "cocycle": {gen: vector}, "tolerances": {"rank": r, "residual": r},
//         "seed": n, "trials": n, "wreath": {"base_group", "rep", "mu1", "mu2_weight_t"}}.
// Complex entries are [re, im] pairs or plain reals; matrices are row-major
// lists of rows.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "harmcoc/cocycles.hpp"
#include "harmcoc/errors.hpp"
#include "harmcoc/groups.hpp"
#include "harmcoc/linalg.hpp"
#include "harmcoc/reps.hpp"

namespace harmcoc {

using Json = nlohmann::json;

struct WreathSpec {
  GroupModel base;
  UnitaryRep rep;
  FinMeasure mu1;
  double lamp_weight = 0.5;
};

struct ProblemSpec {
  std::optional<GroupModel> group;
  std::optional<UnitaryRep> rep;
  std::optional<FinMeasure> measure;  // uniform on S u S^-1 when omitted
  std::optional<Cocycle> cocycle;
  std::optional<WreathSpec> wreath;
  Tolerances tol;
  std::uint64_t seed = 1;
  int trials = 50;
};

/// Command-line values take precedence over the file.
struct RunOptions {
  std::optional<double> tol_rank;
  std::optional<double> tol_res;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  bool emit_bases = false;
};

GroupModel parse_group(const Json& j);
UnitaryRep parse_rep(const Json& j, const GroupModel& group);
FinMeasure parse_measure(const Json& j, const GroupModel& group);
Cocycle parse_cocycle(const Json& j, const GroupModel& group, Index dim);
ProblemSpec parse_problem(const Json& j, const RunOptions& opts = {});

Json to_json(const CMatrix& m);
Json to_json(const CVector& v);
Json to_json(const Rational& r);
Json to_json(const Cocycle& b, const GroupModel& group);

/// Tasks: z1, har, project, irreducible, commutant, vndim, exists, wreath, selftest.
Json run_task(std::string_view task, const ProblemSpec& spec, const RunOptions& opts = {});

/// The invariant suite behind the selftest task.
Json run_selftest(std::uint64_t seed, int trials, const Tolerances& tol = {});

/// 0 success, 2 parse or validation error, 3 numerical refusal.
int exit_code_for(const Error& e);
Json error_report(const Error& e);

}  // namespace harmcoc
