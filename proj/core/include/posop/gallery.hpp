#ifndef POSOP_GALLERY_HPP
#define POSOP_GALLERY_HPP

// Named, parameterized worked examples with their expected outcomes.
//
//   weakly_expanding            C[-1,1] grid counterexample with eigenvalue -1
//   nagler                      finite-rank sum of e_j ⊗ α_j with <α_j, e> = 1
//   diagonal_strip              doubly stochastic strip kernel on L^1[0,1]
//   sequence_positive_diagonal  banded stochastic matrix, positive diagonal
//   irreducible_one_diagonal    irreducible stochastic, one positive diagonal
//   partition                   circular partition operator (blocks 0-indexed)

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "posop/operators.hpp"

namespace posop {

using Overrides = std::map<std::string, std::string>;

struct AssertionOutcome {
  std::string name;
  bool passed = false;
  nlohmann::json measured;
  double tolerance = 0.0;
};

struct Assertion {
  std::string name;
  double tolerance = 0.0;
  std::function<AssertionOutcome()> check;
};

struct Scenario {
  std::string name;
  nlohmann::json parameters;
  Operator op;
  std::vector<Assertion> expected;
};

struct ScenarioRun {
  std::string name;
  nlohmann::json parameters;
  std::vector<AssertionOutcome> outcomes;
  bool all_passed = false;
};

std::vector<std::string> scenario_names();
std::string scenario_description(const std::string& name);

/// Throws UnknownScenario for an unknown name and InvalidArgument for an
/// unknown or malformed override.
Scenario build_scenario(const std::string& name, const Overrides& overrides = {});

ScenarioRun run_scenario(const Scenario& scenario);

nlohmann::json scenario_run_to_json(const ScenarioRun& run);

/// Parses "key=value" tokens.
Overrides parse_overrides(const std::vector<std::string>& tokens);

/// Grid closure of a mask: adds the neighbours i ± 1 of every index, which
/// is the closed support of a piecewise-linear interpolant on the grid.
SupportMask grid_closure(const SupportMask& mask);

}  // namespace posop

#endif  // POSOP_GALLERY_HPP
