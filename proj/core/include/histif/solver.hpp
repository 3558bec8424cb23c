// Copyright 2026 The histif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HISTIF_SOLVER_HPP_
#define HISTIF_SOLVER_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "histif/milp.hpp"

namespace histif {

enum class SolveStatus : uint8_t { kFeasible, kInfeasible, kUnknown };
std::string_view status_name(SolveStatus s);

struct SolveOptions {
  uint64_t node_budget = 1000000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kUnknown;
  std::vector<int64_t> values;  // a verified solution when feasible
  uint64_t nodes = 0;
};

// Exact feasibility check by depth-first branch and bound. Every node runs
// bound propagation and then a rational simplex; integral LP solutions are
// re-checked row by row before being reported.
SolveResult solve(const MILPProgram& p, const SolveOptions& opts = {});

struct SatResult {
  SolveStatus status = SolveStatus::kUnknown;
  Assignment witness;  // satisfies f when feasible
  uint64_t nodes = 0;
  std::string note;    // why the result is unknown
};

// Compiles and solves f. NotApplicable from the compiler becomes kUnknown.
SatResult check_sat(const Cond& f, const VarTable& vars, const CompileOptions& copts = {},
                    const SolveOptions& sopts = {});

// Exhaustive search over finite domains; throws NotApplicable above 10^6
// combinations.
std::optional<Assignment> brute_force_sat(
    const Cond& f, const std::map<std::string, std::vector<Value>>& domains);

}  // namespace histif

#endif  // HISTIF_SOLVER_HPP_
