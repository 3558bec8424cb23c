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

#ifndef HISTIF_DATA_SLICING_HPP_
#define HISTIF_DATA_SLICING_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "histif/statement.hpp"

namespace histif {

// Relation -> condition over that relation's attributes. Missing entries
// mean False.
using CondMap = std::map<std::string, Cond>;

Cond lookup(const CondMap& m, const std::string& rel);

struct SlicingCondition {
  CondMap h;   // filter for the original history's input
  CondMap hm;  // filter for the modified history's input
  // Relations whose condition exceeded the node budget and became True.
  std::set<std::string> degraded;
};

struct DataSliceOptions {
  uint32_t node_budget = 10000;
};

// Condition of one normalized modification pair (u in H, u2 in H[M]) at its
// position, before pushing.
SlicingCondition mod_condition(const Statement& u, const Statement& u2, const Database& db);

// Condition on the tuples before `u` such that the tuples after `u`
// satisfying `c` all derive from them.
CondMap push_through_statement(const CondMap& c, const Statement& u, const Database& db,
                               const DataSliceOptions& opts = {},
                               std::set<std::string>* degraded = nullptr);
Cond push_through_statement(const Cond& c, const Statement& u, const Database& db);

// Pushes a condition on the output of `q` to its base relation `rel`.
// nullopt when `q` does not read `rel`. Throws NotApplicable on operators
// outside the supported fragment.
std::optional<Cond> qpush(const Cond& c, const Query& q, const std::string& rel,
                          const Database& db);

// Fully pushed conditions for normalized histories of equal length;
// `mods` holds 1-based positions.
SlicingCondition data_slice(const History& h, const History& hm,
                            const std::vector<size_t>& mods, const Database& db,
                            const DataSliceOptions& opts = {});

}  // namespace histif

#endif  // HISTIF_DATA_SLICING_HPP_
