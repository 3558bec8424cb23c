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

#ifndef HISTIF_WORKLOAD_HPP_
#define HISTIF_WORKLOAD_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "histif/json_codec.hpp"
#include "histif/statement.hpp"

namespace histif {

struct WorkloadSpec {
  size_t updates = 10;  // U: history length
  size_t mods = 1;      // M: the first M updates are modified
  int dependent = 10;   // D: % of other statements overlapping a modified one
  int tuples = 10;      // T: % of the relation selected per statement
  int inserts = 0;      // I: % of statements that are inserts
  int deletes = 0;      // X: % of statements that are deletes
  size_t size = 1000;
  uint64_t seed = 42;
};

// Unknown keys are rejected; missing keys keep their defaults.
WorkloadSpec workload_spec_from_json(const Json& j);
Json to_json(const WorkloadSpec& s);

struct Workload {
  Database db;  // relation R(id, category, a, b, c, price)
  History history;
  std::vector<Modification> mods;
  std::vector<size_t> dependent_positions;  // 1-based
  size_t width = 0;                         // ids selected per range
};

// Throws RangeError for inconsistent percentages or when the id space
// cannot hold the modified and independent regions.
Workload generate_workload(const WorkloadSpec& spec);

}  // namespace histif

#endif  // HISTIF_WORKLOAD_HPP_
