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

#ifndef HISTIF_ENGINE_HPP_
#define HISTIF_ENGINE_HPP_

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "histif/data_slicing.hpp"
#include "histif/json_codec.hpp"
#include "histif/reenact.hpp"
#include "histif/slicing.hpp"
#include "histif/store.hpp"
#include "histif/vc.hpp"

namespace histif {

enum class Method : uint8_t { kNaive, kR, kRDs, kRPs, kRPsDs };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view s);
const std::vector<Method>& all_methods();
bool uses_program_slicing(Method m);
bool uses_data_slicing(Method m);

struct WhatIfOptions {
  Method method = Method::kRPsDs;
  CompressOptions compress;
  int64_t big_m_floor = 0;
  uint64_t solver_budget = 1000000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  DataSliceOptions data_slicing;
};

// Whether relation `rel` has an attribute that identifies tuples across
// both suffix histories: unique and non-null in `start`, never assigned,
// inserted values fresh and distinct, and no INSERT ... SELECT anywhere.
struct KeyGuard {
  bool ok = false;
  std::string key;
  std::string reason;
};
KeyGuard check_key_guard(const Database& start, const std::string& rel, const History& h,
                         const History& hm);

struct PhaseTimes {
  double normalize = 0, reconstruct = 0, program_slicing = 0, data_slicing = 0, execution = 0,
         delta = 0, total = 0;
};

struct RunReport {
  Method method = Method::kRPsDs;
  size_t history_length = 0;
  std::vector<size_t> modified;  // padded positions
  size_t suffix_start = 0;       // first modified padded position (1-based), 0 if none
  size_t start_version = 0;      // reconstructed version
  std::map<std::string, KeyGuard> guards;
  std::optional<SliceResult> slice;
  std::string slice_mode;
  std::vector<size_t> kept_positions;  // original history positions kept by slicing
  std::optional<SlicingCondition> data_slice;
  std::vector<std::string> degradations;
  bool solver_unknown = false;
  size_t delta_rows = 0;
  PhaseTimes ms;

  Json to_json() const;
};

struct WhatIfResult {
  DeltaSet delta;
  RunReport report;
};

// Answers the what-if query (store.log(), store.base(), mods).
WhatIfResult answer(const VersionedStore& store, const std::vector<Modification>& mods,
                    const WhatIfOptions& opts = {});
WhatIfResult answer_naive(const VersionedStore& store, const std::vector<Modification>& mods,
                          const WhatIfOptions& opts = {});
WhatIfResult answer_optimized(const VersionedStore& store,
                              const std::vector<Modification>& mods,
                              const WhatIfOptions& opts = {});

}  // namespace histif

#endif  // HISTIF_ENGINE_HPP_
