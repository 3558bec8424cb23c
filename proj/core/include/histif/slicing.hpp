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

#ifndef HISTIF_SLICING_HPP_
#define HISTIF_SLICING_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "histif/json_codec.hpp"
#include "histif/solver.hpp"
#include "histif/vc.hpp"

namespace histif {

// kKeyed needs a preserved key on the relation; kStrict compares each
// side with its restriction and is sound without one.
enum class SliceMode : uint8_t { kKeyed, kStrict };

struct SliceOptions {
  SliceMode mode = SliceMode::kKeyed;
  CompileOptions compile;
  SolveOptions solve;
};

// Per-relation input of the slice test.
struct SliceContext {
  Schema schema;
  Cond chi = true_c();               // compression of the start state
  std::set<std::string> nullable;    // attributes that may hold Null
};
using SliceContexts = std::map<std::string, SliceContext>;

struct SliceTest {
  Cond premise = true_c();     // chi and the definitions it needs
  Cond conclusion = true_c();  // equality of deltas, simplified
  VarTable vars;

  Cond body() const;     // premise -> conclusion
  Cond negated() const;  // premise and not conclusion
};

// Symbolic slice test for relation ctx.schema.relation(). `keep` holds
// sorted 1-based positions into the equal-length histories h and hm.
// Statements on other relations and constant inserts are skipped; throws
// NotApplicable on INSERT ... SELECT.
SliceTest build_slice_test(const History& h, const History& hm, const std::vector<size_t>& keep,
                           const SliceContext& ctx, SliceMode mode = SliceMode::kKeyed);

enum class SliceVerdict : uint8_t { kIsSlice, kNotProven };

struct SliceCheck {
  SliceVerdict verdict = SliceVerdict::kNotProven;
  bool solver_called = false;
  SolveStatus status = SolveStatus::kInfeasible;
  uint64_t nodes = 0;
  std::string note;
  Assignment witness;  // counterexample world when feasible
};

SliceCheck check_slice(const SliceTest& t, const SliceOptions& opts = {});

struct SliceCall {
  size_t position = 0;
  SliceCheck check;
};

struct SliceResult {
  std::string algorithm;
  std::vector<size_t> kept, removed;
  std::vector<SliceCall> calls;
  size_t solver_calls = 0;
  bool unknown = false;  // some call ended with an undecided solver

  Json to_json() const;
};

// Removes positions in ascending order while the slice test holds;
// positions in `mods` are never removed.
SliceResult greedy_slice(const History& h, const History& hm, const std::vector<size_t>& mods,
                         const SliceContexts& ctx, const SliceOptions& opts = {});

// Keeps position i > mod when some tuple can be selected both by the
// modified pair at `mod` and by statement i on either side. Statements on
// other relations and constant inserts are dropped; positions before `mod`
// are kept.
SliceResult single_mod_dependency(const History& h, const History& hm, size_t mod,
                                  const SliceContexts& ctx, const SliceOptions& opts = {});

}  // namespace histif

#endif  // HISTIF_SLICING_HPP_
