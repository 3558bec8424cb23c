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

#ifndef HISTIF_MILP_HPP_
#define HISTIF_MILP_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "histif/expr.hpp"
#include "histif/vc.hpp"

namespace histif {

enum class RowSense : uint8_t { kLe, kGe, kEq, kLt, kGt };

struct LinVar {
  std::string name;
  bool boolean = false;
  int64_t lo = 0, hi = 0;
};

struct LinRow {
  std::vector<std::pair<int, int64_t>> terms;  // (variable, coefficient)
  RowSense sense = RowSense::kLe;
  int64_t rhs = 0;
};

// Scaled value of a symbolic variable: coef * var + konst.
struct SymbolEncoding {
  int var = -1;
  int64_t coef = 0;
  int64_t konst = 0;
  Type type = Type::kInteger;
};

struct MILPProgram {
  std::vector<LinVar> vars;
  std::vector<LinRow> rows;
  // Numbers are multiplied by `scale` (1, or 10^s when decimals occur).
  int64_t scale = 1;
  // Sorted text constants; the i-th gets code (i + 1) * text_gap and the
  // codes in between stand for unseen strings.
  std::vector<std::string> dictionary;
  int64_t text_gap = 1;
  std::map<std::string, SymbolEncoding> symbols;
  int root = -1;  // boolean of the whole formula when not flattened

  std::string to_lp() const;
  // Row activity check with exact integer arithmetic.
  bool satisfied_by(const std::vector<int64_t>& x) const;
  // Values of the symbolic variables under a solution.
  Assignment decode(const std::vector<int64_t>& x) const;
};

struct CompileOptions {
  // Lower bound for every big-M constant, in unscaled units.
  int64_t big_m_floor = 0;
  // Assert top-level conjuncts directly and inline top-level definitions
  // x = e. When false the formula is compiled as one boolean fixed to 1.
  bool flatten_top_level = true;
  // Extra text values for the dictionary (e.g. data values).
  std::vector<std::string> text_values;
  // Explicit bounds for variables, intersected with derived ones.
  std::map<std::string, std::pair<Value, Value>> bounds;
};

// Throws NotApplicable for constructs outside the linear fragment
// (division, products of variables, Null constants, IsNull over nullable
// terms) and for numeric variables without a derivable bound.
MILPProgram compile(const Cond& f, const VarTable& vars, const CompileOptions& opts = {});

}  // namespace histif

#endif  // HISTIF_MILP_HPP_
