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

#ifndef HISTIF_VC_HPP_
#define HISTIF_VC_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "histif/statement.hpp"

namespace histif {

// Symbolic variables appear in expressions as attribute references whose
// name is the variable name.
std::string input_var(const std::string& attribute);  // x_<A>

struct VarInfo {
  Type type = Type::kInteger;
  bool nullable = false;
};
using VarTable = std::map<std::string, VarInfo>;

struct VCTuple {
  std::vector<Expr> values;
  Cond local = true_c();
};

struct Definition {
  std::string var;
  Expr expr;
};

// Single-relation VC-table plus global condition. The global condition is
// the conjunction of the definitions (var = expr) and `extra`.
struct VCDatabase {
  Schema schema;
  std::vector<VCTuple> tuples;
  std::vector<Definition> defs;
  std::vector<Cond> extra;
  VarTable vars;
  std::string side = "H";
  int step = 0;

  // Conjunct for one definition; null-safe when the variable is nullable.
  Cond definition(const Definition& d) const;
  Cond global() const;
  std::string dump() const;
};

// One tuple of version-0 variables, global condition True.
VCDatabase initial_vcdb(const Schema& s, std::string side = "H",
                        const std::set<std::string>& nullable = {});

// Symbolic execution of u; `step` names the fresh variables (default: the
// next step). Throws NotApplicable for InsertQuery.
VCDatabase sym_apply(const Statement& u, const VCDatabase& vdb, int step = -1);
VCDatabase sym_run(const History& h, VCDatabase vdb);

using Assignment = std::map<std::string, Value>;

// Concrete relation for an assignment of the free variables; defined
// variables are computed (and checked when also assigned). nullopt when the
// global condition is false.
std::optional<Relation> instantiate(const VCDatabase& vdb, const Assignment& a);

// All worlds for the given finite domains of the free variables.
std::vector<Relation> worlds(const VCDatabase& vdb,
                             const std::map<std::string, std::vector<Value>>& domains);
std::vector<std::string> free_vars(const VCDatabase& vdb);

// Evaluation over named variables.
Value eval_sym(const Expr& e, const Assignment& a);
bool eval_sym(const Cond& c, const Assignment& a);

struct CompressOptions {
  int groups = 8;
  std::string group_by;  // empty: text attribute with fewest distinct values
  size_t max_members = 16;
};

// Over-approximation chi_D of a relation as a disjunction of per-group
// range and membership constraints on the version-0 variables.
Cond compress(const Relation& r, const CompressOptions& opts = {});
std::string default_group_attribute(const Relation& r);

}  // namespace histif

#endif  // HISTIF_VC_HPP_
