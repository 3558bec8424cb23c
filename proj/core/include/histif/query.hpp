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

#ifndef HISTIF_QUERY_HPP_
#define HISTIF_QUERY_HPP_

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "histif/expr.hpp"
#include "histif/relation.hpp"

namespace histif {

enum class QueryKind : uint8_t {
  kBase,
  kSingleton,
  kSelect,
  kProject,
  kUnion,
  kDifference,
  kJoin,  // cross product; equi-joins are a selection on top
};

struct QueryNode;
using Query = std::shared_ptr<const QueryNode>;

struct ProjItem {
  std::string name;
  Expr expr;
  // Output type; kNull means "infer from the expression".
  Type type = Type::kNull;
};

struct QueryNode {
  QueryKind kind;
  std::string name;                 // kBase
  Tuple tuple;                      // kSingleton
  std::vector<std::string> columns;  // kSingleton output names (optional)
  Cond cond;                        // kSelect
  std::vector<ProjItem> items;      // kProject
  Query left, right;                // unary operators use `left`
};

Query base(std::string name);
Query singleton(Tuple t, std::vector<std::string> columns = {});
Query select(Cond c, Query in);
Query project(std::vector<ProjItem> items, Query in);
Query union_(Query l, Query r);
Query difference(Query l, Query r);
Query join(Query l, Query r);

// Output schema; the relation name of the result is the leftmost base
// relation, or "" for singletons. Throws SchemaError on mismatches.
Schema output_schema(const Query& q, const Database& db);
std::set<std::string> base_relations(const Query& q);
bool equal(const Query& a, const Query& b);
// Algebra notation, e.g. PROJECT[A, B](SELECT[A > 1](R)).
std::string to_string(const Query& q);

using TupleSink = std::function<void(const Tuple&)>;
// Streams result tuples; duplicates may be emitted.
void stream_query(const Query& q, const Database& db, const TupleSink& sink);
// Set-semantics result.
Relation eval_query(const Query& q, const Database& db);

}  // namespace histif

#endif  // HISTIF_QUERY_HPP_
