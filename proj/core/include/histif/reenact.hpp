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

#ifndef HISTIF_REENACT_HPP_
#define HISTIF_REENACT_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "histif/query.hpp"
#include "histif/statement.hpp"

namespace histif {

using QueryMap = std::map<std::string, Query>;

// Reenactment query of a single statement over `input` (default: the base
// relation of its target).
Query reenact_statement(const Statement& u, const Schema& s, Query input = nullptr);

// Per-relation reenactment of a history. `inputs` replaces base relations
// (e.g. by filtered or singleton inputs); relations that are neither in
// `inputs` nor touched map to their base relation. Only relations that
// appear in `inputs` or are touched by `h` are returned.
QueryMap reenact_history(const History& h, const Database& db, const QueryMap& inputs = {});
Query reenact_history(const History& h, const std::string& rel, const Database& db);

// Replaces every base relation reference found in `m`.
Query replace_bases(const Query& q, const QueryMap& m);

// History with constant inserts pulled out. An InsertTuple is split off
// when no later InsertQuery reads its relation; it is replaced by a NoOp in
// `main`.
struct SplitHistory {
  History main;
  std::vector<size_t> inserts;  // 0-based positions in the original
  History original;
};
SplitHistory split_inserts(const History& h);

// Queries of the insert branches for `rel`: the suffix after each split
// insert reenacted over the inserted tuple. `inputs` are used for the
// relations the suffix reads besides `rel`. Returns nullptr when empty.
Query insert_branch(const SplitHistory& s, const std::string& rel, const Database& db,
                    const QueryMap& inputs = {});
// (main branch, insert branch) for one relation.
std::pair<Query, Query> split_insert_queries(const History& h, const std::string& rel,
                                             const Database& db);

// Signed delta of one relation.
struct SignedDelta {
  Schema schema;
  TupleSet minus;  // only in the first state
  TupleSet plus;   // only in the second state

  bool empty() const { return minus.empty() && plus.empty(); }
  SignedDelta negate() const { return {schema, plus, minus}; }
  friend bool operator==(const SignedDelta& a, const SignedDelta& b) {
    return a.minus == b.minus && a.plus == b.plus;
  }
};

SignedDelta delta(const Relation& cur, const Relation& mod);
// Delta as an algebra query: a leading `sign` column ('-' or '+') followed by
// the relation's attributes.
Query delta_query(const Query& cur, const Query& mod, const Schema& s);
SignedDelta delta_from_signed(const Relation& signed_rows, const Schema& s);

// Per-relation deltas; relations with empty deltas may be omitted.
using DeltaSet = std::map<std::string, SignedDelta>;

// Byte-stable CSV: per relation (sorted by name) a `# name` line, a
// `sign,attrs...` header and the rows, '-' before '+', then by rendered
// row. Relations with an empty delta are skipped; an empty set renders as
// an empty string.
std::string delta_csv(const DeltaSet& d);
// One JSON object per line: {"relation", "sign", "row": {...}} in CSV order.
std::string delta_jsonl(const DeltaSet& d);
size_t delta_size(const DeltaSet& d);

}  // namespace histif

#endif  // HISTIF_REENACT_HPP_
