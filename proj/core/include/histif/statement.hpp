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

#ifndef HISTIF_STATEMENT_HPP_
#define HISTIF_STATEMENT_HPP_

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "histif/expr.hpp"
#include "histif/query.hpp"
#include "histif/relation.hpp"

namespace histif {

enum class StmtKind : uint8_t { kUpdate, kDelete, kInsertTuple, kInsertQuery, kNoOp };

std::string_view kind_name(StmtKind k);

struct Statement {
  StmtKind kind = StmtKind::kNoOp;
  std::string relation;
  // kUpdate: assignments as written; unmentioned attributes keep their value.
  std::vector<std::pair<std::string, Expr>> sets;
  Cond where = true_c();  // kUpdate, kDelete
  Tuple values;           // kInsertTuple
  Query query;            // kInsertQuery

  static Statement update(std::string rel,
                          std::vector<std::pair<std::string, Expr>> sets,
                          Cond where = true_c());
  static Statement delete_(std::string rel, Cond where = true_c());
  static Statement insert_tuple(std::string rel, Tuple values);
  static Statement insert_query(std::string rel, Query q);
  static Statement noop(std::string rel);

  // Full-arity Set list; identity for attributes not assigned.
  std::vector<Expr> set_list(const Schema& s) const;
  // Attributes assigned something other than themselves.
  std::set<std::string> written(const Schema& s) const;
  // Selection condition: WHERE for updates and deletes, False for NoOp.
  Cond condition() const;
  // Relations whose content the statement depends on.
  std::set<std::string> reads() const;
};

bool equal(const Statement& a, const Statement& b);
// DSL text, parseable by parse_statement.
std::string to_string(const Statement& u);
bool is_tuple_independent(const Statement& u);

// Checks relation, attributes, arity and expression types against db.
void validate(const Statement& u, const Database& db);

using History = std::vector<Statement>;

// In-place execution with set semantics.
void execute(const Statement& u, Database& db);
Database apply_statement(const Statement& u, Database db);
// D_n; calls `observer(i, D_i)` after each statement when given.
Database run_history(const History& h, Database db,
                     const std::function<void(size_t, const Database&)>& observer = {});
std::set<std::string> touched_relations(const History& h);

enum class ModKind : uint8_t { kReplace, kInsert, kDelete };

struct Modification {
  ModKind kind = ModKind::kReplace;
  size_t pos = 1;  // 1-based
  Statement stmt;  // unused for kDelete

  static Modification replace(size_t pos, Statement s);
  static Modification insert(size_t pos, Statement s);
  static Modification remove(size_t pos);
};

// H[M] with positions applied one after another.
History apply_mods(const History& h, const std::vector<Modification>& mods);

struct NormalizedHistories {
  History h;   // padded original
  History hm;  // padded modified, same length
  // 1-based padded positions whose statements differ in kind or content.
  std::vector<size_t> mods;
  // For each padded slot, the 1-based position of the original statement
  // it holds, or 0 for padding.
  std::vector<size_t> orig;

  // Number of original statements strictly before padded slot `pos`.
  size_t original_prefix(size_t pos) const;
};

// Pads both histories with NoOps so that every modification becomes a
// same-kind, same-relation replacement. Throws RangeError on bad positions.
NormalizedHistories normalize_mods(const History& h,
                                   const std::vector<Modification>& mods);

}  // namespace histif

#endif  // HISTIF_STATEMENT_HPP_
