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

#ifndef HISTIF_EXPR_HPP_
#define HISTIF_EXPR_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "histif/value.hpp"

namespace histif {

struct ExprNode;
struct CondNode;
// Immutable, shared AST handles. Never null once built.
using Expr = std::shared_ptr<const ExprNode>;
using Cond = std::shared_ptr<const CondNode>;

enum class ExprKind : uint8_t { kAttr, kConst, kArith, kCase };
enum class CondKind : uint8_t { kCmp, kAnd, kOr, kNot, kIsNull, kTrue, kFalse };
enum class CmpOp : uint8_t { kEq, kNe, kLt, kLe, kGt, kGe };

std::string_view cmp_symbol(CmpOp op);
// a op b  <=>  b flip(op) a
CmpOp flip(CmpOp op);

struct ExprNode {
  ExprKind kind;
  ArithOp op = ArithOp::kAdd;
  std::string name;  // kAttr
  Value value;       // kConst
  Expr lhs, rhs;     // kArith; kCase uses lhs=then, rhs=else
  Cond cond;         // kCase
  // Filled by bind(): position in the row and static result type.
  int slot = -1;
  Type type = Type::kNull;
  size_t hash = 0;
  uint32_t size = 1;  // tree size, saturating
};

struct CondNode {
  CondKind kind;
  CmpOp op = CmpOp::kEq;
  Expr lhs, rhs;           // kCmp; kIsNull uses lhs
  std::vector<Cond> kids;  // kAnd/kOr (>= 2), kNot (1)
  size_t hash = 0;
  uint32_t size = 1;
};

// Builders. and_/or_ with one operand return it; with none return the
// neutral element. No other simplification happens here.
Expr attr(std::string name);
Expr lit(Value v);
Expr lit(int64_t v);
Expr arith(ArithOp op, Expr l, Expr r);
Expr add(Expr l, Expr r);
Expr sub(Expr l, Expr r);
Expr mul(Expr l, Expr r);
Expr div(Expr l, Expr r);
Expr case_when(Cond c, Expr then_e, Expr else_e);

Cond cmp(CmpOp op, Expr l, Expr r);
Cond eq(Expr l, Expr r);
Cond ne(Expr l, Expr r);
Cond lt(Expr l, Expr r);
Cond le(Expr l, Expr r);
Cond gt(Expr l, Expr r);
Cond ge(Expr l, Expr r);
Cond and_(std::vector<Cond> kids);
Cond and_(Cond a, Cond b);
Cond or_(std::vector<Cond> kids);
Cond or_(Cond a, Cond b);
Cond not_(Cond c);
Cond is_null(Expr e);
Cond true_c();
Cond false_c();
// Or of equalities; False for an empty set.
Cond in_set(const Expr& e, const std::vector<Value>& values);

bool is_true(const Cond& c);
bool is_false(const Cond& c);

// Structural equality (pointer-equal fast path).
bool equal(const Expr& a, const Expr& b);
bool equal(const Cond& a, const Cond& b);

struct ExprHash {
  size_t operator()(const Expr& e) const { return e->hash; }
};
struct ExprEq {
  bool operator()(const Expr& a, const Expr& b) const { return equal(a, b); }
};
struct CondHash {
  size_t operator()(const Cond& c) const { return c->hash; }
};
struct CondEq {
  bool operator()(const Cond& a, const Cond& b) const { return equal(a, b); }
};

// DSL rendering. Arithmetic and nested boolean structure are fully
// parenthesised so that parsing the output yields the same AST.
std::string to_string(const Expr& e);
std::string to_string(const Cond& c, bool top_level = true);
// Identifiers that are not plain [A-Za-z_][A-Za-z0-9_]*, or that collide
// with a DSL keyword, are double-quoted.
std::string quote_ident(const std::string& name);
bool is_reserved_word(std::string_view word);

// Attribute names referenced.
void collect_attrs(const Expr& e, std::set<std::string>& out);
void collect_attrs(const Cond& c, std::set<std::string>& out);
std::set<std::string> attrs_of(const Cond& c);
std::set<std::string> attrs_of(const Expr& e);
bool contains_null_or_div(const Expr& e);
bool contains_null_or_div(const Cond& c);

// Simultaneous substitution of structurally matching subexpressions.
using Substitution = std::vector<std::pair<Expr, Expr>>;
Expr substitute(const Expr& e, const Substitution& s);
Cond substitute(const Cond& c, const Substitution& s);
// Fast path when every target is an attribute reference.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& s);
Cond substitute(const Cond& c, const std::map<std::string, Expr>& s);

struct SimplifyOptions {
  // Treat every attribute as non-null (enables x = x -> True and similar).
  bool assume_non_null = false;
};
// Semantics-preserving rewrite: constant folding, boolean absorption,
// double negation, bound merging on constant comparisons, factoring of
// common conjuncts out of disjunctions.
Expr simplify(const Expr& e, const SimplifyOptions& opts = {});
Cond simplify(const Cond& c, const SimplifyOptions& opts = {});

// ---------------------------------------------------------------------------
// Binding and evaluation.

// Name -> (slot, type) resolution for bind().
class Binder {
 public:
  virtual ~Binder() = default;
  // Returns false for unknown names.
  virtual bool resolve(const std::string& name, int* slot, Type* type) const = 0;
};

// Returns a copy with every attribute resolved and static types computed.
// Throws SchemaError for unknown attributes and TypeError for ill-typed
// operations (text arithmetic, comparing text with numbers, ...).
Expr bind(const Expr& e, const Binder& b);
Cond bind(const Cond& c, const Binder& b);
// Binds several trees in one pass so that shared inputs stay shared.
std::vector<Expr> bind_all(const std::vector<Expr>& es, const Binder& b);

// Evaluation of bound trees over a row of values.
Value eval(const ExprNode& e, const Value* row);
bool eval(const CondNode& c, const Value* row);

}  // namespace histif

#endif  // HISTIF_EXPR_HPP_
