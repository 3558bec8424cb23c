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

#include "histif/expr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_map>

#include "histif/error.hpp"

namespace histif {

namespace {

constexpr uint32_t kSizeCap = 1u << 30;

size_t mix(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

uint32_t add_size(uint32_t a, uint32_t b) {
  uint64_t s = static_cast<uint64_t>(a) + b;
  return s > kSizeCap ? kSizeCap : static_cast<uint32_t>(s);
}

void finish(ExprNode& n) {
  size_t h = mix(0x51ed27, static_cast<size_t>(n.kind));
  uint32_t size = 1;
  switch (n.kind) {
    case ExprKind::kAttr:
      h = mix(h, std::hash<std::string>()(n.name));
      break;
    case ExprKind::kConst:
      h = mix(h, n.value.hash());
      break;
    case ExprKind::kArith:
      h = mix(mix(mix(h, static_cast<size_t>(n.op)), n.lhs->hash), n.rhs->hash);
      size = add_size(add_size(size, n.lhs->size), n.rhs->size);
      break;
    case ExprKind::kCase:
      h = mix(mix(mix(h, n.cond->hash), n.lhs->hash), n.rhs->hash);
      size = add_size(add_size(add_size(size, n.cond->size), n.lhs->size),
                      n.rhs->size);
      break;
  }
  n.hash = h;
  n.size = size;
}

void finish(CondNode& n) {
  size_t h = mix(0x7a3c91, static_cast<size_t>(n.kind));
  uint32_t size = 1;
  switch (n.kind) {
    case CondKind::kCmp:
      h = mix(mix(mix(h, static_cast<size_t>(n.op)), n.lhs->hash), n.rhs->hash);
      size = add_size(add_size(size, n.lhs->size), n.rhs->size);
      break;
    case CondKind::kIsNull:
      h = mix(h, n.lhs->hash);
      size = add_size(size, n.lhs->size);
      break;
    case CondKind::kAnd:
    case CondKind::kOr:
    case CondKind::kNot:
      for (const Cond& k : n.kids) {
        h = mix(h, k->hash);
        size = add_size(size, k->size);
      }
      break;
    default:
      break;
  }
  n.hash = h;
  n.size = size;
}

Expr make(ExprNode n) {
  finish(n);
  return std::make_shared<const ExprNode>(std::move(n));
}

Cond make(CondNode n) {
  finish(n);
  return std::make_shared<const CondNode>(std::move(n));
}

Cond make_junction(CondKind kind, std::vector<Cond> kids) {
  if (kids.empty()) return kind == CondKind::kAnd ? true_c() : false_c();
  if (kids.size() == 1) return kids[0];
  CondNode n{kind};
  n.kids = std::move(kids);
  return make(std::move(n));
}

}  // namespace

std::string_view cmp_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return "=";
    case CmpOp::kNe: return "<>";
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
    case CmpOp::kGt: return ">";
    case CmpOp::kGe: return ">=";
  }
  return "?";
}

CmpOp flip(CmpOp op) {
  switch (op) {
    case CmpOp::kLt: return CmpOp::kGt;
    case CmpOp::kLe: return CmpOp::kGe;
    case CmpOp::kGt: return CmpOp::kLt;
    case CmpOp::kGe: return CmpOp::kLe;
    default: return op;
  }
}

Expr attr(std::string name) {
  ExprNode n{ExprKind::kAttr};
  n.name = std::move(name);
  return make(std::move(n));
}

Expr lit(Value v) {
  ExprNode n{ExprKind::kConst};
  n.type = v.type();
  n.value = std::move(v);
  return make(std::move(n));
}

Expr lit(int64_t v) { return lit(Value::integer(v)); }

Expr arith(ArithOp op, Expr l, Expr r) {
  ExprNode n{ExprKind::kArith};
  n.op = op;
  n.lhs = std::move(l);
  n.rhs = std::move(r);
  return make(std::move(n));
}

Expr add(Expr l, Expr r) { return arith(ArithOp::kAdd, std::move(l), std::move(r)); }
Expr sub(Expr l, Expr r) { return arith(ArithOp::kSub, std::move(l), std::move(r)); }
Expr mul(Expr l, Expr r) { return arith(ArithOp::kMul, std::move(l), std::move(r)); }
Expr div(Expr l, Expr r) { return arith(ArithOp::kDiv, std::move(l), std::move(r)); }

Expr case_when(Cond c, Expr then_e, Expr else_e) {
  ExprNode n{ExprKind::kCase};
  n.cond = std::move(c);
  n.lhs = std::move(then_e);
  n.rhs = std::move(else_e);
  return make(std::move(n));
}

Cond cmp(CmpOp op, Expr l, Expr r) {
  CondNode n{CondKind::kCmp};
  n.op = op;
  n.lhs = std::move(l);
  n.rhs = std::move(r);
  return make(std::move(n));
}

Cond eq(Expr l, Expr r) { return cmp(CmpOp::kEq, std::move(l), std::move(r)); }
Cond ne(Expr l, Expr r) { return cmp(CmpOp::kNe, std::move(l), std::move(r)); }
Cond lt(Expr l, Expr r) { return cmp(CmpOp::kLt, std::move(l), std::move(r)); }
Cond le(Expr l, Expr r) { return cmp(CmpOp::kLe, std::move(l), std::move(r)); }
Cond gt(Expr l, Expr r) { return cmp(CmpOp::kGt, std::move(l), std::move(r)); }
Cond ge(Expr l, Expr r) { return cmp(CmpOp::kGe, std::move(l), std::move(r)); }

Cond and_(std::vector<Cond> kids) {
  return make_junction(CondKind::kAnd, std::move(kids));
}
Cond and_(Cond a, Cond b) { return and_(std::vector<Cond>{std::move(a), std::move(b)}); }
Cond or_(std::vector<Cond> kids) {
  return make_junction(CondKind::kOr, std::move(kids));
}
Cond or_(Cond a, Cond b) { return or_(std::vector<Cond>{std::move(a), std::move(b)}); }

Cond not_(Cond c) {
  CondNode n{CondKind::kNot};
  n.kids.push_back(std::move(c));
  return make(std::move(n));
}

Cond is_null(Expr e) {
  CondNode n{CondKind::kIsNull};
  n.lhs = std::move(e);
  return make(std::move(n));
}

Cond true_c() {
  static const Cond t = make(CondNode{CondKind::kTrue});
  return t;
}

Cond false_c() {
  static const Cond f = make(CondNode{CondKind::kFalse});
  return f;
}

Cond in_set(const Expr& e, const std::vector<Value>& values) {
  std::vector<Cond> kids;
  kids.reserve(values.size());
  for (const Value& v : values) kids.push_back(eq(e, lit(v)));
  return or_(std::move(kids));
}

bool is_true(const Cond& c) { return c->kind == CondKind::kTrue; }
bool is_false(const Cond& c) { return c->kind == CondKind::kFalse; }

bool equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->kind != b->kind || a->size != b->size) return false;
  switch (a->kind) {
    case ExprKind::kAttr: return a->name == b->name;
    case ExprKind::kConst: return a->value == b->value;
    case ExprKind::kArith:
      return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case ExprKind::kCase:
      return equal(a->cond, b->cond) && equal(a->lhs, b->lhs) &&
             equal(a->rhs, b->rhs);
  }
  return false;
}

bool equal(const Cond& a, const Cond& b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->kind != b->kind || a->size != b->size) return false;
  switch (a->kind) {
    case CondKind::kCmp:
      return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case CondKind::kIsNull: return equal(a->lhs, b->lhs);
    case CondKind::kAnd:
    case CondKind::kOr:
    case CondKind::kNot:
      if (a->kids.size() != b->kids.size()) return false;
      for (size_t i = 0; i < a->kids.size(); ++i) {
        if (!equal(a->kids[i], b->kids[i])) return false;
      }
      return true;
    default:
      return true;
  }
}

bool is_reserved_word(std::string_view word) {
  static const char* const kWords[] = {
      "AND",  "AS",   "BETWEEN", "CASE",   "DELETE", "ELSE",  "END",
      "FALSE", "FROM", "IN",     "INSERT", "INTO",   "IS",    "NOOP",
      "NOT",  "NULL", "OR",      "SELECT", "SET",    "THEN",  "TRUE",
      "UNION", "UPDATE", "VALUES", "WHEN", "WHERE"};
  for (const char* w : kWords) {
    std::string_view kw(w);
    if (kw.size() != word.size()) continue;
    bool same = true;
    for (size_t i = 0; i < kw.size() && same; ++i) {
      same = std::toupper(static_cast<unsigned char>(word[i])) == kw[i];
    }
    if (same) return true;
  }
  return false;
}

std::string quote_ident(const std::string& name) {
  bool plain = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) ||
                                 name[0] == '_');
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') plain = false;
  }
  if (plain && !is_reserved_word(name)) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_string(const Expr& e) {
  switch (e->kind) {
    case ExprKind::kAttr: return quote_ident(e->name);
    case ExprKind::kConst: return e->value.to_literal();
    case ExprKind::kArith:
      return "(" + to_string(e->lhs) + " " + std::string(arith_symbol(e->op)) +
             " " + to_string(e->rhs) + ")";
    case ExprKind::kCase:
      return "CASE WHEN " + to_string(e->cond) + " THEN " + to_string(e->lhs) +
             " ELSE " + to_string(e->rhs) + " END";
  }
  return "";
}

std::string to_string(const Cond& c, bool top_level) {
  switch (c->kind) {
    case CondKind::kCmp:
      return to_string(c->lhs) + " " + std::string(cmp_symbol(c->op)) + " " +
             to_string(c->rhs);
    case CondKind::kIsNull: return to_string(c->lhs) + " IS NULL";
    case CondKind::kTrue: return "TRUE";
    case CondKind::kFalse: return "FALSE";
    case CondKind::kNot: return "NOT " + to_string(c->kids[0], false);
    case CondKind::kAnd:
    case CondKind::kOr: {
      std::string sep = c->kind == CondKind::kAnd ? " AND " : " OR ";
      std::string out;
      for (size_t i = 0; i < c->kids.size(); ++i) {
        if (i) out += sep;
        out += to_string(c->kids[i], false);
      }
      return top_level ? out : "(" + out + ")";
    }
  }
  return "";
}

void collect_attrs(const Expr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case ExprKind::kAttr: out.insert(e->name); break;
    case ExprKind::kConst: break;
    case ExprKind::kArith:
      collect_attrs(e->lhs, out);
      collect_attrs(e->rhs, out);
      break;
    case ExprKind::kCase:
      collect_attrs(e->cond, out);
      collect_attrs(e->lhs, out);
      collect_attrs(e->rhs, out);
      break;
  }
}

void collect_attrs(const Cond& c, std::set<std::string>& out) {
  if (c->lhs) collect_attrs(c->lhs, out);
  if (c->rhs) collect_attrs(c->rhs, out);
  for (const Cond& k : c->kids) collect_attrs(k, out);
}

std::set<std::string> attrs_of(const Cond& c) {
  std::set<std::string> out;
  collect_attrs(c, out);
  return out;
}

std::set<std::string> attrs_of(const Expr& e) {
  std::set<std::string> out;
  collect_attrs(e, out);
  return out;
}

bool contains_null_or_div(const Expr& e) {
  switch (e->kind) {
    case ExprKind::kAttr: return false;
    case ExprKind::kConst: return e->value.is_null();
    case ExprKind::kArith:
      return e->op == ArithOp::kDiv || contains_null_or_div(e->lhs) ||
             contains_null_or_div(e->rhs);
    case ExprKind::kCase:
      return contains_null_or_div(e->cond) || contains_null_or_div(e->lhs) ||
             contains_null_or_div(e->rhs);
  }
  return false;
}

bool contains_null_or_div(const Cond& c) {
  if (c->lhs && contains_null_or_div(c->lhs)) return true;
  if (c->rhs && contains_null_or_div(c->rhs)) return true;
  for (const Cond& k : c->kids) {
    if (contains_null_or_div(k)) return true;
  }
  return false;
}

namespace {

// Rebuilds a tree bottom-up, reusing untouched nodes and sharing results
// for shared input nodes.
class Rewriter {
 public:
  using ExprFn = std::function<Expr(const Expr&)>;  // nullptr: no match
  explicit Rewriter(ExprFn leaf) : leaf_(std::move(leaf)) {}

  Expr run(const Expr& e) {
    auto it = expr_memo_.find(e.get());
    if (it != expr_memo_.end()) return it->second;
    Expr out;
    if (Expr hit = leaf_(e)) {
      out = hit;
    } else {
      switch (e->kind) {
        case ExprKind::kAttr:
        case ExprKind::kConst:
          out = e;
          break;
        case ExprKind::kArith: {
          Expr l = run(e->lhs), r = run(e->rhs);
          out = (l == e->lhs && r == e->rhs) ? e : arith(e->op, l, r);
          break;
        }
        case ExprKind::kCase: {
          Cond c = run(e->cond);
          Expr t = run(e->lhs), f = run(e->rhs);
          out = (c == e->cond && t == e->lhs && f == e->rhs) ? e
                                                             : case_when(c, t, f);
          break;
        }
      }
    }
    expr_memo_.emplace(e.get(), out);
    return out;
  }

  Cond run(const Cond& c) {
    auto it = cond_memo_.find(c.get());
    if (it != cond_memo_.end()) return it->second;
    Cond out = c;
    switch (c->kind) {
      case CondKind::kCmp: {
        Expr l = run(c->lhs), r = run(c->rhs);
        if (l != c->lhs || r != c->rhs) out = cmp(c->op, l, r);
        break;
      }
      case CondKind::kIsNull: {
        Expr l = run(c->lhs);
        if (l != c->lhs) out = is_null(l);
        break;
      }
      case CondKind::kAnd:
      case CondKind::kOr:
      case CondKind::kNot: {
        std::vector<Cond> kids;
        bool changed = false;
        for (const Cond& k : c->kids) {
          kids.push_back(run(k));
          changed |= kids.back() != k;
        }
        if (changed) {
          CondNode n{c->kind};
          n.kids = std::move(kids);
          out = make(std::move(n));
        }
        break;
      }
      default:
        break;
    }
    cond_memo_.emplace(c.get(), out);
    return out;
  }

 private:
  ExprFn leaf_;
  std::unordered_map<const ExprNode*, Expr> expr_memo_;
  std::unordered_map<const CondNode*, Cond> cond_memo_;
};

Rewriter::ExprFn pair_matcher(const Substitution& s) {
  return [&s](const Expr& e) -> Expr {
    for (const auto& [target, repl] : s) {
      if (equal(e, target)) return repl;
    }
    return nullptr;
  };
}

Rewriter::ExprFn name_matcher(const std::map<std::string, Expr>& s) {
  return [&s](const Expr& e) -> Expr {
    if (e->kind != ExprKind::kAttr) return nullptr;
    auto it = s.find(e->name);
    return it == s.end() ? nullptr : it->second;
  };
}

}  // namespace

Expr substitute(const Expr& e, const Substitution& s) {
  Rewriter rw(pair_matcher(s));
  return rw.run(e);
}

Cond substitute(const Cond& c, const Substitution& s) {
  Rewriter rw(pair_matcher(s));
  return rw.run(c);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& s) {
  if (s.empty()) return e;
  Rewriter rw(name_matcher(s));
  return rw.run(e);
}

Cond substitute(const Cond& c, const std::map<std::string, Expr>& s) {
  if (s.empty()) return c;
  Rewriter rw(name_matcher(s));
  return rw.run(c);
}

// ---------------------------------------------------------------------------
// Binding.

namespace {

bool comparable(Type a, Type b) {
  if (a == Type::kNull || b == Type::kNull) return true;
  if (is_numeric(a) && is_numeric(b)) return true;
  return a == b;
}

Type unify(Type a, Type b) {
  if (a == Type::kNull) return b;
  if (b == Type::kNull || a == b) return a;
  if (is_numeric(a) && is_numeric(b)) return Type::kDecimal;
  throw TypeError("CASE branches of type " + std::string(type_name(a)) + " and " +
                  std::string(type_name(b)));
}

class BindPass {
 public:
  explicit BindPass(const Binder& b) : binder_(b) {}

  Expr run(const Expr& e) {
    auto it = memo_e_.find(e.get());
    if (it != memo_e_.end()) return it->second;
    ExprNode n = *e;
    switch (e->kind) {
      case ExprKind::kAttr:
        if (!binder_.resolve(e->name, &n.slot, &n.type)) {
          throw SchemaError("unknown attribute '" + e->name + "'");
        }
        break;
      case ExprKind::kConst:
        n.type = e->value.type();
        break;
      case ExprKind::kArith:
        n.lhs = run(e->lhs);
        n.rhs = run(e->rhs);
        n.type = arith_type(e->op, n.lhs->type, n.rhs->type);
        break;
      case ExprKind::kCase:
        n.cond = run(e->cond);
        n.lhs = run(e->lhs);
        n.rhs = run(e->rhs);
        n.type = unify(n.lhs->type, n.rhs->type);
        break;
    }
    Expr out = std::make_shared<const ExprNode>(std::move(n));
    memo_e_.emplace(e.get(), out);
    return out;
  }

  Cond run(const Cond& c) {
    auto it = memo_c_.find(c.get());
    if (it != memo_c_.end()) return it->second;
    CondNode n = *c;
    if (c->lhs) n.lhs = run(c->lhs);
    if (c->rhs) n.rhs = run(c->rhs);
    for (Cond& k : n.kids) k = run(k);
    if (c->kind == CondKind::kCmp && !comparable(n.lhs->type, n.rhs->type)) {
      throw TypeError("cannot compare " + std::string(type_name(n.lhs->type)) +
                      " with " + std::string(type_name(n.rhs->type)) + " in " +
                      to_string(c));
    }
    Cond out = std::make_shared<const CondNode>(std::move(n));
    memo_c_.emplace(c.get(), out);
    return out;
  }

 private:
  const Binder& binder_;
  std::unordered_map<const ExprNode*, Expr> memo_e_;
  std::unordered_map<const CondNode*, Cond> memo_c_;
};

}  // namespace

Expr bind(const Expr& e, const Binder& b) {
  BindPass p(b);
  return p.run(e);
}

Cond bind(const Cond& c, const Binder& b) {
  BindPass p(b);
  return p.run(c);
}

std::vector<Expr> bind_all(const std::vector<Expr>& es, const Binder& b) {
  BindPass p(b);
  std::vector<Expr> out;
  out.reserve(es.size());
  for (const Expr& e : es) out.push_back(p.run(e));
  return out;
}

Value eval(const ExprNode& e, const Value* row) {
  switch (e.kind) {
    case ExprKind::kAttr: return row[e.slot];
    case ExprKind::kConst: return e.value;
    case ExprKind::kArith: return arith(e.op, eval(*e.lhs, row), eval(*e.rhs, row));
    case ExprKind::kCase:
      return eval(*e.cond, row) ? eval(*e.lhs, row) : eval(*e.rhs, row);
  }
  return Value::null();
}

bool eval(const CondNode& c, const Value* row) {
  switch (c.kind) {
    case CondKind::kCmp: {
      auto r = compare_values(eval(*c.lhs, row), eval(*c.rhs, row));
      if (!r) return false;
      switch (c.op) {
        case CmpOp::kEq: return *r == 0;
        case CmpOp::kNe: return *r != 0;
        case CmpOp::kLt: return *r < 0;
        case CmpOp::kLe: return *r <= 0;
        case CmpOp::kGt: return *r > 0;
        case CmpOp::kGe: return *r >= 0;
      }
      return false;
    }
    case CondKind::kAnd:
      for (const Cond& k : c.kids) {
        if (!eval(*k, row)) return false;
      }
      return true;
    case CondKind::kOr:
      for (const Cond& k : c.kids) {
        if (eval(*k, row)) return true;
      }
      return false;
    case CondKind::kNot: return !eval(*c.kids[0], row);
    case CondKind::kIsNull: return eval(*c.lhs, row).is_null();
    case CondKind::kTrue: return true;
    case CondKind::kFalse: return false;
  }
  return false;
}

}  // namespace histif
