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

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "histif/error.hpp"
#include "histif/expr.hpp"

namespace histif {

namespace {

bool is_int_const(const Expr& e, int64_t v) {
  return e->kind == ExprKind::kConst && e->value.type() == Type::kInteger &&
         e->value.number() == BigInt(v);
}

bool is_null_const(const Expr& e) {
  return e->kind == ExprKind::kConst && e->value.is_null();
}

// e op c with a constant c on the right.
struct Bound {
  Expr e;
  CmpOp op;
  Value c;
};

std::optional<Bound> as_bound(const Cond& c) {
  if (c->kind != CondKind::kCmp || c->op == CmpOp::kNe) return std::nullopt;
  bool lc = c->lhs->kind == ExprKind::kConst;
  bool rc = c->rhs->kind == ExprKind::kConst;
  if (lc == rc) return std::nullopt;
  if (rc) {
    if (c->rhs->value.is_null()) return std::nullopt;
    return Bound{c->lhs, c->op, c->rhs->value};
  }
  if (c->lhs->value.is_null()) return std::nullopt;
  return Bound{c->rhs, flip(c->op), c->lhs->value};
}

bool is_upper(CmpOp op) { return op == CmpOp::kLt || op == CmpOp::kLe; }
bool is_lower(CmpOp op) { return op == CmpOp::kGt || op == CmpOp::kGe; }

// Does constant v satisfy (v op c)?
bool holds(const Value& v, CmpOp op, const Value& c) {
  int r = *compare_values(v, c);
  switch (op) {
    case CmpOp::kEq: return r == 0;
    case CmpOp::kNe: return r != 0;
    case CmpOp::kLt: return r < 0;
    case CmpOp::kLe: return r <= 0;
    case CmpOp::kGt: return r > 0;
    case CmpOp::kGe: return r >= 0;
  }
  return false;
}

enum class Merge { kNone, kKeepA, kKeepB, kFalse, kTrue };

// Merges two bounds on the same expression within a conjunction.
Merge merge_and(const Bound& a, const Bound& b) {
  if (a.op == CmpOp::kEq && b.op == CmpOp::kEq) {
    return holds(a.c, CmpOp::kEq, b.c) ? Merge::kKeepA : Merge::kFalse;
  }
  if (a.op == CmpOp::kEq) return holds(a.c, b.op, b.c) ? Merge::kKeepA : Merge::kFalse;
  if (b.op == CmpOp::kEq) return holds(b.c, a.op, a.c) ? Merge::kKeepB : Merge::kFalse;
  int r = *compare_values(a.c, b.c);
  if (is_upper(a.op) && is_upper(b.op)) {
    if (r != 0) return r < 0 ? Merge::kKeepA : Merge::kKeepB;
    return a.op == CmpOp::kLt ? Merge::kKeepA : Merge::kKeepB;
  }
  if (is_lower(a.op) && is_lower(b.op)) {
    if (r != 0) return r > 0 ? Merge::kKeepA : Merge::kKeepB;
    return a.op == CmpOp::kGt ? Merge::kKeepA : Merge::kKeepB;
  }
  // One lower, one upper: detect empty intervals only.
  const Bound& lo = is_lower(a.op) ? a : b;
  const Bound& hi = is_lower(a.op) ? b : a;
  int d = *compare_values(lo.c, hi.c);
  if (d > 0) return Merge::kFalse;
  if (d == 0 && (lo.op == CmpOp::kGt || hi.op == CmpOp::kLt)) return Merge::kFalse;
  return Merge::kNone;
}

Merge merge_or(const Bound& a, const Bound& b, bool non_null) {
  if (a.op == CmpOp::kEq && b.op == CmpOp::kEq) {
    return holds(a.c, CmpOp::kEq, b.c) ? Merge::kKeepA : Merge::kNone;
  }
  if (a.op == CmpOp::kEq) return holds(a.c, b.op, b.c) ? Merge::kKeepB : Merge::kNone;
  if (b.op == CmpOp::kEq) return holds(b.c, a.op, a.c) ? Merge::kKeepA : Merge::kNone;
  int r = *compare_values(a.c, b.c);
  if (is_upper(a.op) && is_upper(b.op)) {
    if (r != 0) return r > 0 ? Merge::kKeepA : Merge::kKeepB;
    return a.op == CmpOp::kLe ? Merge::kKeepA : Merge::kKeepB;
  }
  if (is_lower(a.op) && is_lower(b.op)) {
    if (r != 0) return r < 0 ? Merge::kKeepA : Merge::kKeepB;
    return a.op == CmpOp::kGe ? Merge::kKeepA : Merge::kKeepB;
  }
  if (!non_null) return Merge::kNone;
  const Bound& lo = is_lower(a.op) ? a : b;
  const Bound& hi = is_lower(a.op) ? b : a;
  int d = *compare_values(lo.c, hi.c);
  if (d < 0 || (d == 0 && lo.op == CmpOp::kGe) || (d == 0 && hi.op == CmpOp::kLe)) {
    return Merge::kTrue;
  }
  return Merge::kNone;
}

bool numeric_or_same(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) return true;
  return a.type() == b.type();
}

class Simplifier {
 public:
  explicit Simplifier(const SimplifyOptions& o) : opts_(o) {}

  Expr run(const Expr& e) {
    auto it = memo_e_.find(e.get());
    if (it != memo_e_.end()) return it->second;
    Expr out = visit(e);
    memo_e_.emplace(e.get(), out);
    return out;
  }

  Cond run(const Cond& c) {
    auto it = memo_c_.find(c.get());
    if (it != memo_c_.end()) return it->second;
    Cond out = visit(c);
    memo_c_.emplace(c.get(), out);
    return out;
  }

 private:
  Expr visit(const Expr& e) {
    switch (e->kind) {
      case ExprKind::kAttr:
      case ExprKind::kConst:
        return e;
      case ExprKind::kArith: {
        Expr l = run(e->lhs), r = run(e->rhs);
        if (l->kind == ExprKind::kConst && r->kind == ExprKind::kConst) {
          try {
            return lit(arith(e->op, l->value, r->value));
          } catch (const TypeError&) {
            return arith(e->op, l, r);
          }
        }
        switch (e->op) {
          case ArithOp::kAdd:
            if (is_int_const(r, 0)) return l;
            if (is_int_const(l, 0)) return r;
            break;
          case ArithOp::kSub:
            if (is_int_const(r, 0)) return l;
            break;
          case ArithOp::kMul:
            if (is_int_const(r, 1)) return l;
            if (is_int_const(l, 1)) return r;
            break;
          case ArithOp::kDiv:
            if (is_int_const(r, 1)) return l;
            break;
        }
        if (l == e->lhs && r == e->rhs) return e;
        return arith(e->op, l, r);
      }
      case ExprKind::kCase: {
        Cond c = run(e->cond);
        Expr t = run(e->lhs), f = run(e->rhs);
        if (is_true(c)) return t;
        if (is_false(c)) return f;
        if (equal(t, f)) return t;
        if (c == e->cond && t == e->lhs && f == e->rhs) return e;
        return case_when(c, t, f);
      }
    }
    return e;
  }

  Cond visit(const Cond& c) {
    switch (c->kind) {
      case CondKind::kTrue:
      case CondKind::kFalse:
        return c;
      case CondKind::kCmp: {
        Expr l = run(c->lhs), r = run(c->rhs);
        if (is_null_const(l) || is_null_const(r)) return false_c();
        if (l->kind == ExprKind::kConst && r->kind == ExprKind::kConst) {
          try {
            return holds(l->value, c->op, r->value) ? true_c() : false_c();
          } catch (const TypeError&) {
            return cmp(c->op, l, r);
          }
        }
        if (opts_.assume_non_null && equal(l, r) && !contains_null_or_div(l)) {
          bool refl = c->op == CmpOp::kEq || c->op == CmpOp::kLe || c->op == CmpOp::kGe;
          return refl ? true_c() : false_c();
        }
        if (l == c->lhs && r == c->rhs) return c;
        return cmp(c->op, l, r);
      }
      case CondKind::kIsNull: {
        Expr l = run(c->lhs);
        if (l->kind == ExprKind::kConst) {
          return l->value.is_null() ? true_c() : false_c();
        }
        if (opts_.assume_non_null && !contains_null_or_div(l)) return false_c();
        return l == c->lhs ? c : is_null(l);
      }
      case CondKind::kNot: {
        Cond k = run(c->kids[0]);
        if (is_true(k)) return false_c();
        if (is_false(k)) return true_c();
        if (k->kind == CondKind::kNot) return k->kids[0];
        return k == c->kids[0] ? c : not_(k);
      }
      case CondKind::kAnd:
      case CondKind::kOr: {
        std::vector<Cond> kids;
        kids.reserve(c->kids.size());
        for (const Cond& k : c->kids) kids.push_back(run(k));
        return c->kind == CondKind::kAnd ? junction_and(std::move(kids))
                                         : junction_or(std::move(kids));
      }
    }
    return c;
  }

  static void flatten(CondKind kind, std::vector<Cond>& kids) {
    std::vector<Cond> flat;
    flat.reserve(kids.size());
    for (Cond& k : kids) {
      if (k->kind == kind) {
        flat.insert(flat.end(), k->kids.begin(), k->kids.end());
      } else {
        flat.push_back(std::move(k));
      }
    }
    kids = std::move(flat);
  }

  static void dedup(std::vector<Cond>& kids) {
    std::vector<Cond> out;
    for (Cond& k : kids) {
      bool seen = false;
      for (const Cond& o : out) {
        if (equal(o, k)) {
          seen = true;
          break;
        }
      }
      if (!seen) out.push_back(std::move(k));
    }
    kids = std::move(out);
  }

  // True when kids contain both x and NOT x.
  static bool complementary(const std::vector<Cond>& kids) {
    for (const Cond& k : kids) {
      if (k->kind != CondKind::kNot) continue;
      for (const Cond& o : kids) {
        if (equal(o, k->kids[0])) return true;
      }
    }
    return false;
  }

  // Pairwise bound merging. Returns kFalse/kTrue when the whole junction
  // collapses.
  Merge merge_bounds(std::vector<Cond>& kids, bool conj) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < kids.size() && !changed; ++i) {
        auto a = as_bound(kids[i]);
        if (!a) continue;
        for (size_t j = i + 1; j < kids.size() && !changed; ++j) {
          auto b = as_bound(kids[j]);
          if (!b || !equal(a->e, b->e) || !numeric_or_same(a->c, b->c)) continue;
          Merge m;
          try {
            m = conj ? merge_and(*a, *b) : merge_or(*a, *b, opts_.assume_non_null);
          } catch (const TypeError&) {
            continue;
          }
          switch (m) {
            case Merge::kNone: break;
            case Merge::kFalse:
            case Merge::kTrue: return m;
            case Merge::kKeepA:
              kids.erase(kids.begin() + j);
              changed = true;
              break;
            case Merge::kKeepB:
              kids[i] = kids[j];
              kids.erase(kids.begin() + j);
              changed = true;
              break;
          }
        }
      }
    }
    return Merge::kNone;
  }

  static std::vector<Cond> parts(const Cond& c, CondKind kind) {
    if (c->kind == kind) return c->kids;
    return {c};
  }

  static bool contains(const std::vector<Cond>& set, const Cond& c) {
    for (const Cond& s : set) {
      if (equal(s, c)) return true;
    }
    return false;
  }

  static bool subset(const std::vector<Cond>& a, const std::vector<Cond>& b) {
    for (const Cond& x : a) {
      if (!contains(b, x)) return false;
    }
    return true;
  }

  // In a junction of kind `outer`, drop kid Y when another kid X has
  // parts(X) within parts(Y) (X ∨ (X ∧ Z) = X, X ∧ (X ∨ Z) = X).
  static void absorb(std::vector<Cond>& kids, CondKind inner) {
    if (kids.size() > 64) return;
    std::vector<std::vector<Cond>> ps;
    for (const Cond& k : kids) ps.push_back(parts(k, inner));
    std::vector<bool> drop(kids.size(), false);
    for (size_t i = 0; i < kids.size(); ++i) {
      if (drop[i]) continue;
      for (size_t j = 0; j < kids.size(); ++j) {
        if (i == j || drop[j]) continue;
        if (ps[i].size() <= ps[j].size() && subset(ps[i], ps[j])) drop[j] = true;
      }
    }
    std::vector<Cond> out;
    for (size_t i = 0; i < kids.size(); ++i) {
      if (!drop[i]) out.push_back(kids[i]);
    }
    kids = std::move(out);
  }

  Cond junction_and(std::vector<Cond> kids) {
    flatten(CondKind::kAnd, kids);
    std::vector<Cond> keep;
    for (Cond& k : kids) {
      if (is_false(k)) return false_c();
      if (!is_true(k)) keep.push_back(std::move(k));
    }
    dedup(keep);
    if (complementary(keep)) return false_c();
    if (merge_bounds(keep, true) == Merge::kFalse) return false_c();
    absorb(keep, CondKind::kOr);
    return and_(std::move(keep));
  }

  Cond junction_or(std::vector<Cond> kids) {
    flatten(CondKind::kOr, kids);
    std::vector<Cond> keep;
    for (Cond& k : kids) {
      if (is_true(k)) return true_c();
      if (!is_false(k)) keep.push_back(std::move(k));
    }
    dedup(keep);
    if (complementary(keep)) return true_c();
    if (merge_bounds(keep, false) == Merge::kTrue) return true_c();
    absorb(keep, CondKind::kAnd);
    if (keep.size() >= 2) {
      if (Cond f = factor(keep)) return f;
    }
    return or_(std::move(keep));
  }

  // (X ∧ a) ∨ (X ∧ b) -> X ∧ (a ∨ b), keeping the first disjunct's order.
  Cond factor(const std::vector<Cond>& kids) {
    std::vector<std::vector<Cond>> ps;
    for (const Cond& k : kids) ps.push_back(parts(k, CondKind::kAnd));
    std::vector<Cond> common;
    for (const Cond& x : ps[0]) {
      bool all = true;
      for (size_t i = 1; i < ps.size() && all; ++i) all = contains(ps[i], x);
      if (all && !contains(common, x)) common.push_back(x);
    }
    if (common.empty()) return nullptr;
    std::vector<Cond> residuals;
    for (const auto& p : ps) {
      std::vector<Cond> rest;
      for (const Cond& x : p) {
        if (!contains(common, x)) rest.push_back(x);
      }
      if (rest.empty()) return and_(common);  // absorbed
      residuals.push_back(and_(std::move(rest)));
    }
    Cond merged = junction_or(std::move(residuals));
    std::vector<Cond> out;
    bool placed = false;
    for (const Cond& x : ps[0]) {
      if (contains(common, x)) {
        out.push_back(x);
      } else if (!placed) {
        out.push_back(merged);
        placed = true;
      }
    }
    return junction_and(std::move(out));
  }

  SimplifyOptions opts_;
  std::unordered_map<const ExprNode*, Expr> memo_e_;
  std::unordered_map<const CondNode*, Cond> memo_c_;
};

}  // namespace

Expr simplify(const Expr& e, const SimplifyOptions& opts) {
  Simplifier s(opts);
  return s.run(e);
}

Cond simplify(const Cond& c, const SimplifyOptions& opts) {
  Simplifier s(opts);
  return s.run(c);
}

}  // namespace histif
