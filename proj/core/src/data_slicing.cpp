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

#include "histif/data_slicing.hpp"

#include "histif/error.hpp"

namespace histif {

Cond lookup(const CondMap& m, const std::string& rel) {
  auto it = m.find(rel);
  return it == m.end() ? false_c() : it->second;
}

namespace {

void or_into(CondMap& m, const std::string& rel, const Cond& c) {
  auto it = m.find(rel);
  if (it == m.end()) {
    m[rel] = simplify(c);
  } else {
    it->second = simplify(or_(it->second, c));
  }
}

std::vector<Cond> conjuncts(const Cond& c) {
  if (c->kind == CondKind::kAnd) return c->kids;
  return {c};
}

std::map<std::string, Expr> renaming(const std::vector<std::string>& from,
                                     const std::vector<std::string>& to) {
  std::map<std::string, Expr> m;
  for (size_t i = 0; i < from.size() && i < to.size(); ++i) {
    if (from[i] != to[i]) m[from[i]] = attr(to[i]);
  }
  return m;
}

std::optional<Cond> either(std::optional<Cond> a, std::optional<Cond> b) {
  if (!a) return b;
  if (!b) return a;
  return simplify(or_(*a, *b));
}

// Keeps the conjuncts of `c` expressible over `side`, rewriting attributes
// through equalities A = B found among the conjuncts.
Cond project_onto(const Cond& c, const std::set<std::string>& side) {
  std::vector<Cond> parts = conjuncts(c);
  std::map<std::string, std::string> alias;  // attribute -> equal one in `side`
  for (const Cond& k : parts) {
    if (k->kind != CondKind::kCmp || k->op != CmpOp::kEq) continue;
    if (k->lhs->kind != ExprKind::kAttr || k->rhs->kind != ExprKind::kAttr) continue;
    const std::string& a = k->lhs->name;
    const std::string& b = k->rhs->name;
    if (side.count(a) && !side.count(b)) alias.emplace(b, a);
    if (side.count(b) && !side.count(a)) alias.emplace(a, b);
  }
  std::vector<Cond> keep;
  for (const Cond& k : parts) {
    std::map<std::string, Expr> ren;
    bool ok = true;
    for (const std::string& a : attrs_of(k)) {
      if (side.count(a)) continue;
      auto it = alias.find(a);
      if (it == alias.end()) {
        ok = false;
        break;
      }
      ren[a] = attr(it->second);
    }
    if (!ok) continue;
    Cond r = ren.empty() ? k : substitute(k, ren);
    // The join equality itself becomes X = X; it only rejects Nulls, which
    // cannot join anyway.
    bool self_eq = r->kind == CondKind::kCmp && r->op == CmpOp::kEq &&
                   r->lhs->kind == ExprKind::kAttr && r->rhs->kind == ExprKind::kAttr &&
                   r->lhs->name == r->rhs->name && !ren.empty();
    if (!self_eq) keep.push_back(r);
  }
  return simplify(and_(std::move(keep)));
}

}  // namespace

std::optional<Cond> qpush(const Cond& c, const Query& q, const std::string& rel,
                          const Database& db) {
  switch (q->kind) {
    case QueryKind::kBase:
      if (q->name == rel) return simplify(c);
      return std::nullopt;
    case QueryKind::kSingleton: return std::nullopt;
    case QueryKind::kSelect: return qpush(simplify(and_(c, q->cond)), q->left, rel, db);
    case QueryKind::kProject: {
      std::map<std::string, Expr> s;
      for (const ProjItem& it : q->items) s[it.name] = it.expr;
      return qpush(simplify(substitute(c, s)), q->left, rel, db);
    }
    case QueryKind::kUnion:
    case QueryKind::kDifference: {
      Schema out = output_schema(q, db);
      Schema right = output_schema(q->right, db);
      Cond rc = substitute(c, renaming(out.names(), right.names()));
      return either(qpush(c, q->left, rel, db), qpush(rc, q->right, rel, db));
    }
    case QueryKind::kJoin: {
      std::vector<std::string> ln = output_schema(q->left, db).names();
      std::vector<std::string> rn = output_schema(q->right, db).names();
      Cond lc = project_onto(c, {ln.begin(), ln.end()});
      Cond rc = project_onto(c, {rn.begin(), rn.end()});
      return either(qpush(lc, q->left, rel, db), qpush(rc, q->right, rel, db));
    }
  }
  throw NotApplicable("unsupported query operator in condition push-down");
}

SlicingCondition mod_condition(const Statement& u, const Statement& u2, const Database& db) {
  if (u.relation != u2.relation ||
      (u.kind != u2.kind && u.kind != StmtKind::kNoOp && u2.kind != StmtKind::kNoOp)) {
    throw NotApplicable("modification is not normalized: " + to_string(u) + " vs " +
                        to_string(u2));
  }
  SlicingCondition out;
  const std::string& rel = u.relation;
  StmtKind kind = u.kind == StmtKind::kNoOp ? u2.kind : u.kind;
  switch (kind) {
    case StmtKind::kUpdate: {
      Cond c = simplify(or_(u.condition(), u2.condition()));
      out.h[rel] = c;
      out.hm[rel] = c;
      break;
    }
    case StmtKind::kDelete:
      // A tuple deleted on one side only matters on the other side.
      out.h[rel] = simplify(u2.condition());
      out.hm[rel] = simplify(u.condition());
      break;
    case StmtKind::kInsertQuery: {
      std::set<std::string> read;
      for (const Statement* s : {&u, &u2}) {
        if (s->kind == StmtKind::kInsertQuery) {
          for (const std::string& r : base_relations(s->query)) read.insert(r);
        }
      }
      for (const std::string& r : read) {
        std::optional<Cond> c;
        for (const Statement* s : {&u, &u2}) {
          if (s->kind == StmtKind::kInsertQuery) c = either(c, qpush(true_c(), s->query, r, db));
        }
        if (c) {
          out.h[r] = *c;
          out.hm[r] = *c;
        }
      }
      break;
    }
    case StmtKind::kInsertTuple:
    case StmtKind::kNoOp: break;
  }
  return out;
}

CondMap push_through_statement(const CondMap& c, const Statement& u, const Database& db,
                               const DataSliceOptions& opts,
                               std::set<std::string>* degraded) {
  CondMap out = c;
  auto guard = [&](const std::string& rel) {
    auto it = out.find(rel);
    if (it != out.end() && it->second->size > opts.node_budget) {
      it->second = true_c();
      if (degraded) degraded->insert(rel);
    }
  };
  auto it = c.find(u.relation);
  if (it == c.end() || is_false(it->second)) return out;
  const Cond& cr = it->second;
  if (u.kind == StmtKind::kUpdate) {
    const Schema& s = db.schema(u.relation);
    std::vector<Expr> list = u.set_list(s);
    std::map<std::string, Expr> sub;
    for (size_t i = 0; i < list.size(); ++i) {
      const std::string& a = s.at(i).name;
      if (list[i]->kind == ExprKind::kAttr && list[i]->name == a) continue;
      sub[a] = is_true(u.where) ? list[i] : case_when(u.where, list[i], attr(a));
    }
    out[u.relation] = simplify(substitute(cr, sub));
    guard(u.relation);
  } else if (u.kind == StmtKind::kInsertQuery) {
    for (const std::string& r : base_relations(u.query)) {
      std::optional<Cond> p = qpush(cr, u.query, r, db);
      if (p) {
        or_into(out, r, *p);
        guard(r);
      }
    }
  }
  return out;
}

Cond push_through_statement(const Cond& c, const Statement& u, const Database& db) {
  CondMap m{{u.relation, c}};
  return lookup(push_through_statement(m, u, db), u.relation);
}

SlicingCondition data_slice(const History& h, const History& hm,
                            const std::vector<size_t>& mods, const Database& db,
                            const DataSliceOptions& opts) {
  if (h.size() != hm.size()) throw NotApplicable("histories are not normalized");
  SlicingCondition out;
  std::vector<bool> is_mod(h.size() + 1, false);
  for (size_t p : mods) {
    if (p < 1 || p > h.size()) throw RangeError("modification position out of range");
    is_mod[p] = true;
  }
  // Walk backwards so that each statement is pushed through once for the
  // disjunction of all later modification conditions. A modification's own
  // condition refers to the state just before its statement.
  for (size_t i = h.size(); i >= 1; --i) {
    out.h = push_through_statement(out.h, h[i - 1], db, opts, &out.degraded);
    out.hm = push_through_statement(out.hm, hm[i - 1], db, opts, &out.degraded);
    if (is_mod[i]) {
      SlicingCondition m = mod_condition(h[i - 1], hm[i - 1], db);
      for (const auto& [rel, c] : m.h) or_into(out.h, rel, c);
      for (const auto& [rel, c] : m.hm) or_into(out.hm, rel, c);
    }
  }
  return out;
}

}  // namespace histif
