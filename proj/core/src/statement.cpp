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

#include "histif/statement.hpp"

#include <algorithm>

#include "histif/error.hpp"

namespace histif {

std::string_view kind_name(StmtKind k) {
  switch (k) {
    case StmtKind::kUpdate: return "update";
    case StmtKind::kDelete: return "delete";
    case StmtKind::kInsertTuple: return "insert_tuple";
    case StmtKind::kInsertQuery: return "insert_query";
    case StmtKind::kNoOp: return "noop";
  }
  return "?";
}

Statement Statement::update(std::string rel,
                            std::vector<std::pair<std::string, Expr>> sets, Cond where) {
  Statement s;
  s.kind = StmtKind::kUpdate;
  s.relation = std::move(rel);
  s.sets = std::move(sets);
  s.where = std::move(where);
  return s;
}

Statement Statement::delete_(std::string rel, Cond where) {
  Statement s;
  s.kind = StmtKind::kDelete;
  s.relation = std::move(rel);
  s.where = std::move(where);
  return s;
}

Statement Statement::insert_tuple(std::string rel, Tuple values) {
  Statement s;
  s.kind = StmtKind::kInsertTuple;
  s.relation = std::move(rel);
  s.values = std::move(values);
  return s;
}

Statement Statement::insert_query(std::string rel, Query q) {
  Statement s;
  s.kind = StmtKind::kInsertQuery;
  s.relation = std::move(rel);
  s.query = std::move(q);
  return s;
}

Statement Statement::noop(std::string rel) {
  Statement s;
  s.kind = StmtKind::kNoOp;
  s.relation = std::move(rel);
  return s;
}

std::vector<Expr> Statement::set_list(const Schema& s) const {
  std::vector<Expr> out;
  out.reserve(s.arity());
  for (const Attribute& a : s.attrs()) {
    Expr e;
    for (const auto& [name, expr] : sets) {
      if (name == a.name) e = expr;
    }
    out.push_back(e ? e : attr(a.name));
  }
  for (const auto& [name, expr] : sets) {
    if (s.index_of(name) < 0) {
      throw SchemaError("unknown attribute " + name + " in UPDATE " + relation);
    }
  }
  return out;
}

std::set<std::string> Statement::written(const Schema& s) const {
  std::set<std::string> out;
  if (kind != StmtKind::kUpdate) return out;
  std::vector<Expr> list = set_list(s);
  for (size_t i = 0; i < list.size(); ++i) {
    const Expr& e = list[i];
    if (e->kind == ExprKind::kAttr && e->name == s.at(i).name) continue;
    out.insert(s.at(i).name);
  }
  return out;
}

Cond Statement::condition() const {
  switch (kind) {
    case StmtKind::kUpdate:
    case StmtKind::kDelete: return where;
    default: return false_c();
  }
}

std::set<std::string> Statement::reads() const {
  std::set<std::string> out{relation};
  if (kind == StmtKind::kInsertQuery) {
    for (const std::string& r : base_relations(query)) out.insert(r);
  }
  return out;
}

bool equal(const Statement& a, const Statement& b) {
  if (a.kind != b.kind || a.relation != b.relation) return false;
  switch (a.kind) {
    case StmtKind::kUpdate:
      if (a.sets.size() != b.sets.size()) return false;
      for (size_t i = 0; i < a.sets.size(); ++i) {
        if (a.sets[i].first != b.sets[i].first ||
            !equal(a.sets[i].second, b.sets[i].second)) {
          return false;
        }
      }
      return equal(a.where, b.where);
    case StmtKind::kDelete: return equal(a.where, b.where);
    case StmtKind::kInsertTuple: return a.values == b.values;
    case StmtKind::kInsertQuery: return equal(a.query, b.query);
    case StmtKind::kNoOp: return true;
  }
  return false;
}

namespace {

bool collect_from(const Query& q, std::vector<std::string>& out) {
  if (q->kind == QueryKind::kBase) {
    out.push_back(q->name);
    return true;
  }
  if (q->kind == QueryKind::kJoin) {
    return collect_from(q->left, out) && collect_from(q->right, out);
  }
  return false;
}

// SELECT block: [PROJECT] [SELECT] (base | join of bases).
bool select_block(const Query& q, std::string* out) {
  Query cur = q;
  const std::vector<ProjItem>* items = nullptr;
  Cond where;
  if (cur->kind == QueryKind::kProject) {
    items = &cur->items;
    for (const ProjItem& it : cur->items) {
      if (it.type != Type::kNull) return false;
    }
    cur = cur->left;
  }
  if (cur->kind == QueryKind::kSelect) {
    where = cur->cond;
    cur = cur->left;
  }
  std::vector<std::string> from;
  if (!collect_from(cur, from)) return false;
  std::string s = "SELECT ";
  if (!items) {
    s += "*";
  } else {
    for (size_t i = 0; i < items->size(); ++i) {
      if (i) s += ", ";
      const ProjItem& it = (*items)[i];
      s += to_string(it.expr);
      if (it.expr->kind != ExprKind::kAttr || it.expr->name != it.name) {
        s += " AS " + quote_ident(it.name);
      }
    }
  }
  s += " FROM ";
  for (size_t i = 0; i < from.size(); ++i) {
    if (i) s += ", ";
    s += quote_ident(from[i]);
  }
  if (where) s += " WHERE " + to_string(where);
  *out = s;
  return true;
}

bool query_dsl(const Query& q, std::string* out) {
  if (q->kind == QueryKind::kUnion) {
    std::string l, r;
    if (!query_dsl(q->left, &l) || !select_block(q->right, &r)) return false;
    *out = l + " UNION " + r;
    return true;
  }
  return select_block(q, out);
}

}  // namespace

std::string to_string(const Statement& u) {
  std::string rel = quote_ident(u.relation);
  switch (u.kind) {
    case StmtKind::kUpdate: {
      std::string s = "UPDATE " + rel + " SET ";
      for (size_t i = 0; i < u.sets.size(); ++i) {
        if (i) s += ", ";
        s += quote_ident(u.sets[i].first) + " = " + to_string(u.sets[i].second);
      }
      if (!is_true(u.where)) s += " WHERE " + to_string(u.where);
      return s;
    }
    case StmtKind::kDelete: {
      std::string s = "DELETE FROM " + rel;
      if (!is_true(u.where)) s += " WHERE " + to_string(u.where);
      return s;
    }
    case StmtKind::kInsertTuple: {
      std::string s = "INSERT INTO " + rel + " VALUES (";
      for (size_t i = 0; i < u.values.size(); ++i) {
        if (i) s += ", ";
        s += u.values[i].to_literal();
      }
      return s + ")";
    }
    case StmtKind::kInsertQuery: {
      std::string body;
      if (!query_dsl(u.query, &body)) body = to_string(u.query);
      return "INSERT INTO " + rel + " " + body;
    }
    case StmtKind::kNoOp: return "NOOP " + rel;
  }
  return "";
}

bool is_tuple_independent(const Statement& u) {
  return u.kind != StmtKind::kInsertQuery;
}

namespace {

bool assignable(Type column, Type value) {
  if (value == Type::kNull || value == column) return true;
  return is_numeric(column) && is_numeric(value);
}

}  // namespace

void validate(const Statement& u, const Database& db) {
  const Schema& s = db.schema(u.relation);
  SchemaBinder binder(s);
  switch (u.kind) {
    case StmtKind::kUpdate: {
      std::vector<Expr> list = bind_all(u.set_list(s), binder);
      for (size_t i = 0; i < list.size(); ++i) {
        if (!assignable(s.at(i).type, list[i]->type)) {
          throw TypeError("cannot assign " + std::string(type_name(list[i]->type)) +
                          " to " + s.at(i).name);
        }
      }
      histif::bind(u.where, binder);
      break;
    }
    case StmtKind::kDelete: histif::bind(u.where, binder); break;
    case StmtKind::kInsertTuple: conform(u.values, s); break;
    case StmtKind::kInsertQuery: {
      Schema out = output_schema(u.query, db);
      if (out.arity() != s.arity()) {
        throw SchemaError("INSERT INTO " + u.relation + " query has arity " +
                          std::to_string(out.arity()));
      }
      for (size_t i = 0; i < s.arity(); ++i) {
        if (!assignable(s.at(i).type, out.at(i).type)) {
          throw TypeError("query column " + out.at(i).name + " does not fit " +
                          s.at(i).name);
        }
      }
      break;
    }
    case StmtKind::kNoOp: break;
  }
}

void execute(const Statement& u, Database& db) {
  Relation& rel = db.get(u.relation);
  const Schema& s = rel.schema;
  SchemaBinder binder(s);
  switch (u.kind) {
    case StmtKind::kUpdate: {
      std::vector<Expr> list = bind_all(u.set_list(s), binder);
      Cond where = histif::bind(u.where, binder);
      std::vector<size_t> changed;
      for (size_t i = 0; i < list.size(); ++i) {
        const Expr& e = list[i];
        if (e->kind != ExprKind::kAttr || e->slot != static_cast<int>(i)) {
          changed.push_back(i);
        }
      }
      // Matching tuples are pulled out, rewritten and re-inserted so that
      // untouched tuples are never copied.
      using Node = TupleSet::node_type;
      std::vector<Node> moved;
      for (auto it = rel.rows.begin(); it != rel.rows.end();) {
        if (eval(*where, it->data())) {
          auto next = std::next(it);
          moved.push_back(rel.rows.extract(it));
          it = next;
        } else {
          ++it;
        }
      }
      std::vector<Value> buf(changed.size());
      for (Node& n : moved) {
        Tuple& t = n.value();
        for (size_t k = 0; k < changed.size(); ++k) {
          buf[k] = eval(*list[changed[k]], t.data());
        }
        for (size_t k = 0; k < changed.size(); ++k) {
          Type ty = s.at(changed[k]).type;
          Value& v = buf[k];
          t[changed[k]] = (v.is_null() || v.type() == ty) ? std::move(v) : coerce(v, ty);
        }
      }
      for (Node& n : moved) rel.rows.insert(std::move(n));
      return;
    }
    case StmtKind::kDelete: {
      Cond where = histif::bind(u.where, binder);
      for (auto it = rel.rows.begin(); it != rel.rows.end();) {
        if (eval(*where, it->data())) {
          it = rel.rows.erase(it);
        } else {
          ++it;
        }
      }
      return;
    }
    case StmtKind::kInsertTuple:
      rel.rows.insert(conform(u.values, s));
      return;
    case StmtKind::kInsertQuery: {
      Relation add = eval_query(u.query, db);
      if (add.schema.arity() != s.arity()) {
        throw SchemaError("INSERT INTO " + u.relation + " query has arity " +
                          std::to_string(add.schema.arity()));
      }
      Relation& target = db.get(u.relation);
      for (const Tuple& t : add.rows) target.rows.insert(conform(t, s));
      return;
    }
    case StmtKind::kNoOp: return;
  }
}

Database apply_statement(const Statement& u, Database db) {
  execute(u, db);
  return db;
}

Database run_history(const History& h, Database db,
                     const std::function<void(size_t, const Database&)>& observer) {
  for (size_t i = 0; i < h.size(); ++i) {
    execute(h[i], db);
    if (observer) observer(i + 1, db);
  }
  return db;
}

std::set<std::string> touched_relations(const History& h) {
  std::set<std::string> out;
  for (const Statement& u : h) out.insert(u.relation);
  return out;
}

Modification Modification::replace(size_t pos, Statement s) {
  return {ModKind::kReplace, pos, std::move(s)};
}

Modification Modification::insert(size_t pos, Statement s) {
  return {ModKind::kInsert, pos, std::move(s)};
}

Modification Modification::remove(size_t pos) {
  return {ModKind::kDelete, pos, Statement()};
}

History apply_mods(const History& h, const std::vector<Modification>& mods) {
  History out = h;
  for (const Modification& m : mods) {
    size_t limit = out.size() + (m.kind == ModKind::kInsert ? 1 : 0);
    if (m.pos < 1 || m.pos > limit) {
      throw RangeError("modification position " + std::to_string(m.pos) +
                       " outside 1.." + std::to_string(limit));
    }
    switch (m.kind) {
      case ModKind::kReplace: out[m.pos - 1] = m.stmt; break;
      case ModKind::kInsert: out.insert(out.begin() + (m.pos - 1), m.stmt); break;
      case ModKind::kDelete: out.erase(out.begin() + (m.pos - 1)); break;
    }
  }
  return out;
}

size_t NormalizedHistories::original_prefix(size_t pos) const {
  size_t n = 0;
  for (size_t i = 0; i + 1 < pos && i < orig.size(); ++i) n += orig[i] != 0;
  return n;
}

namespace {

struct Slot {
  Statement h, hm;
  bool in_h = true, in_hm = true;
  size_t orig = 0;
};

bool pairable(const Statement& a, const Statement& b) {
  if (a.relation != b.relation) return false;
  return a.kind == b.kind || a.kind == StmtKind::kNoOp || b.kind == StmtKind::kNoOp;
}

}  // namespace

NormalizedHistories normalize_mods(const History& h,
                                   const std::vector<Modification>& mods) {
  std::vector<Slot> slots;
  for (size_t i = 0; i < h.size(); ++i) slots.push_back({h[i], h[i], true, true, i + 1});

  // Index of the pos-th slot present in the modified history; slots.size()
  // for one past the end.
  auto locate = [&](size_t pos, bool allow_end) {
    size_t seen = 0;
    for (size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].in_hm && ++seen == pos) return i;
    }
    if (allow_end && pos == seen + 1) return slots.size();
    throw RangeError("modification position " + std::to_string(pos) +
                     " outside 1.." + std::to_string(seen + (allow_end ? 1 : 0)));
  };

  for (const Modification& m : mods) {
    if (m.pos < 1) throw RangeError("modification positions are 1-based");
    switch (m.kind) {
      case ModKind::kReplace: {
        size_t i = locate(m.pos, false);
        Slot& s = slots[i];
        if (!s.in_h) {
          s.hm = m.stmt;
          s.h = Statement::noop(m.stmt.relation);
        } else if (pairable(s.h, m.stmt)) {
          s.hm = m.stmt;
        } else {
          // Cross-kind replacement: delete here, insert in a fresh slot.
          s.hm = Statement::noop(s.h.relation);
          s.in_hm = false;
          Slot add{Statement::noop(m.stmt.relation), m.stmt, false, true, 0};
          slots.insert(slots.begin() + i + 1, std::move(add));
        }
        break;
      }
      case ModKind::kInsert: {
        size_t i = locate(m.pos, true);
        Slot add{Statement::noop(m.stmt.relation), m.stmt, false, true, 0};
        slots.insert(slots.begin() + i, std::move(add));
        break;
      }
      case ModKind::kDelete: {
        size_t i = locate(m.pos, false);
        if (!slots[i].in_h) {
          slots.erase(slots.begin() + i);
        } else {
          slots[i].hm = Statement::noop(slots[i].h.relation);
          slots[i].in_hm = false;
        }
        break;
      }
    }
  }

  NormalizedHistories out;
  for (size_t i = 0; i < slots.size(); ++i) {
    out.h.push_back(slots[i].h);
    out.hm.push_back(slots[i].hm);
    out.orig.push_back(slots[i].orig);
    if (!equal(slots[i].h, slots[i].hm)) out.mods.push_back(i + 1);
  }
  return out;
}

}  // namespace histif
