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

#include "histif/vc.hpp"

#include <algorithm>
#include <set>

#include "histif/csv.hpp"
#include "histif/error.hpp"

namespace histif {

std::string input_var(const std::string& attribute) { return "x_" + attribute; }

Cond VCDatabase::definition(const Definition& d) const {
  Cond c = eq(attr(d.var), d.expr);
  auto it = vars.find(d.var);
  if (it != vars.end() && it->second.nullable) {
    c = or_(c, and_(is_null(attr(d.var)), is_null(d.expr)));
  }
  return c;
}

Cond VCDatabase::global() const {
  std::vector<Cond> parts;
  for (const Definition& d : defs) parts.push_back(definition(d));
  for (const Cond& c : extra) parts.push_back(c);
  return and_(std::move(parts));
}

std::string VCDatabase::dump() const {
  std::string out = quote_ident(schema.relation()) + "(";
  for (size_t i = 0; i < schema.arity(); ++i) {
    out += (i ? ", " : "") + quote_ident(schema.at(i).name);
  }
  out += ")\n";
  for (const VCTuple& t : tuples) {
    out += "  (";
    for (size_t i = 0; i < t.values.size(); ++i) {
      out += (i ? ", " : "") + to_string(t.values[i]);
    }
    out += ")  phi: " + to_string(t.local) + "\n";
  }
  out += "Phi:\n";
  for (const Definition& d : defs) out += "  " + to_string(definition(d)) + "\n";
  for (const Cond& c : extra) out += "  " + to_string(c) + "\n";
  return out;
}

VCDatabase initial_vcdb(const Schema& s, std::string side,
                        const std::set<std::string>& nullable) {
  VCDatabase v;
  v.schema = s;
  v.side = std::move(side);
  VCTuple t;
  for (const Attribute& a : s.attrs()) {
    std::string x = input_var(a.name);
    t.values.push_back(attr(x));
    v.vars[x] = {a.type, nullable.count(a.name) != 0};
  }
  v.tuples.push_back(std::move(t));
  return v;
}

namespace {

// Whether e may evaluate to Null given the variable table.
bool may_be_null(const Expr& e, const VarTable& vars) {
  switch (e->kind) {
    case ExprKind::kAttr: {
      auto it = vars.find(e->name);
      return it == vars.end() || it->second.nullable;
    }
    case ExprKind::kConst: return e->value.is_null();
    case ExprKind::kArith:
      return e->op == ArithOp::kDiv || may_be_null(e->lhs, vars) ||
             may_be_null(e->rhs, vars);
    case ExprKind::kCase: return may_be_null(e->lhs, vars) || may_be_null(e->rhs, vars);
  }
  return true;
}

std::map<std::string, Expr> tuple_map(const Schema& s, const VCTuple& t) {
  std::map<std::string, Expr> m;
  for (size_t i = 0; i < s.arity(); ++i) m[s.at(i).name] = t.values[i];
  return m;
}

}  // namespace

VCDatabase sym_apply(const Statement& u, const VCDatabase& vdb, int step) {
  if (u.kind == StmtKind::kInsertQuery) {
    throw NotApplicable("symbolic execution does not support INSERT ... SELECT");
  }
  VCDatabase out = vdb;
  out.step = step >= 0 ? step : vdb.step + 1;
  if (u.relation != vdb.schema.relation()) return out;
  const Schema& s = vdb.schema;
  switch (u.kind) {
    case StmtKind::kUpdate: {
      std::vector<Expr> list = u.set_list(s);
      for (size_t k = 0; k < out.tuples.size(); ++k) {
        VCTuple& t = out.tuples[k];
        std::map<std::string, Expr> m = tuple_map(s, vdb.tuples[k]);
        Cond theta = simplify(substitute(u.where, m));
        for (size_t i = 0; i < list.size(); ++i) {
          const Expr& e = list[i];
          if (e->kind == ExprKind::kAttr && e->name == s.at(i).name) continue;
          Expr rhs = simplify(case_when(theta, substitute(e, m), vdb.tuples[k].values[i]));
          if (rhs->kind == ExprKind::kConst) {
            t.values[i] = rhs;
            continue;
          }
          std::string x = input_var(s.at(i).name) + "@" + out.side +
                          std::to_string(out.step);
          if (k > 0) x += "." + std::to_string(k);
          out.vars[x] = {s.at(i).type, may_be_null(rhs, out.vars)};
          out.defs.push_back({x, rhs});
          t.values[i] = attr(x);
        }
      }
      break;
    }
    case StmtKind::kDelete:
      for (size_t k = 0; k < out.tuples.size(); ++k) {
        Cond theta = substitute(u.where, tuple_map(s, vdb.tuples[k]));
        out.tuples[k].local = simplify(and_(vdb.tuples[k].local, not_(theta)));
      }
      break;
    case StmtKind::kInsertTuple: {
      Tuple t = conform(u.values, s);
      VCTuple vt;
      for (const Value& v : t) vt.values.push_back(lit(v));
      out.tuples.push_back(std::move(vt));
      break;
    }
    default: break;
  }
  return out;
}

VCDatabase sym_run(const History& h, VCDatabase vdb) {
  for (const Statement& u : h) vdb = sym_apply(u, vdb);
  return vdb;
}

namespace {

class AssignmentBinder : public Binder {
 public:
  explicit AssignmentBinder(const Assignment& a) {
    for (const auto& [name, v] : a) {
      slots_[name] = static_cast<int>(row_.size());
      row_.push_back(v);
    }
  }
  bool resolve(const std::string& name, int* slot, Type* type) const override {
    auto it = slots_.find(name);
    if (it == slots_.end()) return false;
    *slot = it->second;
    *type = row_[it->second].type();
    return true;
  }
  const Value* row() const { return row_.data(); }

 private:
  std::map<std::string, int> slots_;
  std::vector<Value> row_;
};

}  // namespace

// Binding fixes types from the assigned values; Null-typed slots accept
// any comparison, so this is only used for evaluation.
Value eval_sym(const Expr& e, const Assignment& a) {
  AssignmentBinder b(a);
  return eval(*histif::bind(e, b), b.row());
}

bool eval_sym(const Cond& c, const Assignment& a) {
  AssignmentBinder b(a);
  return eval(*histif::bind(c, b), b.row());
}

std::vector<std::string> free_vars(const VCDatabase& vdb) {
  std::set<std::string> defined;
  for (const Definition& d : vdb.defs) defined.insert(d.var);
  std::vector<std::string> out;
  for (const auto& [name, info] : vdb.vars) {
    if (!defined.count(name)) out.push_back(name);
  }
  return out;
}

std::optional<Relation> instantiate(const VCDatabase& vdb, const Assignment& a) {
  Assignment full = a;
  for (const Definition& d : vdb.defs) {
    Value v = eval_sym(d.expr, full);
    auto it = full.find(d.var);
    if (it == full.end()) {
      full[d.var] = v;
    } else if (!(it->second == v)) {
      return std::nullopt;
    }
  }
  for (const Cond& c : vdb.extra) {
    if (!eval_sym(c, full)) return std::nullopt;
  }
  Relation r;
  r.schema = vdb.schema;
  for (const VCTuple& t : vdb.tuples) {
    if (!eval_sym(t.local, full)) continue;
    Tuple row;
    for (size_t i = 0; i < t.values.size(); ++i) {
      Value v = eval_sym(t.values[i], full);
      Type ty = vdb.schema.at(i).type;
      row.push_back(v.is_null() || v.type() == ty ? v : coerce(v, ty));
    }
    r.rows.insert(std::move(row));
  }
  return r;
}

std::vector<Relation> worlds(const VCDatabase& vdb,
                             const std::map<std::string, std::vector<Value>>& domains) {
  std::vector<std::string> vars = free_vars(vdb);
  size_t total = 1;
  for (const std::string& v : vars) {
    auto it = domains.find(v);
    if (it == domains.end() || it->second.empty()) {
      throw RangeError("no domain for variable " + v);
    }
    total *= it->second.size();
    if (total > 1000000) throw RangeError("world enumeration exceeds 10^6 assignments");
  }
  std::vector<Relation> out;
  std::vector<size_t> idx(vars.size(), 0);
  for (size_t n = 0; n < total; ++n) {
    Assignment a;
    for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = domains.at(vars[i])[idx[i]];
    if (auto r = instantiate(vdb, a)) out.push_back(std::move(*r));
    for (size_t i = 0; i < idx.size(); ++i) {
      if (++idx[i] < domains.at(vars[i]).size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

namespace {

uint64_t fnv(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Cond membership(const Expr& x, const std::set<Value>& vals) {
  std::vector<Value> v(vals.begin(), vals.end());
  return in_set(x, v);
}

}  // namespace

std::string default_group_attribute(const Relation& r) {
  std::string best;
  size_t best_count = 0;
  for (size_t i = 0; i < r.schema.arity(); ++i) {
    const Attribute& a = r.schema.at(i);
    if (a.type != Type::kText || a.key) continue;
    std::set<Value> distinct;
    for (const Tuple& t : r.rows) distinct.insert(t[i]);
    if (best.empty() || distinct.size() < best_count) {
      best = a.name;
      best_count = distinct.size();
    }
  }
  if (!best.empty()) return best;
  for (const Attribute& a : r.schema.attrs()) {
    if (!a.key) return a.name;
  }
  return r.schema.arity() ? r.schema.at(0).name : "";
}

Cond compress(const Relation& r, const CompressOptions& opts) {
  if (r.rows.empty()) return false_c();
  if (opts.groups < 1) throw RangeError("group count must be at least 1");
  const Schema& s = r.schema;
  std::string gname = opts.group_by.empty() ? default_group_attribute(r) : opts.group_by;
  int g = s.index_of(gname);
  if (g < 0) throw SchemaError("unknown grouping attribute " + gname);

  std::set<Value> distinct;
  for (const Tuple& t : r.rows) distinct.insert(t[g]);
  size_t k = static_cast<size_t>(opts.groups);
  // Group key: the value itself when there are few enough, else a bucket.
  std::map<Value, size_t> bucket;
  if (distinct.size() <= k) {
    size_t i = 0;
    for (const Value& v : distinct) bucket[v] = i++;
  } else {
    for (const Value& v : distinct) bucket[v] = fnv(csv_field(v)) % k;
  }
  std::map<size_t, std::vector<const Tuple*>> groups;
  for (const Tuple& t : r.rows) groups[bucket[t[g]]].push_back(&t);

  std::vector<size_t> order;  // group attribute first, then schema order
  order.push_back(g);
  for (size_t i = 0; i < s.arity(); ++i) {
    if (static_cast<int>(i) != g) order.push_back(i);
  }

  // Emit groups ordered by their smallest group value.
  std::vector<std::pair<Value, const std::vector<const Tuple*>*>> sorted;
  for (const auto& [b, rows] : groups) {
    Value lo = (*rows[0])[g];
    for (const Tuple* t : rows) lo = std::min(lo, (*t)[g]);
    sorted.emplace_back(lo, &rows);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<Cond> disjuncts;
  for (const auto& [lo, rows] : sorted) {
    std::vector<Cond> parts;
    for (size_t i : order) {
      const Attribute& a = s.at(i);
      Expr x = attr(input_var(a.name));
      std::set<Value> vals;
      bool has_null = false;
      for (const Tuple* t : *rows) {
        if ((*t)[i].is_null()) {
          has_null = true;
        } else {
          vals.insert((*t)[i]);
        }
      }
      Cond c;
      if (vals.empty()) {
        c = false_c();
      } else if (vals.size() == 1) {
        c = eq(x, lit(*vals.begin()));
      } else if (a.type == Type::kText || a.type == Type::kBoolean ||
                 (a.key && vals.size() <= opts.max_members)) {
        if (vals.size() > opts.max_members) continue;
        c = membership(x, vals);
      } else {
        c = and_(ge(x, lit(*vals.begin())), le(x, lit(*vals.rbegin())));
      }
      if (has_null) c = is_false(c) ? is_null(x) : or_(c, is_null(x));
      parts.push_back(c);
    }
    disjuncts.push_back(and_(std::move(parts)));
  }
  return or_(std::move(disjuncts));
}

}  // namespace histif
