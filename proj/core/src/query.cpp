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

#include "histif/query.hpp"

#include <algorithm>

#include "histif/error.hpp"

namespace histif {

namespace {

Query make(QueryNode n) { return std::make_shared<const QueryNode>(std::move(n)); }

Type unify_column(Type a, Type b) {
  if (a == Type::kNull) return b;
  // The left operand fixes the column type; numeric values from the right
  // are converted on the way out.
  if (b == Type::kNull || a == b) return a;
  if (is_numeric(a) && is_numeric(b)) return a;
  throw SchemaError("incompatible column types " + std::string(type_name(a)) +
                    " and " + std::string(type_name(b)));
}

}  // namespace

Query base(std::string name) {
  QueryNode n{QueryKind::kBase};
  n.name = std::move(name);
  return make(std::move(n));
}

Query singleton(Tuple t, std::vector<std::string> columns) {
  QueryNode n{QueryKind::kSingleton};
  n.tuple = std::move(t);
  n.columns = std::move(columns);
  return make(std::move(n));
}

Query select(Cond c, Query in) {
  QueryNode n{QueryKind::kSelect};
  n.cond = std::move(c);
  n.left = std::move(in);
  return make(std::move(n));
}

Query project(std::vector<ProjItem> items, Query in) {
  QueryNode n{QueryKind::kProject};
  n.items = std::move(items);
  n.left = std::move(in);
  return make(std::move(n));
}

Query union_(Query l, Query r) {
  QueryNode n{QueryKind::kUnion};
  n.left = std::move(l);
  n.right = std::move(r);
  return make(std::move(n));
}

Query difference(Query l, Query r) {
  QueryNode n{QueryKind::kDifference};
  n.left = std::move(l);
  n.right = std::move(r);
  return make(std::move(n));
}

Query join(Query l, Query r) {
  QueryNode n{QueryKind::kJoin};
  n.left = std::move(l);
  n.right = std::move(r);
  return make(std::move(n));
}

Schema output_schema(const Query& q, const Database& db) {
  switch (q->kind) {
    case QueryKind::kBase: return db.schema(q->name);
    case QueryKind::kSingleton: {
      std::vector<Attribute> attrs;
      for (size_t i = 0; i < q->tuple.size(); ++i) {
        std::string name = i < q->columns.size() ? q->columns[i]
                                                 : "c" + std::to_string(i + 1);
        attrs.push_back({name, q->tuple[i].type()});
      }
      return Schema("", std::move(attrs));
    }
    case QueryKind::kSelect: return output_schema(q->left, db);
    case QueryKind::kProject: {
      Schema in = output_schema(q->left, db);
      std::vector<Expr> exprs;
      for (const ProjItem& it : q->items) exprs.push_back(it.expr);
      auto bound = bind_all(exprs, SchemaBinder(in));
      std::vector<Attribute> attrs;
      for (size_t i = 0; i < q->items.size(); ++i) {
        Type t = q->items[i].type != Type::kNull ? q->items[i].type : bound[i]->type;
        bool key = false;
        if (bound[i]->kind == ExprKind::kAttr) key = in.at(bound[i]->slot).key;
        attrs.push_back({q->items[i].name, t, key});
      }
      return Schema(in.relation(), std::move(attrs));
    }
    case QueryKind::kUnion:
    case QueryKind::kDifference: {
      Schema l = output_schema(q->left, db);
      Schema r = output_schema(q->right, db);
      if (l.arity() != r.arity()) {
        throw SchemaError("set operation over arities " + std::to_string(l.arity()) +
                          " and " + std::to_string(r.arity()));
      }
      std::vector<Attribute> attrs = l.attrs();
      for (size_t i = 0; i < attrs.size(); ++i) {
        attrs[i].type = unify_column(attrs[i].type, r.at(i).type);
      }
      return Schema(l.relation().empty() ? r.relation() : l.relation(), std::move(attrs));
    }
    case QueryKind::kJoin: {
      Schema l = output_schema(q->left, db);
      Schema r = output_schema(q->right, db);
      std::vector<Attribute> attrs = l.attrs();
      attrs.insert(attrs.end(), r.attrs().begin(), r.attrs().end());
      return Schema(l.relation(), std::move(attrs));
    }
  }
  return Schema();
}

std::set<std::string> base_relations(const Query& q) {
  std::set<std::string> out;
  std::function<void(const Query&)> walk = [&](const Query& n) {
    if (!n) return;
    if (n->kind == QueryKind::kBase) out.insert(n->name);
    walk(n->left);
    walk(n->right);
  };
  walk(q);
  return out;
}

bool equal(const Query& a, const Query& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case QueryKind::kBase: return a->name == b->name;
    case QueryKind::kSingleton: return a->tuple == b->tuple && a->columns == b->columns;
    case QueryKind::kSelect: return equal(a->cond, b->cond) && equal(a->left, b->left);
    case QueryKind::kProject:
      if (a->items.size() != b->items.size()) return false;
      for (size_t i = 0; i < a->items.size(); ++i) {
        if (a->items[i].name != b->items[i].name ||
            a->items[i].type != b->items[i].type ||
            !equal(a->items[i].expr, b->items[i].expr)) {
          return false;
        }
      }
      return equal(a->left, b->left);
    default:
      return equal(a->left, b->left) && equal(a->right, b->right);
  }
}

std::string to_string(const Query& q) {
  switch (q->kind) {
    case QueryKind::kBase: return quote_ident(q->name);
    case QueryKind::kSingleton: return "{" + tuple_to_string(q->tuple) + "}";
    case QueryKind::kSelect:
      return "SELECT[" + to_string(q->cond) + "](" + to_string(q->left) + ")";
    case QueryKind::kProject: {
      std::string out = "PROJECT[";
      for (size_t i = 0; i < q->items.size(); ++i) {
        if (i) out += ", ";
        const ProjItem& it = q->items[i];
        std::string e = to_string(it.expr);
        out += e;
        if (e != quote_ident(it.name)) out += " AS " + quote_ident(it.name);
      }
      return out + "](" + to_string(q->left) + ")";
    }
    case QueryKind::kUnion:
      return "UNION(" + to_string(q->left) + ", " + to_string(q->right) + ")";
    case QueryKind::kDifference:
      return "DIFF(" + to_string(q->left) + ", " + to_string(q->right) + ")";
    case QueryKind::kJoin:
      return "JOIN(" + to_string(q->left) + ", " + to_string(q->right) + ")";
  }
  return "";
}

namespace {

// Push-based evaluation: each operator turns a downstream sink into an
// upstream one.
class Evaluator {
 public:
  explicit Evaluator(const Database& db) : db_(db) {}

  void run(const Query& q, const TupleSink& sink) {
    switch (q->kind) {
      case QueryKind::kBase:
        for (const Tuple& t : db_.get(q->name).rows) sink(t);
        return;
      case QueryKind::kSingleton:
        sink(q->tuple);
        return;
      case QueryKind::kSelect: {
        Schema in = output_schema(q->left, db_);
        Cond c = histif::bind(q->cond, SchemaBinder(in));
        const CondNode* cn = c.get();
        run(q->left, [&](const Tuple& t) {
          if (eval(*cn, t.data())) sink(t);
        });
        return;
      }
      case QueryKind::kProject: {
        Schema in = output_schema(q->left, db_);
        Schema out = output_schema(q, db_);
        std::vector<Expr> exprs;
        for (const ProjItem& it : q->items) exprs.push_back(it.expr);
        std::vector<Expr> bound = bind_all(exprs, SchemaBinder(in));
        // Case conditions shared between items are evaluated once per row.
        std::vector<const CondNode*> conds;
        std::vector<int> cond_of(bound.size(), -1);
        for (size_t i = 0; i < bound.size(); ++i) {
          if (bound[i]->kind != ExprKind::kCase) continue;
          const CondNode* c = bound[i]->cond.get();
          auto it = std::find(conds.begin(), conds.end(), c);
          cond_of[i] = static_cast<int>(it - conds.begin());
          if (it == conds.end()) conds.push_back(c);
        }
        std::vector<Type> types;
        for (const Attribute& a : out.attrs()) types.push_back(a.type);
        Tuple buf(bound.size());
        std::vector<char> fired(conds.size());
        run(q->left, [&](const Tuple& t) {
          const Value* row = t.data();
          for (size_t c = 0; c < conds.size(); ++c) fired[c] = eval(*conds[c], row);
          for (size_t i = 0; i < bound.size(); ++i) {
            const ExprNode& e = *bound[i];
            Value v;
            if (cond_of[i] >= 0) {
              v = fired[cond_of[i]] ? eval(*e.lhs, row) : eval(*e.rhs, row);
            } else if (e.kind == ExprKind::kAttr) {
              buf[i] = row[e.slot];
              if (buf[i].type() != types[i] && !buf[i].is_null()) {
                buf[i] = coerce(buf[i], types[i]);
              }
              continue;
            } else {
              v = eval(e, row);
            }
            if (v.type() != types[i] && !v.is_null() && types[i] != Type::kNull) {
              v = coerce(v, types[i]);
            }
            buf[i] = std::move(v);
          }
          sink(buf);
        });
        return;
      }
      case QueryKind::kUnion: {
        Schema out = output_schema(q, db_);
        TupleSink conforming = [&](const Tuple& t) {
          bool ok = true;
          for (size_t i = 0; i < t.size() && ok; ++i) {
            ok = t[i].is_null() || t[i].type() == out.at(i).type;
          }
          if (ok) {
            sink(t);
            return;
          }
          Tuple c(t);
          for (size_t i = 0; i < c.size(); ++i) {
            if (!c[i].is_null()) c[i] = coerce(c[i], out.at(i).type);
          }
          sink(c);
        };
        run(q->left, conforming);
        run(q->right, conforming);
        return;
      }
      case QueryKind::kDifference: {
        output_schema(q, db_);
        TupleSet right;
        run(q->right, [&](const Tuple& t) { right.insert(t); });
        run(q->left, [&](const Tuple& t) {
          if (!right.count(t)) sink(t);
        });
        return;
      }
      case QueryKind::kJoin: {
        std::vector<Tuple> right;
        {
          TupleSet seen;
          run(q->right, [&](const Tuple& t) { seen.insert(t); });
          right.assign(seen.begin(), seen.end());
        }
        Tuple buf;
        run(q->left, [&](const Tuple& l) {
          for (const Tuple& r : right) {
            buf.assign(l.begin(), l.end());
            buf.insert(buf.end(), r.begin(), r.end());
            sink(buf);
          }
        });
        return;
      }
    }
  }

 private:
  const Database& db_;
};

}  // namespace

void stream_query(const Query& q, const Database& db, const TupleSink& sink) {
  Evaluator ev(db);
  ev.run(q, sink);
}

Relation eval_query(const Query& q, const Database& db) {
  Relation out;
  out.schema = output_schema(q, db);
  stream_query(q, db, [&](const Tuple& t) { out.rows.insert(t); });
  return out;
}

}  // namespace histif
