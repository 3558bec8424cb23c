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

#include "histif/reenact.hpp"

#include <algorithm>

#include "json.hpp"

#include "histif/csv.hpp"
#include "histif/error.hpp"
#include "histif/json_codec.hpp"

namespace histif {

Query reenact_statement(const Statement& u, const Schema& s, Query input) {
  if (!input) input = base(u.relation);
  switch (u.kind) {
    case StmtKind::kUpdate: {
      std::vector<Expr> list = u.set_list(s);
      std::vector<ProjItem> items;
      for (size_t i = 0; i < list.size(); ++i) {
        const Attribute& a = s.at(i);
        Expr e = list[i];
        bool identity = e->kind == ExprKind::kAttr && e->name == a.name;
        if (!identity && !is_true(u.where)) e = case_when(u.where, e, attr(a.name));
        items.push_back({a.name, e, a.type});
      }
      return project(std::move(items), input);
    }
    case StmtKind::kDelete: return select(not_(u.where), input);
    case StmtKind::kInsertTuple:
      return union_(input, singleton(conform(u.values, s), s.names()));
    case StmtKind::kInsertQuery: return union_(input, u.query);
    case StmtKind::kNoOp: return input;
  }
  return input;
}

Query replace_bases(const Query& q, const QueryMap& m) {
  switch (q->kind) {
    case QueryKind::kBase: {
      auto it = m.find(q->name);
      return it == m.end() ? q : it->second;
    }
    case QueryKind::kSingleton: return q;
    case QueryKind::kSelect: {
      Query in = replace_bases(q->left, m);
      return in == q->left ? q : select(q->cond, in);
    }
    case QueryKind::kProject: {
      Query in = replace_bases(q->left, m);
      return in == q->left ? q : project(q->items, in);
    }
    default: {
      Query l = replace_bases(q->left, m);
      Query r = replace_bases(q->right, m);
      if (l == q->left && r == q->right) return q;
      if (q->kind == QueryKind::kUnion) return union_(l, r);
      if (q->kind == QueryKind::kDifference) return difference(l, r);
      return join(l, r);
    }
  }
}

QueryMap reenact_history(const History& h, const Database& db, const QueryMap& inputs) {
  QueryMap cur = inputs;
  auto current = [&](const std::string& rel) {
    auto it = cur.find(rel);
    return it == cur.end() ? base(rel) : it->second;
  };
  for (const Statement& u : h) {
    Query in = current(u.relation);
    if (u.kind == StmtKind::kInsertQuery) {
      QueryMap sources;
      for (const std::string& r : base_relations(u.query)) sources[r] = current(r);
      cur[u.relation] = union_(in, replace_bases(u.query, sources));
    } else {
      cur[u.relation] = reenact_statement(u, db.schema(u.relation), in);
    }
  }
  return cur;
}

Query reenact_history(const History& h, const std::string& rel, const Database& db) {
  QueryMap m = reenact_history(h, db);
  auto it = m.find(rel);
  return it == m.end() ? base(rel) : it->second;
}

SplitHistory split_inserts(const History& h) {
  SplitHistory out;
  out.original = h;
  out.main = h;
  for (size_t i = 0; i < h.size(); ++i) {
    if (h[i].kind != StmtKind::kInsertTuple) continue;
    bool read_later = false;
    for (size_t j = i + 1; j < h.size() && !read_later; ++j) {
      if (h[j].kind != StmtKind::kInsertQuery) continue;
      read_later = base_relations(h[j].query).count(h[i].relation) != 0;
    }
    if (read_later) continue;
    out.inserts.push_back(i);
    out.main[i] = Statement::noop(h[i].relation);
  }
  return out;
}

Query insert_branch(const SplitHistory& s, const std::string& rel, const Database& db,
                    const QueryMap& inputs) {
  Query out;
  for (size_t pos : s.inserts) {
    const Statement& u = s.original[pos];
    if (u.relation != rel) continue;
    const Schema& schema = db.schema(rel);
    QueryMap in = inputs;
    in[rel] = singleton(conform(u.values, schema), schema.names());
    History suffix(s.main.begin() + pos + 1, s.main.end());
    QueryMap m = reenact_history(suffix, db, in);
    Query q = m.at(rel);
    out = out ? union_(out, q) : q;
  }
  return out;
}

std::pair<Query, Query> split_insert_queries(const History& h, const std::string& rel,
                                             const Database& db) {
  SplitHistory s = split_inserts(h);
  return {reenact_history(s.main, rel, db), insert_branch(s, rel, db)};
}

SignedDelta delta(const Relation& cur, const Relation& mod) {
  if (cur.schema.arity() != mod.schema.arity()) {
    throw SchemaError("delta over relations of different arity");
  }
  SignedDelta d;
  d.schema = cur.schema;
  for (const Tuple& t : cur.rows) {
    if (!mod.rows.count(t)) d.minus.insert(t);
  }
  for (const Tuple& t : mod.rows) {
    if (!cur.rows.count(t)) d.plus.insert(t);
  }
  return d;
}

Query delta_query(const Query& cur, const Query& mod, const Schema& s) {
  auto signed_items = [&](const char* sign) {
    std::vector<ProjItem> items{{"sign", lit(Value::text(sign)), Type::kText}};
    for (const Attribute& a : s.attrs()) items.push_back({a.name, attr(a.name), a.type});
    return items;
  };
  return union_(project(signed_items("-"), difference(cur, mod)),
                project(signed_items("+"), difference(mod, cur)));
}

SignedDelta delta_from_signed(const Relation& signed_rows, const Schema& s) {
  SignedDelta d;
  d.schema = s;
  for (const Tuple& t : signed_rows.rows) {
    Tuple body(t.begin() + 1, t.end());
    if (t[0].str() == "-") {
      d.minus.insert(std::move(body));
    } else {
      d.plus.insert(std::move(body));
    }
  }
  return d;
}

namespace {

std::vector<std::pair<std::string, const Tuple*>> ordered(const TupleSet& rows) {
  std::vector<std::pair<std::string, const Tuple*>> out;
  out.reserve(rows.size());
  for (const Tuple& t : rows) out.emplace_back(csv_row(t), &t);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace

std::string delta_csv(const DeltaSet& d) {
  std::string out;
  for (const auto& [rel, sd] : d) {
    if (sd.empty()) continue;
    out += "# " + rel + "\nsign";
    for (const Attribute& a : sd.schema.attrs()) out += "," + csv_escape(a.name);
    out += "\n";
    for (const auto& [row, t] : ordered(sd.minus)) out += "-," + row + "\n";
    for (const auto& [row, t] : ordered(sd.plus)) out += "+," + row + "\n";
  }
  return out;
}

std::string delta_jsonl(const DeltaSet& d) {
  std::string out;
  for (const auto& [rel, sd] : d) {
    for (const char* sign : {"-", "+"}) {
      for (const auto& [row, t] : ordered(*sign == '-' ? sd.minus : sd.plus)) {
        nlohmann::ordered_json obj;
        obj["relation"] = rel;
        obj["sign"] = sign;
        nlohmann::ordered_json fields = nlohmann::ordered_json::object();
        for (size_t i = 0; i < t->size(); ++i) {
          fields[sd.schema.at(i).name] = nlohmann::ordered_json(to_json((*t)[i]));
        }
        obj["row"] = fields;
        out += obj.dump() + "\n";
      }
    }
  }
  return out;
}

size_t delta_size(const DeltaSet& d) {
  size_t n = 0;
  for (const auto& [rel, sd] : d) n += sd.minus.size() + sd.plus.size();
  return n;
}

}  // namespace histif
