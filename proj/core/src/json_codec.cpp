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

#include "histif/json_codec.hpp"

#include "histif/dsl.hpp"
#include "histif/error.hpp"

namespace histif {

namespace {

[[noreturn]] void bad(const std::string& what, const Json& j) {
  std::string dump = j.dump();
  if (dump.size() > 80) dump = dump.substr(0, 77) + "...";
  throw DataError(what + ": " + dump);
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("missing field '") + name + "'", j);
  return j.at(name);
}

std::string str_field(const Json& j, const char* name) {
  const Json& f = field(j, name);
  if (!f.is_string()) bad(std::string("field '") + name + "' must be a string", j);
  return f.get<std::string>();
}

ArithOp arith_from(const std::string& s, const Json& j) {
  if (s == "+") return ArithOp::kAdd;
  if (s == "-") return ArithOp::kSub;
  if (s == "*") return ArithOp::kMul;
  if (s == "/") return ArithOp::kDiv;
  bad("unknown arithmetic operator", j);
}

CmpOp cmp_from(const std::string& s, const Json& j) {
  for (CmpOp op : {CmpOp::kEq, CmpOp::kNe, CmpOp::kLt, CmpOp::kLe, CmpOp::kGt,
                   CmpOp::kGe}) {
    if (cmp_symbol(op) == s) return op;
  }
  if (s == "<>") return CmpOp::kNe;
  bad("unknown comparison operator", j);
}

}  // namespace

Json to_json(const Value& v) {
  switch (v.type()) {
    case Type::kNull: return nullptr;
    case Type::kBoolean: return v.flag();
    case Type::kText: return v.str();
    case Type::kInteger:
      if (v.number().is_small()) return v.number().small();
      return Json{{"int", v.number().to_string()}};
    case Type::kDecimal: return Json{{"dec", v.to_string()}};
  }
  return nullptr;
}

Value value_from_json(const Json& j) {
  if (j.is_null()) return Value::null();
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_string()) return Value::text(j.get<std::string>());
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) {
      return Value::integer(*BigInt::parse(std::to_string(j.get<uint64_t>())));
    }
    return Value::integer(j.get<int64_t>());
  }
  if (j.is_number_float()) return Value::parse_decimal(j.dump());
  if (j.is_object() && j.contains("int")) {
    auto n = BigInt::parse(str_field(j, "int"));
    if (!n) bad("invalid integer", j);
    return Value::integer(*n);
  }
  if (j.is_object() && j.contains("dec")) return Value::parse_decimal(str_field(j, "dec"));
  bad("invalid value", j);
}

Json to_json(const Expr& e) {
  switch (e->kind) {
    case ExprKind::kAttr: return {{"kind", "attr"}, {"name", e->name}};
    case ExprKind::kConst: return {{"kind", "const"}, {"value", to_json(e->value)}};
    case ExprKind::kArith:
      return {{"kind", "arith"},
              {"op", std::string(arith_symbol(e->op))},
              {"left", to_json(e->lhs)},
              {"right", to_json(e->rhs)}};
    case ExprKind::kCase:
      return {{"kind", "case"},
              {"cond", to_json(e->cond)},
              {"then", to_json(e->lhs)},
              {"else", to_json(e->rhs)}};
  }
  return nullptr;
}

Json to_json(const Cond& c) {
  switch (c->kind) {
    case CondKind::kCmp:
      return {{"kind", "cmp"},
              {"op", std::string(cmp_symbol(c->op))},
              {"left", to_json(c->lhs)},
              {"right", to_json(c->rhs)}};
    case CondKind::kAnd:
    case CondKind::kOr: {
      Json args = Json::array();
      for (const Cond& k : c->kids) args.push_back(to_json(k));
      return {{"kind", c->kind == CondKind::kAnd ? "and" : "or"}, {"args", args}};
    }
    case CondKind::kNot: return {{"kind", "not"}, {"arg", to_json(c->kids[0])}};
    case CondKind::kIsNull: return {{"kind", "is_null"}, {"arg", to_json(c->lhs)}};
    case CondKind::kTrue: return {{"kind", "true"}};
    case CondKind::kFalse: return {{"kind", "false"}};
  }
  return nullptr;
}

Expr expr_from_json(const Json& j) {
  std::string kind = str_field(j, "kind");
  if (kind == "attr") return attr(str_field(j, "name"));
  if (kind == "const") return lit(value_from_json(field(j, "value")));
  if (kind == "arith") {
    return arith(arith_from(str_field(j, "op"), j), expr_from_json(field(j, "left")),
                 expr_from_json(field(j, "right")));
  }
  if (kind == "case") {
    return case_when(cond_from_json(field(j, "cond")), expr_from_json(field(j, "then")),
                     expr_from_json(field(j, "else")));
  }
  bad("unknown expression kind", j);
}

Cond cond_from_json(const Json& j) {
  std::string kind = str_field(j, "kind");
  if (kind == "cmp") {
    return cmp(cmp_from(str_field(j, "op"), j), expr_from_json(field(j, "left")),
               expr_from_json(field(j, "right")));
  }
  if (kind == "and" || kind == "or") {
    const Json& args = field(j, "args");
    if (!args.is_array()) bad("'args' must be an array", j);
    std::vector<Cond> kids;
    for (const Json& a : args) kids.push_back(cond_from_json(a));
    return kind == "and" ? and_(std::move(kids)) : or_(std::move(kids));
  }
  if (kind == "not") return not_(cond_from_json(field(j, "arg")));
  if (kind == "is_null") return is_null(expr_from_json(field(j, "arg")));
  if (kind == "true") return true_c();
  if (kind == "false") return false_c();
  bad("unknown condition kind", j);
}

Json to_json(const Query& q) {
  switch (q->kind) {
    case QueryKind::kBase: return {{"kind", "base"}, {"name", q->name}};
    case QueryKind::kSingleton: {
      Json t = Json::array();
      for (const Value& v : q->tuple) t.push_back(to_json(v));
      Json out{{"kind", "singleton"}, {"tuple", t}};
      if (!q->columns.empty()) out["columns"] = q->columns;
      return out;
    }
    case QueryKind::kSelect:
      return {{"kind", "select"}, {"cond", to_json(q->cond)}, {"input", to_json(q->left)}};
    case QueryKind::kProject: {
      Json items = Json::array();
      for (const ProjItem& it : q->items) {
        Json item{{"name", it.name}, {"expr", to_json(it.expr)}};
        if (it.type != Type::kNull) item["type"] = std::string(type_name(it.type));
        items.push_back(item);
      }
      return {{"kind", "project"}, {"items", items}, {"input", to_json(q->left)}};
    }
    case QueryKind::kUnion:
    case QueryKind::kDifference:
    case QueryKind::kJoin: {
      const char* k = q->kind == QueryKind::kUnion        ? "union"
                      : q->kind == QueryKind::kDifference ? "difference"
                                                          : "join";
      return {{"kind", k}, {"left", to_json(q->left)}, {"right", to_json(q->right)}};
    }
  }
  return nullptr;
}

Query query_from_json(const Json& j) {
  std::string kind = str_field(j, "kind");
  if (kind == "base") return base(str_field(j, "name"));
  if (kind == "singleton") {
    Tuple t;
    for (const Json& v : field(j, "tuple")) t.push_back(value_from_json(v));
    std::vector<std::string> cols;
    if (j.contains("columns")) cols = j.at("columns").get<std::vector<std::string>>();
    return singleton(std::move(t), std::move(cols));
  }
  if (kind == "select") {
    return select(cond_from_json(field(j, "cond")), query_from_json(field(j, "input")));
  }
  if (kind == "project") {
    std::vector<ProjItem> items;
    for (const Json& it : field(j, "items")) {
      ProjItem p{str_field(it, "name"), expr_from_json(field(it, "expr")), Type::kNull};
      if (it.contains("type")) p.type = parse_type(str_field(it, "type"));
      items.push_back(std::move(p));
    }
    return project(std::move(items), query_from_json(field(j, "input")));
  }
  Query l, r;
  if (kind == "union" || kind == "difference" || kind == "join") {
    l = query_from_json(field(j, "left"));
    r = query_from_json(field(j, "right"));
  }
  if (kind == "union") return union_(l, r);
  if (kind == "difference") return difference(l, r);
  if (kind == "join") return join(l, r);
  bad("unknown query kind", j);
}

Json to_json(const Statement& s) {
  Json out{{"kind", std::string(kind_name(s.kind))}, {"relation", s.relation}};
  switch (s.kind) {
    case StmtKind::kUpdate: {
      Json sets = Json::array();
      for (const auto& [a, e] : s.sets) sets.push_back({{"attr", a}, {"expr", to_json(e)}});
      out["set"] = sets;
      out["where"] = to_json(s.where);
      break;
    }
    case StmtKind::kDelete: out["where"] = to_json(s.where); break;
    case StmtKind::kInsertTuple: {
      Json vals = Json::array();
      for (const Value& v : s.values) vals.push_back(to_json(v));
      out["values"] = vals;
      break;
    }
    case StmtKind::kInsertQuery: out["query"] = to_json(s.query); break;
    case StmtKind::kNoOp: break;
  }
  return out;
}

Statement statement_from_json(const Json& j) {
  if (j.is_string()) {
    try {
      return parse_statement(j.get<std::string>());
    } catch (const ParseError& e) {
      throw DataError(std::string("statement: ") + e.what());
    }
  }
  std::string kind = str_field(j, "kind");
  std::string rel = str_field(j, "relation");
  auto where = [&] {
    return j.contains("where") ? cond_from_json(j.at("where")) : true_c();
  };
  if (kind == "update") {
    std::vector<std::pair<std::string, Expr>> sets;
    for (const Json& s : field(j, "set")) {
      sets.emplace_back(str_field(s, "attr"), expr_from_json(field(s, "expr")));
    }
    return Statement::update(rel, std::move(sets), where());
  }
  if (kind == "delete") return Statement::delete_(rel, where());
  if (kind == "insert_tuple") {
    Tuple t;
    for (const Json& v : field(j, "values")) t.push_back(value_from_json(v));
    return Statement::insert_tuple(rel, std::move(t));
  }
  if (kind == "insert_query") {
    return Statement::insert_query(rel, query_from_json(field(j, "query")));
  }
  if (kind == "noop") return Statement::noop(rel);
  bad("unknown statement kind", j);
}

Json to_json(const Modification& m) {
  static const char* const kOps[] = {"replace", "insert", "delete"};
  Json out{{"op", kOps[static_cast<int>(m.kind)]}, {"pos", m.pos}};
  if (m.kind != ModKind::kDelete) out["statement"] = to_json(m.stmt);
  return out;
}

Modification modification_from_json(const Json& j) {
  std::string op = str_field(j, "op");
  const Json& p = field(j, "pos");
  if (!p.is_number_integer() || p.get<int64_t>() < 1) bad("'pos' must be a positive integer", j);
  size_t pos = p.get<size_t>();
  if (op == "replace") {
    return Modification::replace(pos, statement_from_json(field(j, "statement")));
  }
  if (op == "insert") return Modification::insert(pos, statement_from_json(field(j, "statement")));
  if (op == "delete") return Modification::remove(pos);
  bad("unknown modification op", j);
}

std::vector<Modification> modifications_from_json(const Json& j) {
  if (!j.is_array()) bad("modifications must be an array", j);
  std::vector<Modification> out;
  for (const Json& m : j) out.push_back(modification_from_json(m));
  return out;
}

Json to_json(const History& h) {
  Json out = Json::array();
  for (const Statement& s : h) out.push_back(to_json(s));
  return out;
}

History history_from_json(const Json& j) {
  if (!j.is_array()) bad("history must be an array", j);
  History h;
  for (const Json& s : j) h.push_back(statement_from_json(s));
  return h;
}

Json to_json(const Schema& s) {
  Json attrs = Json::array();
  for (const Attribute& a : s.attrs()) {
    Json o{{"name", a.name}, {"type", std::string(type_name(a.type))}};
    if (a.key) o["key"] = true;
    attrs.push_back(o);
  }
  return {{"relation", s.relation()}, {"attributes", attrs}};
}

Schema schema_from_json(const Json& j) {
  std::vector<Attribute> attrs;
  const Json& list = field(j, "attributes");
  if (!list.is_array()) bad("'attributes' must be an array", j);
  for (const Json& a : list) {
    Attribute at{str_field(a, "name"), parse_type(str_field(a, "type")), false};
    if (a.contains("key")) at.key = a.at("key").get<bool>();
    attrs.push_back(at);
  }
  try {
    return Schema(str_field(j, "relation"), std::move(attrs));
  } catch (const SchemaError& e) {
    throw DataError(e.what());
  }
}

std::vector<Schema> schemas_from_json(const Json& j) {
  std::vector<Schema> out;
  if (j.is_array()) {
    for (const Json& s : j) out.push_back(schema_from_json(s));
  } else if (j.is_object() && j.contains("relations")) {
    for (const Json& s : j.at("relations")) out.push_back(schema_from_json(s));
  } else {
    out.push_back(schema_from_json(j));
  }
  return out;
}

}  // namespace histif
