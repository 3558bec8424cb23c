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

#include "testkit.hpp"

#include <algorithm>
#include <sstream>

#include "histif/dsl.hpp"

namespace histif::testkit {

Value I(int64_t v) { return Value::integer(v); }
Value S(const char* s) { return Value::text(s); }

Tuple row(std::initializer_list<Value> vs) { return Tuple(vs); }

Schema order_schema() {
  return Schema("Order", {{"ID", Type::kInteger, true},
                          {"Customer", Type::kText},
                          {"Country", Type::kText},
                          {"Price", Type::kInteger},
                          {"ShippingFee", Type::kInteger}});
}

Database order_db() {
  Database db;
  db.add_relation(order_schema());
  db.insert("Order", {I(11), S("Susan"), S("UK"), I(20), I(5)});
  db.insert("Order", {I(12), S("Alex"), S("UK"), I(50), I(5)});
  db.insert("Order", {I(13), S("Jack"), S("US"), I(60), I(3)});
  db.insert("Order", {I(14), S("Mark"), S("US"), I(30), I(4)});
  return db;
}

Statement u1() { return parse_statement("UPDATE Order SET ShippingFee = 0 WHERE Price >= 50"); }
Statement u1_prime() {
  return parse_statement("UPDATE Order SET ShippingFee = 0 WHERE Price >= 60");
}
Statement u2() {
  return parse_statement(
      "UPDATE Order SET ShippingFee = ShippingFee + 5 WHERE Country = 'UK' AND Price <= 100");
}
Statement u3() {
  return parse_statement(
      "UPDATE Order SET ShippingFee = ShippingFee - 2 WHERE Price <= 30 AND ShippingFee >= 10");
}
History order_history() { return {u1(), u2(), u3()}; }
std::vector<Modification> order_mods() { return {Modification::replace(1, u1_prime())}; }

DeltaSet order_expected_delta() {
  SignedDelta d;
  d.schema = order_schema();
  d.minus.insert({I(12), S("Alex"), S("UK"), I(50), I(5)});
  d.plus.insert({I(12), S("Alex"), S("UK"), I(50), I(10)});
  return {{"Order", d}};
}

std::vector<int64_t> fees(const Database& db) {
  std::vector<int64_t> out;
  for (const Tuple& t : db.get("Order").sorted()) out.push_back(t[4].number().small());
  return out;
}

Schema r_schema() {
  return Schema("R", {{"K", Type::kInteger, true},
                      {"A", Type::kInteger},
                      {"B", Type::kInteger},
                      {"T", Type::kText}});
}

Schema s_schema() {
  return Schema("S",
                {{"SK", Type::kInteger, true}, {"SA", Type::kInteger}, {"SB", Type::kInteger}});
}

namespace {

const std::vector<std::string> kTexts = {"a", "b", "c", "d", "e"};

Value random_int(Rand& r, const GenOptions& o) {
  if (o.nulls && r.chance(0.08)) return Value::null();
  return I(r.range(0, o.domain - 1));
}

Value random_text(Rand& r, const GenOptions& o) {
  if (o.nulls && r.chance(0.08)) return Value::null();
  int n = std::min<int>(o.domain, static_cast<int>(kTexts.size()));
  return Value::text(kTexts[static_cast<size_t>(r.range(0, n - 1))]);
}

std::vector<std::string> numeric_attrs(const Schema& s) {
  std::vector<std::string> out;
  for (const Attribute& a : s.attrs()) {
    if (is_numeric(a.type)) out.push_back(a.name);
  }
  return out;
}

Expr const_expr(Rand& r, const GenOptions& o) {
  if (o.nulls && !o.linear && r.chance(0.05)) return lit(Value::null());
  return lit(r.range(-1, o.domain));
}

}  // namespace

Database random_db(Rand& r, const GenOptions& o, size_t max_tuples) {
  Database db;
  db.add_relation(r_schema());
  if (o.second_relation) db.add_relation(s_schema());
  size_t n = static_cast<size_t>(r.range(0, static_cast<int64_t>(max_tuples)));
  for (size_t i = 0; i < n; ++i) {
    Value k = o.keyed ? I(static_cast<int64_t>(i)) : random_int(r, o);
    db.insert("R", {k, random_int(r, o), random_int(r, o), random_text(r, o)});
  }
  if (o.second_relation) {
    size_t m = static_cast<size_t>(r.range(0, static_cast<int64_t>(max_tuples)));
    for (size_t i = 0; i < m; ++i) {
      Value k = o.keyed ? I(static_cast<int64_t>(i)) : random_int(r, o);
      db.insert("S", {k, random_int(r, o), random_int(r, o)});
    }
  }
  return db;
}

Expr random_num_expr(Rand& r, const GenOptions& o, const std::vector<std::string>& attrs,
                     int depth) {
  if (depth <= 0 || r.chance(0.4)) {
    if (r.chance(0.65)) return attr(r.pick(attrs));
    return const_expr(r, o);
  }
  auto sub_expr = [&] { return random_num_expr(r, o, attrs, depth - 1); };
  switch (r.range(0, 4)) {
    case 0: return add(sub_expr(), sub_expr());
    case 1: return sub(sub_expr(), sub_expr());
    case 2: return mul(random_num_expr(r, o, attrs, depth - 1), lit(r.range(-2, 3)));
    case 3:
      if (o.division && !o.linear) return div(sub_expr(), sub_expr());
      [[fallthrough]];
    default: {
      // Case conditions compare attributes with constants or each other.
      Cond c = cmp(static_cast<CmpOp>(r.range(0, 5)), attr(r.pick(attrs)),
                   r.chance(0.5) ? attr(r.pick(attrs)) : lit(r.range(0, o.domain - 1)));
      return case_when(c, random_num_expr(r, o, attrs, depth - 1),
                       random_num_expr(r, o, attrs, depth - 1));
    }
  }
}

Cond random_cond(Rand& r, const GenOptions& o, const Schema& s, int depth) {
  std::vector<std::string> nums = numeric_attrs(s);
  std::vector<std::string> texts;
  for (const Attribute& a : s.attrs()) {
    if (a.type == Type::kText) texts.push_back(a.name);
  }
  if (depth <= 0 || r.chance(0.45)) {
    double p = r.range(0, 99) / 100.0;
    if (!texts.empty() && p < 0.15) {
      Value v = Value::text(kTexts[static_cast<size_t>(
          r.range(0, std::min<int>(o.domain, static_cast<int>(kTexts.size())) - 1))]);
      return cmp(r.chance(0.7) ? CmpOp::kEq : CmpOp::kNe, attr(r.pick(texts)), lit(v));
    }
    if (o.nulls && p < 0.22) {
      return is_null(attr(r.pick(r.chance(0.7) || texts.empty() ? nums : texts)));
    }
    if (p < 0.25) return r.chance(0.5) ? true_c() : false_c();
    Expr lhs = r.chance(0.6) ? attr(r.pick(nums)) : random_num_expr(r, o, nums, 1);
    Expr rhs = r.chance(0.6) ? lit(r.range(0, o.domain - 1)) : random_num_expr(r, o, nums, 1);
    return cmp(static_cast<CmpOp>(r.range(0, 5)), lhs, rhs);
  }
  switch (r.range(0, 2)) {
    case 0: return and_(random_cond(r, o, s, depth - 1), random_cond(r, o, s, depth - 1));
    case 1: return or_(random_cond(r, o, s, depth - 1), random_cond(r, o, s, depth - 1));
    default: return not_(random_cond(r, o, s, depth - 1));
  }
}

namespace {

Statement random_update(Rand& r, const GenOptions& o, const Schema& s) {
  std::vector<std::pair<std::string, Expr>> sets;
  std::vector<std::string> nums = numeric_attrs(s);
  std::vector<std::string> targets;
  for (const Attribute& a : s.attrs()) {
    if (!(a.key && o.keyed)) targets.push_back(a.name);
  }
  std::shuffle(targets.begin(), targets.end(), r.engine());
  size_t n = static_cast<size_t>(r.range(1, 2));
  for (size_t i = 0; i < n && i < targets.size(); ++i) {
    const Attribute& a = s.at(static_cast<size_t>(s.index_of(targets[i])));
    if (a.type == Type::kText) {
      sets.emplace_back(a.name, lit(random_text(r, o)));
    } else {
      sets.emplace_back(a.name, random_num_expr(r, o, nums, o.max_depth));
    }
  }
  return Statement::update(s.relation(), sets, random_cond(r, o, s, o.max_depth));
}

Statement random_insert(Rand& r, const GenOptions& o, const Schema& s, int64_t* next_key) {
  Tuple t;
  for (const Attribute& a : s.attrs()) {
    if (a.key && o.keyed) {
      t.push_back(I((*next_key)++));
    } else if (a.type == Type::kText) {
      t.push_back(random_text(r, o));
    } else {
      t.push_back(random_int(r, o));
    }
  }
  return Statement::insert_tuple(s.relation(), t);
}

Statement random_insert_query(Rand& r, const GenOptions& o, int64_t* next_key) {
  Schema rs = r_schema(), ss = s_schema();
  if (o.keyed || (o.second_relation && r.chance(0.5))) {
    // R <- S, keys shifted into a fresh block.
    int64_t off = *next_key;
    *next_key += 1000;
    std::vector<ProjItem> items = {
        {"K", add(attr("SK"), lit(off))},
        {"A", o.keyed ? attr("SA") : random_num_expr(r, o, {"SA", "SB"}, 1)},
        {"B", attr("SB")},
        {"T", lit(Value::text(kTexts[static_cast<size_t>(r.range(0, 2))]))}};
    return Statement::insert_query("R",
                                   project(items, select(random_cond(r, o, ss, 1), base("S"))));
  }
  if (o.second_relation && r.chance(0.5)) {
    Cond on = and_(eq(attr("A"), attr("SA")), random_cond(r, o, rs, 1));
    std::vector<ProjItem> items = {
        {"K", attr("SK")}, {"A", attr("B")}, {"B", add(attr("SB"), lit(1))}, {"T", attr("T")}};
    return Statement::insert_query("R", project(items, select(on, join(base("R"), base("S")))));
  }
  std::vector<ProjItem> items = {{"K", add(attr("K"), lit(1))},
                                 {"A", random_num_expr(r, o, {"A", "B"}, 1)},
                                 {"B", attr("B")},
                                 {"T", attr("T")}};
  return Statement::insert_query("R", project(items, select(random_cond(r, o, rs, 1), base("R"))));
}

}  // namespace

Statement random_statement(Rand& r, const GenOptions& o, const StmtMix& mix, int64_t* next_key) {
  Schema s = (o.second_relation && r.chance(0.3)) ? s_schema() : r_schema();
  int iq = o.insert_query ? mix.insert_query : 0;
  int total = mix.update + mix.del + mix.insert + iq + mix.noop;
  int64_t x = r.range(0, total - 1);
  if ((x -= mix.update) < 0) return random_update(r, o, s);
  if ((x -= mix.del) < 0) {
    return Statement::delete_(s.relation(), random_cond(r, o, s, o.max_depth));
  }
  if ((x -= mix.insert) < 0) return random_insert(r, o, s, next_key);
  if ((x -= iq) < 0) return random_insert_query(r, o, next_key);
  return Statement::noop(s.relation());
}

History random_history(Rand& r, const GenOptions& o, const StmtMix& mix, size_t len,
                       int64_t* next_key) {
  History h;
  for (size_t i = 0; i < len; ++i) h.push_back(random_statement(r, o, mix, next_key));
  return h;
}

Modification random_modification(Rand& r, const GenOptions& o, const StmtMix& mix,
                                 size_t history_len, int64_t* next_key) {
  int64_t n = static_cast<int64_t>(history_len);
  double p = r.range(0, 99) / 100.0;
  if (n == 0 || p < 0.2) {
    return Modification::insert(static_cast<size_t>(r.range(1, n + 1)),
                                random_statement(r, o, mix, next_key));
  }
  if (p < 0.35) return Modification::remove(static_cast<size_t>(r.range(1, n)));
  return Modification::replace(static_cast<size_t>(r.range(1, n)),
                               random_statement(r, o, mix, next_key));
}

WorldSet world_set(const std::vector<Relation>& worlds) {
  WorldSet out;
  for (const Relation& w : worlds) out.insert(w.sorted());
  return out;
}

DeltaSet full_delta(const Database& a, const Database& b) {
  DeltaSet out;
  for (const auto& [name, rel] : a.relations()) {
    SignedDelta d = delta(rel, b.get(name));
    if (!d.empty()) out.emplace(name, std::move(d));
  }
  return out;
}

std::string dump(const Database& db) {
  std::ostringstream os;
  for (const auto& [name, rel] : db.relations()) {
    os << name << ":";
    for (const Tuple& t : rel.sorted()) os << " " << tuple_to_string(t);
    os << "\n";
  }
  return os.str();
}

}  // namespace histif::testkit
