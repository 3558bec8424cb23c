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

#include "doctest.h"
#include "histif/data_slicing.hpp"
#include "histif/dsl.hpp"
#include "histif/error.hpp"
#include "histif/reenact.hpp"
#include "testkit.hpp"

using namespace histif;
using namespace histif::testkit;

namespace {

Database filter(const Database& db, const CondMap& m) {
  Database out = db;
  for (auto& [name, rel] : out.relations()) {
    Cond c = lookup(m, name);
    TupleSet keep;
    for (const Tuple& t : rel.rows) {
      if (eval_cond(c, t, rel.schema)) keep.insert(t);
    }
    rel.rows = std::move(keep);
  }
  return out;
}

std::set<int64_t> passing_ids(const Cond& c) {
  std::set<int64_t> ids;
  Database db = order_db();
  for (const Tuple& t : db.get("Order").rows) {
    if (eval_cond(c, t, order_schema())) ids.insert(t[0].number().small());
  }
  return ids;
}

Statement u3_prime() {
  return parse_statement(
      "UPDATE Order SET ShippingFee = ShippingFee - 2 WHERE Price <= 40 AND ShippingFee >= 10");
}

}  // namespace

TEST_CASE("update pair condition") {
  Database db = order_db();
  SlicingCondition c = mod_condition(u1(), u1_prime(), db);
  Cond expect = simplify(or_(ge(attr("Price"), lit(50)), ge(attr("Price"), lit(60))));
  CHECK(equal(lookup(c.h, "Order"), expect));
  CHECK(equal(lookup(c.hm, "Order"), expect));
  CHECK(passing_ids(lookup(c.h, "Order")) == std::set<int64_t>{12, 13});

  SlicingCondition c3 = mod_condition(u3(), u3_prime(), db);
  CHECK(equal(lookup(c3.h, "Order"), parse_cond("Price <= 40 AND ShippingFee >= 10")));
}

TEST_CASE("delete pair conditions are asymmetric") {
  Database db = order_db();
  Statement d = parse_statement("DELETE FROM Order WHERE Price > 40");
  Statement d2 = parse_statement("DELETE FROM Order WHERE Country = 'UK'");
  SlicingCondition c = mod_condition(d, d2, db);
  CHECK(equal(lookup(c.h, "Order"), d2.where));
  CHECK(equal(lookup(c.hm, "Order"), d.where));
  SlicingCondition same = mod_condition(d, d, db);
  CHECK(equal(lookup(same.h, "Order"), d.where));
  CHECK(equal(lookup(same.hm, "Order"), d.where));
  // Deleting a statement: the NoOp side contributes False.
  SlicingCondition gone = mod_condition(d, Statement::noop("Order"), db);
  CHECK(is_false(lookup(gone.h, "Order")));
  CHECK(equal(lookup(gone.hm, "Order"), d.where));
}

TEST_CASE("unnormalized pairs are rejected") {
  CHECK_THROWS_AS(mod_condition(u1(), parse_statement("DELETE FROM Order"), order_db()),
                  NotApplicable);
}

TEST_CASE("push through statements") {
  Database db;
  db.add_relation(Schema("R", {{"A", Type::kInteger}, {"C", Type::kInteger}}));
  Statement u = parse_statement("UPDATE R SET A = 3 WHERE C = 5");
  Cond pushed = push_through_statement(lt(attr("A"), lit(4)), u, db);
  Cond raw = lt(case_when(eq(attr("C"), lit(5)), lit(3), attr("A")), lit(4));
  for (int a = 0; a < 8; ++a) {
    for (int cc = 3; cc < 7; ++cc) {
      Tuple t = {I(a), I(cc)};
      CHECK(eval_cond(pushed, t, db.schema("R")) == eval_cond(raw, t, db.schema("R")));
    }
  }
  Cond c = gt(attr("A"), lit(1));
  CHECK(equal(push_through_statement(c, Statement::noop("R"), db), c));
  CHECK(equal(push_through_statement(c, parse_statement("DELETE FROM R WHERE A = 2"), db), c));
}

TEST_CASE("order history data slice") {
  Database db = order_db();
  NormalizedHistories n = normalize_mods(order_history(), order_mods());
  SlicingCondition c = data_slice(n.h, n.hm, n.mods, db);
  CHECK(passing_ids(lookup(c.h, "Order")) == std::set<int64_t>{12, 13});
  CHECK(passing_ids(lookup(c.hm, "Order")) == std::set<int64_t>{12, 13});

  SlicingCondition none = data_slice(n.h, n.h, {}, db);
  CHECK(is_false(lookup(none.h, "Order")));
  CHECK(is_false(lookup(none.hm, "Order")));
}

TEST_CASE("replacing u3 leaves only the first order") {
  Database db = order_db();
  NormalizedHistories n =
      normalize_mods(order_history(), {Modification::replace(3, u3_prime())});
  SlicingCondition c = data_slice(n.h, n.hm, n.mods, db);
  Cond ch = lookup(c.h, "Order");
  CHECK(passing_ids(ch) == std::set<int64_t>{11});
  CHECK(passing_ids(lookup(c.hm, "Order")) == std::set<int64_t>{11});

  Expr f1 = case_when(ge(attr("Price"), lit(50)), lit(0), attr("ShippingFee"));
  Expr f2 = case_when(parse_cond("Country = 'UK' AND Price <= 100"), add(f1, lit(5)), f1);
  Cond expect = and_(le(attr("Price"), lit(40)), ge(f2, lit(10)));
  Rand r(3);
  Schema s = order_schema();
  for (int i = 0; i < 500; ++i) {
    Tuple t = {I(r.range(0, 20)), S("x"), S(r.chance(0.5) ? "UK" : "US"), I(r.range(0, 120)),
               I(r.range(0, 15))};
    CHECK(eval_cond(ch, t, s) == eval_cond(expect, t, s));
  }
}

TEST_CASE("qpush rules") {
  Database db;
  db.add_relation(Schema("R", {{"A", Type::kInteger}, {"B", Type::kInteger}}));
  db.add_relation(Schema("S", {{"C", Type::kInteger}, {"D", Type::kInteger}}));
  Query j = select(eq(attr("A"), attr("C")), join(base("R"), base("S")));
  Cond c = eq(attr("A"), lit(5));
  CHECK(equal(*qpush(c, j, "R", db), c));
  CHECK(equal(*qpush(c, j, "S", db), eq(attr("C"), lit(5))));
  CHECK(equal(*qpush(c, base("R"), "R", db), c));
  CHECK_FALSE(qpush(c, base("R"), "S", db).has_value());

  Query p = project({{"A", attr("A")}, {"B", add(attr("A"), lit(1))}}, base("R"));
  Cond pb = *qpush(gt(attr("B"), lit(2)), p, "R", db);
  for (int a = -2; a < 5; ++a) {
    CHECK(eval_cond(pb, {I(a), I(0)}, db.schema("R")) == (a + 1 > 2));
  }

  Query u = union_(base("R"), project({{"A", attr("C")}, {"B", attr("D")}}, base("S")));
  CHECK(equal(*qpush(c, u, "S", db), eq(attr("C"), lit(5))));
}

TEST_CASE("push-down agrees with running the prefix on one tuple") {
  Rand r(41);
  GenOptions o;
  o.second_relation = false;
  StmtMix mix;
  mix.del = 0;
  mix.insert = 0;
  mix.insert_query = 0;
  mix.noop = 0;
  Schema s = r_schema();
  for (int i = 0; i < 300; ++i) {
    int64_t key = 0;
    History h = random_history(r, o, mix, static_cast<size_t>(r.range(1, 4)), &key);
    Database db = random_db(r, o, 1);
    Cond c = random_cond(r, o, s, 2);
    CondMap m{{"R", c}};
    for (size_t k = h.size(); k-- > 0;) m = push_through_statement(m, h[k], db);
    for (const Tuple& t : db.get("R").rows) {
      Database one = db;
      one.get("R").rows = {t};
      TupleSet after = run_history(h, one).get("R").rows;
      REQUIRE(after.size() == 1);
      CHECK(eval_cond(lookup(m, "R"), t, s) == eval_cond(c, *after.begin(), s));
    }
  }
}

TEST_CASE("filtered inputs are subsets and node budget degrades to true") {
  Database db = order_db();
  NormalizedHistories n = normalize_mods(order_history(), order_mods());
  SlicingCondition c = data_slice(n.h, n.hm, n.mods, db);
  Database f = filter(db, c.h);
  for (const Tuple& t : f.get("Order").rows) CHECK(db.get("Order").rows.count(t) == 1);

  DataSliceOptions tiny;
  tiny.node_budget = 3;
  NormalizedHistories n3 =
      normalize_mods(order_history(), {Modification::replace(3, u3_prime())});
  SlicingCondition d = data_slice(n3.h, n3.hm, n3.mods, db, tiny);
  CHECK(d.degraded.count("Order") == 1);
  CHECK(is_true(lookup(d.h, "Order")));
}

TEST_CASE("delete pair condition agrees with the symmetric form") {
  Rand r(43);
  GenOptions o;
  o.second_relation = false;
  o.keyed = true;
  Schema s = r_schema();
  for (int i = 0; i < 300; ++i) {
    Database db = random_db(r, o, 8);
    Statement d1 = Statement::delete_("R", random_cond(r, o, s, 2));
    Statement d2 = Statement::delete_("R", random_cond(r, o, s, 2));
    SlicingCondition c = mod_condition(d1, d2, db);
    // Tuples deleted by exactly one side.
    Cond sym = or_(and_(d1.where, not_(d2.where)), and_(d2.where, not_(d1.where)));
    DeltaSet full = full_delta(apply_statement(d1, db), apply_statement(d2, db));
    DeltaSet sliced = full_delta(apply_statement(d1, filter(db, c.h)),
                                 apply_statement(d2, filter(db, c.hm)));
    DeltaSet oracle = full_delta(apply_statement(d1, filter(db, {{"R", sym}})),
                                 apply_statement(d2, filter(db, {{"R", sym}})));
    CHECK(full == sliced);
    CHECK(full == oracle);
  }
}
