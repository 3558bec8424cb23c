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
#include "histif/dsl.hpp"
#include "histif/error.hpp"
#include "histif/expr.hpp"
#include "histif/relation.hpp"
#include "testkit.hpp"

using namespace histif;
using namespace histif::testkit;

namespace {

Tuple order_row(int64_t id) {
  for (const Tuple& t : order_db().get("Order").sorted()) {
    if (t[0] == I(id)) return t;
  }
  FAIL("no such row");
  return {};
}

Tuple random_row(Rand& r) {
  auto num = [&] { return r.chance(0.1) ? Value::null() : I(r.range(0, 4)); };
  return {num(), num(), num(), r.chance(0.1) ? Value::null() : S(r.chance(0.5) ? "a" : "b")};
}

}  // namespace

TEST_CASE("eval_expr on the order rows") {
  Schema s = order_schema();
  CHECK(eval_expr(attr("Price"), order_row(12), s) == I(50));
  CHECK(eval_expr(lit(7), order_row(11), s) == I(7));
  Expr fee = case_when(ge(attr("Price"), lit(50)), lit(0), attr("ShippingFee"));
  CHECK(eval_expr(fee, order_row(11), s) == I(5));
  CHECK(eval_expr(fee, order_row(13), s) == I(0));
}

TEST_CASE("eval_cond on the order rows") {
  Schema s = order_schema();
  CHECK(eval_cond(ge(attr("Price"), lit(50)), order_row(13), s));
  CHECK(eval_cond(true_c(), order_row(14), s));
  CHECK_FALSE(eval_cond(parse_cond("Country = 'UK' AND Price <= 100"), order_row(14), s));
}

TEST_CASE("comparisons with null are false in both polarities") {
  Schema s = r_schema();
  Tuple t = {I(1), Value::null(), I(2), Value::null()};
  CHECK_FALSE(eval_cond(lt(attr("A"), lit(3)), t, s));
  CHECK_FALSE(eval_cond(ge(attr("A"), lit(3)), t, s));
  CHECK(eval_cond(not_(lt(attr("A"), lit(3))), t, s));
  CHECK(eval_cond(is_null(attr("A")), t, s));
  CHECK(eval_cond(is_null(add(attr("B"), attr("A"))), t, s));
  CHECK(eval_cond(is_null(div(attr("B"), lit(0))), t, s));
  CHECK_FALSE(eval_cond(eq(attr("T"), lit(Value::text("a"))), t, s));
}

TEST_CASE("binding errors") {
  Schema s = order_schema();
  CHECK_THROWS_AS(eval_expr(attr("Nope"), order_row(11), s), SchemaError);
  CHECK_THROWS_AS(eval_expr(add(attr("Country"), lit(1)), order_row(11), s), TypeError);
  CHECK_THROWS_AS(eval_cond(lt(attr("Country"), lit(1)), order_row(11), s), TypeError);
}

TEST_CASE("substitute replaces every occurrence simultaneously") {
  Expr repl = case_when(eq(attr("C"), lit(5)), lit(3), attr("A"));
  Cond got = substitute(lt(attr("A"), lit(4)), Substitution{{attr("A"), repl}});
  CHECK(equal(got, lt(repl, lit(4))));

  Expr e = add(attr("A"), mul(attr("B"), attr("A")));
  CHECK(equal(substitute(e, Substitution{{attr("A"), attr("A")}}), e));

  // Swap is simultaneous, not sequential.
  Expr swapped = substitute(sub(attr("A"), attr("B")),
                            Substitution{{attr("A"), attr("B")}, {attr("B"), attr("A")}});
  CHECK(equal(swapped, sub(attr("B"), attr("A"))));

  Expr f1 = case_when(ge(attr("P"), lit(50)), lit(0), attr("F"));
  Cond pushed = substitute(ge(attr("F"), lit(10)), std::map<std::string, Expr>{{"F", f1}});
  CHECK(equal(pushed, ge(f1, lit(10))));
}

TEST_CASE("substitution soundness on random tuples") {
  Rand r(7);
  GenOptions o;
  Schema s = r_schema();
  for (int i = 0; i < 500; ++i) {
    Expr e = random_num_expr(r, o, {"K", "A", "B"}, 3);
    Expr repl = random_num_expr(r, o, {"K", "A", "B"}, 2);
    Tuple t = random_row(r);
    Tuple t2 = t;
    t2[1] = eval_expr(repl, t, s);
    Expr sub_e = substitute(e, std::map<std::string, Expr>{{"A", repl}});
    CHECK_MESSAGE(eval_expr(sub_e, t, s) == eval_expr(e, t2, s), to_string(e));
  }
}

TEST_CASE("simplify examples") {
  Cond c = parse_cond("(P <= 30 AND F >= 10) OR (P <= 40 AND F >= 10)");
  Cond s = simplify(c);
  CHECK(equal(s, parse_cond("P <= 40 AND F >= 10")));
  Cond x = gt(attr("A"), lit(1));
  CHECK(equal(simplify(and_(true_c(), x)), x));
  CHECK(is_true(simplify(eq(lit(3), lit(3)))));
  CHECK(equal(simplify(not_(not_(x))), x));
  CHECK(is_false(simplify(and_(x, false_c()))));
  CHECK(equal(simplify(add(lit(2), lit(3))), lit(5)));
}

TEST_CASE("simplify preserves semantics on random conditions") {
  Rand r(11);
  GenOptions o;
  Schema s = r_schema();
  int changed = 0;
  for (int i = 0; i < 2000; ++i) {
    Cond c = random_cond(r, o, s, 3);
    Cond sc = simplify(c);
    if (!equal(c, sc)) ++changed;
    for (int k = 0; k < 8; ++k) {
      Tuple t = random_row(r);
      REQUIRE_MESSAGE(eval_cond(c, t, s) == eval_cond(sc, t, s),
                      to_string(c) << "  =>  " << to_string(sc) << "  on "
                                   << tuple_to_string(t));
    }
  }
  CHECK(changed > 100);
}

TEST_CASE("simplify with non-null assumption") {
  SimplifyOptions o;
  o.assume_non_null = true;
  CHECK(is_true(simplify(eq(attr("A"), attr("A")), o)));
  CHECK_FALSE(is_true(simplify(eq(attr("A"), attr("A")))));
}

TEST_CASE("rendering quotes identifiers and keywords") {
  CHECK(quote_ident("Order") == "Order");
  CHECK(quote_ident("select") == "\"select\"");
  CHECK(quote_ident("Price") == "Price");
  CHECK(quote_ident("my col") == "\"my col\"");
  CHECK(is_reserved_word("where"));
  std::string text = to_string(parse_cond("A + 1 > 2 AND NOT B = 3"));
  CHECK(text == "(A + 1) > 2 AND NOT B = 3");
  CHECK(to_string(parse_cond(text)) == text);
}

TEST_CASE("attribute collection and in_set") {
  Cond c = parse_cond("A > 1 OR CASE WHEN B = 2 THEN K ELSE 0 END < 3");
  CHECK(attrs_of(c) == std::set<std::string>{"A", "B", "K"});
  CHECK(is_false(in_set(attr("A"), {})));
  Schema s = r_schema();
  Cond in = in_set(attr("A"), {I(1), I(3)});
  CHECK(eval_cond(in, {I(0), I(3), I(0), S("a")}, s));
  CHECK_FALSE(eval_cond(in, {I(0), I(2), I(0), S("a")}, s));
  CHECK(contains_null_or_div(div(attr("A"), lit(2))));
  CHECK_FALSE(contains_null_or_div(add(attr("A"), lit(2))));
}
