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
#include "histif/milp.hpp"
#include "histif/solver.hpp"
#include "testkit.hpp"

using namespace histif;
using namespace histif::testkit;

namespace {

VarTable ints(std::initializer_list<const char*> names) {
  VarTable t;
  for (const char* n : names) t[n] = {Type::kInteger, false};
  return t;
}

CompileOptions bounded(std::initializer_list<const char*> names, int64_t lo, int64_t hi) {
  CompileOptions o;
  for (const char* n : names) o.bounds[n] = {I(lo), I(hi)};
  return o;
}

}  // namespace

TEST_CASE("strict comparison compiles to a big-M pair") {
  CompileOptions o = bounded({"x", "y"}, 0, 10);
  o.flatten_top_level = false;
  MILPProgram p = compile(lt(attr("x"), attr("y")), ints({"x", "y"}), o);
  CHECK(p.root >= 0);
  CHECK(p.vars[static_cast<size_t>(p.root)].boolean);
  CHECK(p.rows.size() >= 2);
  for (int x = 0; x <= 10; x += 2) {
    for (int y = 0; y <= 10; y += 3) {
      Cond f = and_({lt(attr("x"), attr("y")), eq(attr("x"), lit(x)), eq(attr("y"), lit(y))});
      CompileOptions o2 = o;
      SatResult r = check_sat(f, ints({"x", "y"}), o2);
      CHECK(r.status == (x < y ? SolveStatus::kFeasible : SolveStatus::kInfeasible));
    }
  }
}

TEST_CASE("constant formulas and contradictions") {
  MILPProgram t = compile(true_c(), {});
  CHECK(solve(t).status == SolveStatus::kFeasible);
  CHECK(check_sat(false_c(), {}).status == SolveStatus::kInfeasible);

  MILPProgram p;
  p.vars.push_back({"b", true, 0, 1});
  p.rows.push_back({{{0, 1}}, RowSense::kEq, 1});
  p.rows.push_back({{{0, 1}}, RowSense::kEq, 0});
  CHECK(solve(p).status == SolveStatus::kInfeasible);
  CHECK_FALSE(p.satisfied_by({1}));
}

TEST_CASE("case expression feasibility") {
  Expr e = case_when(gt(attr("x"), lit(0)), lit(1), lit(2));
  for (int x = -5; x <= 5; ++x) {
    Cond f = and_(eq(e, lit(2)), eq(attr("x"), lit(x)));
    SatResult r = check_sat(f, ints({"x"}), bounded({"x"}, -5, 5));
    CHECK(r.status == (x <= 0 ? SolveStatus::kFeasible : SolveStatus::kInfeasible));
  }
  SatResult any = check_sat(eq(e, lit(2)), ints({"x"}), bounded({"x"}, -5, 5));
  REQUIRE(any.status == SolveStatus::kFeasible);
  CHECK(any.witness.at("x").number().small() <= 0);
}

TEST_CASE("compiler rejects non-linear and unbounded input") {
  VarTable v = ints({"x", "y"});
  CompileOptions o = bounded({"x", "y"}, 0, 3);
  CHECK_THROWS_AS(compile(lt(div(attr("x"), lit(2)), lit(1)), v, o), NotApplicable);
  CHECK_THROWS_AS(compile(lt(mul(attr("x"), attr("y")), lit(1)), v, o), NotApplicable);
  CHECK_THROWS_AS(compile(lt(attr("x"), lit(1)), v), NotApplicable);
  CHECK_THROWS_AS(compile(eq(attr("x"), lit(Value::null())), v, o), NotApplicable);
  SatResult r = check_sat(lt(div(attr("x"), lit(2)), lit(1)), v, o);
  CHECK(r.status == SolveStatus::kUnknown);
  CHECK_FALSE(r.note.empty());
}

TEST_CASE("bounds derived from top-level conjuncts") {
  Cond f = parse_cond("x >= 2 AND x <= 4 AND y = x + 1 AND y <> 4");
  SatResult r = check_sat(f, ints({"x", "y"}));
  REQUIRE(r.status == SolveStatus::kFeasible);
  CHECK(eval_sym(f, r.witness));
  CHECK(check_sat(parse_cond("x >= 2 AND x <= 4 AND x + x = 5"), ints({"x"})).status ==
        SolveStatus::kInfeasible);
}

TEST_CASE("text and decimal variables") {
  VarTable v = {{"c", {Type::kText, false}}, {"p", {Type::kDecimal, false}}};
  CompileOptions o;
  o.bounds["p"] = {Value::parse_decimal("0.00"), Value::parse_decimal("10.00")};
  Cond f = parse_cond("c <> 'UK' AND c <> 'US' AND p > 9.99");
  SatResult r = check_sat(f, v, o);
  REQUIRE(r.status == SolveStatus::kFeasible);
  CHECK(eval_sym(f, r.witness));
  CHECK(r.witness.at("p") == Value::parse_decimal("10.00"));

  Cond g = parse_cond("c > 'UK' AND c < 'US'");
  SatResult rg = check_sat(g, v, o);
  REQUIRE(rg.status == SolveStatus::kFeasible);
  CHECK(eval_sym(g, rg.witness));
  CHECK(check_sat(parse_cond("p > 2.5 AND p < 2.51"), v, o).status == SolveStatus::kInfeasible);
}

TEST_CASE("brute force oracle") {
  std::map<std::string, std::vector<Value>> dom = {{"x", {I(3), I(4)}}};
  CHECK_FALSE(brute_force_sat(parse_cond("x = 1 OR x = 2"), dom).has_value());
  auto w = brute_force_sat(parse_cond("x = 4"), dom);
  REQUIRE(w.has_value());
  CHECK(w->at("x") == I(4));
  std::map<std::string, std::vector<Value>> huge;
  for (const char* n : {"a", "b", "c", "d"}) {
    for (int i = 0; i < 40; ++i) huge[n].push_back(I(i));
  }
  CHECK_THROWS_AS(brute_force_sat(true_c(), huge), NotApplicable);
}

TEST_CASE("compilation soundness with fixed assignments") {
  Rand r(61);
  GenOptions o;
  o.linear = true;
  o.nulls = false;
  o.domain = 4;
  Schema s("V", {{"x", Type::kInteger}, {"y", Type::kInteger}, {"z", Type::kInteger}});
  VarTable v = ints({"x", "y", "z"});
  for (int i = 0; i < 150; ++i) {
    Cond f = random_cond(r, o, s, 3);
    Assignment a = {{"x", I(r.range(0, 3))}, {"y", I(r.range(0, 3))}, {"z", I(r.range(0, 3))}};
    Cond fixed = and_({f, eq(attr("x"), lit(a["x"])), eq(attr("y"), lit(a["y"])),
                       eq(attr("z"), lit(a["z"]))});
    for (bool flat : {true, false}) {
      CompileOptions co = bounded({"x", "y", "z"}, 0, 3);
      co.flatten_top_level = flat;
      SatResult res = check_sat(fixed, v, co);
      REQUIRE(res.status != SolveStatus::kUnknown);
      CHECK_MESSAGE((res.status == SolveStatus::kFeasible) == eval_sym(f, a), to_string(f));
    }
  }
}

TEST_CASE("solutions satisfy rows and the lp export lists them") {
  Cond f = parse_cond("x + y >= 5 AND (x < 2 OR y = 0)");
  CompileOptions co = bounded({"x", "y"}, 0, 5);
  MILPProgram p = compile(f, ints({"x", "y"}), co);
  SolveResult r = solve(p);
  REQUIRE(r.status == SolveStatus::kFeasible);
  CHECK(p.satisfied_by(r.values));
  CHECK(eval_sym(f, p.decode(r.values)));
  std::string lp = p.to_lp();
  CHECK(lp.find("Subject To") != std::string::npos);
  CHECK(lp.find("Bounds") != std::string::npos);
  CHECK(lp.find("End") != std::string::npos);
  CHECK(lp == compile(f, ints({"x", "y"}), co).to_lp());
}

TEST_CASE("a node budget of one leaves hard problems unknown") {
  Cond f = parse_cond(
      "(x = 1 OR x = 2 OR x = 3) AND (y = 1 OR y = 2 OR y = 3) AND x + y = 5 AND x <> 2");
  CompileOptions co = bounded({"x", "y"}, 0, 9);
  co.flatten_top_level = false;
  SolveOptions so;
  so.node_budget = 1;
  SatResult r = check_sat(f, ints({"x", "y"}), co, so);
  CHECK(r.status != SolveStatus::kInfeasible);
  SatResult full = check_sat(f, ints({"x", "y"}), co);
  CHECK(full.status == SolveStatus::kFeasible);
}

TEST_CASE("a past deadline never reports infeasible") {
  SolveOptions so;
  so.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  Cond f = parse_cond("(x = 1 OR x = 2) AND x + y = 7 AND y <= 5");
  SatResult r = check_sat(f, ints({"x", "y"}), bounded({"x", "y"}, 0, 9), so);
  CHECK(r.status != SolveStatus::kInfeasible);
}
