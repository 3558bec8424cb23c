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
#include "histif/engine.hpp"
#include "histif/error.hpp"
#include "testkit.hpp"

using namespace histif;
using namespace histif::testkit;

namespace {

VersionedStore order_store() {
  VersionedStore st(order_db());
  st.append(order_history());
  return st;
}

WhatIfOptions with(Method m) {
  WhatIfOptions o;
  o.method = m;
  return o;
}

}  // namespace

TEST_CASE("order history under every method") {
  VersionedStore st = order_store();
  for (Method m : all_methods()) {
    WhatIfResult r = answer(st, order_mods(), with(m));
    CHECK_MESSAGE(r.delta == order_expected_delta(), method_name(m));
    CHECK(r.report.method == m);
    CHECK(r.report.delta_rows == 2);
    CHECK(r.report.degradations.empty());
  }
  WhatIfResult full = answer(st, order_mods());
  REQUIRE(full.report.slice.has_value());
  CHECK(full.report.slice->kept == std::vector<size_t>{1, 2});
  CHECK(full.report.kept_positions == std::vector<size_t>{1, 2});
  CHECK(full.report.slice_mode == "keyed");
  REQUIRE(full.report.data_slice.has_value());
  CHECK(full.report.guards.at("Order").ok);
  CHECK(full.report.guards.at("Order").key == "ID");
  Json j = full.report.to_json();
  CHECK(j["method"] == "r+ps+ds");
  CHECK(j["program_slicing"]["kept"] == Json::array({1, 2}));
  CHECK(j["data_slicing"]["h"]["Order"].get<std::string>().find("Price") != std::string::npos);
  CHECK(j["timings_ms"].contains("execution"));
}

TEST_CASE("empty modifications give an empty delta") {
  VersionedStore st = order_store();
  for (Method m : all_methods()) {
    WhatIfResult r = answer(st, {}, with(m));
    CHECK(r.delta.empty());
    CHECK(r.report.suffix_start == 0);
  }
}

TEST_CASE("methods parse and classify") {
  CHECK(parse_method("r+ps+ds") == Method::kRPsDs);
  CHECK_FALSE(parse_method("fast").has_value());
  CHECK(uses_program_slicing(Method::kRPs));
  CHECK_FALSE(uses_program_slicing(Method::kRDs));
  CHECK(uses_data_slicing(Method::kRDs));
  CHECK(all_methods().size() == 5);
}

TEST_CASE("the suffix starts at the first modification") {
  VersionedStore st = order_store();
  std::vector<Modification> mods = {
      Modification::replace(3, parse_statement(
                                   "UPDATE Order SET ShippingFee = ShippingFee - 2 WHERE Price "
                                   "<= 40 AND ShippingFee >= 10"))};
  WhatIfResult r = answer(st, mods);
  CHECK(r.report.start_version == 2);
  CHECK(r.report.suffix_start == 3);
  CHECK(r.delta.empty());
  WhatIfResult n = answer(st, mods, with(Method::kNaive));
  CHECK(n.delta.empty());
}

TEST_CASE("key guard") {
  Database db = order_db();
  KeyGuard ok = check_key_guard(db, "Order", order_history(), order_history());
  CHECK(ok.ok);
  CHECK(ok.key == "ID");
  History assign = {parse_statement("UPDATE Order SET ID = ID + 1 WHERE Price > 10")};
  KeyGuard other = check_key_guard(db, "Order", assign, assign);
  CHECK(other.ok);
  CHECK(other.key != "ID");
  History reuse = {parse_statement("INSERT INTO Order VALUES (11, 'X', 'UK', 1, 1)")};
  KeyGuard k2 = check_key_guard(db, "Order", reuse, reuse);
  CHECK((k2.ok ? k2.key != "ID" : true));
  History iq = {Statement::insert_query("Order", base("Order"))};
  KeyGuard k3 = check_key_guard(db, "Order", iq, iq);
  CHECK_FALSE(k3.ok);
  CHECK(k3.reason.find("INSERT") != std::string::npos);
}

TEST_CASE("insert queries disable both optimizations with a note") {
  Database db;
  db.add_relation(r_schema());
  db.add_relation(s_schema());
  db.insert("R", {I(1), I(1), I(1), S("a")});
  db.insert("S", {I(1), I(2), I(3)});
  VersionedStore st(db);
  st.append(parse_history(
      "UPDATE S SET SB = SB + 1 WHERE SA > 0\n"
      "INSERT INTO R SELECT SK + 10 AS K, SA AS A, SB AS B, 'b' AS T FROM S WHERE SA > 0\n"
      "UPDATE R SET A = A + 1 WHERE B >= 3"));
  // The insert query follows the modified statement, so it is replayed.
  std::vector<Modification> mods = {
      Modification::replace(1, parse_statement("UPDATE S SET SB = SB + 2 WHERE SA > 0"))};
  WhatIfResult naive = answer(st, mods, with(Method::kNaive));
  WhatIfResult opt = answer(st, mods);
  CHECK(opt.delta == naive.delta);
  // S(1,2,4) vs S(1,2,5) and R(11,2,4,b) vs R(11,3,5,b).
  CHECK(delta_size(opt.delta) == 4);
  CHECK(opt.report.degradations.size() >= 2);
}

TEST_CASE("unkeyed relations use the strict test") {
  Database db;
  db.add_relation(Schema("P", {{"A", Type::kInteger}, {"B", Type::kInteger}}));
  db.insert("P", {I(1), I(1)});
  db.insert("P", {I(2), I(1)});
  db.insert("P", {I(1), I(2)});
  VersionedStore st(db);
  st.append(parse_history("UPDATE P SET A = 0 WHERE B = 1\nUPDATE P SET B = 5 WHERE A = 0"));
  std::vector<Modification> mods = {
      Modification::replace(1, parse_statement("UPDATE P SET A = 0 WHERE B = 2"))};
  WhatIfResult naive = answer(st, mods, with(Method::kNaive));
  for (Method m : all_methods()) CHECK(answer(st, mods, with(m)).delta == naive.delta);
  WhatIfResult r = answer(st, mods);
  CHECK(r.report.slice_mode == "strict");
  CHECK_FALSE(r.report.guards.at("P").ok);
}

TEST_CASE("a tiny solver budget degrades but stays correct") {
  VersionedStore st = order_store();
  WhatIfOptions o;
  o.solver_budget = 1;
  WhatIfResult r = answer(st, order_mods(), o);
  CHECK(r.delta == order_expected_delta());
  o.deadline = std::chrono::steady_clock::now();
  CHECK(answer(st, order_mods(), o).delta == order_expected_delta());
}

TEST_CASE("invalid modifications are rejected") {
  VersionedStore st = order_store();
  CHECK_THROWS_AS(answer(st, {Modification::replace(9, u1())}), RangeError);
  CHECK_THROWS_AS(answer(st, {Modification::replace(1, parse_statement("UPDATE Order SET X = 1"))}),
                  SchemaError);
}

TEST_CASE("methods agree on random histories and modifications") {
  Rand r(91);
  StmtMix mix;
  mix.insert = 2;
  int nonempty = 0;
  for (int i = 0; i < 250; ++i) {
    GenOptions o;
    o.keyed = r.chance(0.6);
    o.insert_query = r.chance(0.3);
    o.nulls = r.chance(0.5);
    o.domain = 4;
    Database db = random_db(r, o, 7);
    int64_t key = 100;
    History h = random_history(r, o, mix, static_cast<size_t>(r.range(1, 6)), &key);
    std::vector<Modification> mods;
    History cur = h;
    for (int k = r.range(1, 3); k > 0; --k) {
      mods.push_back(random_modification(r, o, mix, cur.size(), &key));
      cur = apply_mods(cur, {mods.back()});
    }
    VersionedStore st(db, 3);
    st.append(h);
    WhatIfResult naive = answer(st, mods, with(Method::kNaive));
    Database expect_mod = run_history(cur, db);
    REQUIRE(naive.delta == full_delta(st.current(), expect_mod));
    std::string csv = delta_csv(naive.delta);
    if (!csv.empty()) ++nonempty;
    for (Method m : all_methods()) {
      WhatIfResult got = answer(st, mods, with(m));
      REQUIRE_MESSAGE(delta_csv(got.delta) == csv,
                      method_name(m) << "\n" << to_json(h).dump() << "\n" << dump(db));
    }
  }
  CHECK(nonempty > 100);
}
