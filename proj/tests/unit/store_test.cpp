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

#include <filesystem>

#include "doctest.h"
#include "histif/csv.hpp"
#include "histif/dsl.hpp"
#include "histif/error.hpp"
#include "histif/store.hpp"
#include "testkit.hpp"

using namespace histif;
using namespace histif::testkit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("histif-store-" + std::to_string(reinterpret_cast<uintptr_t>(this)) + "-" +
            std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("csv reader") {
  auto rows = parse_csv("a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\n\n\"\",\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0].text == "x,1");
  CHECK(rows[1][1].text == "say \"hi\"");
  CHECK(rows[2][0].quoted);
  CHECK(rows[2][0].text.empty());
  CHECK_FALSE(rows[2][1].quoted);
  CHECK_THROWS_AS(parse_csv("a\n\"open\n"), DataError);
  CHECK(csv_field(Value::text("")) == "\"\"");
  CHECK(csv_field(Value::null()) == "");
  CHECK(csv_field(Value::text("a\nb")) == "\"a\nb\"");
  CHECK(csv_row({I(1), S("x,y")}) == "1,\"x,y\"");
}

TEST_CASE("relation csv round trip") {
  Schema s = r_schema();
  Relation r = read_relation_csv(s, "T,K,A,B\n\"\",1,2,\nb,2,,4\n\"q,\"\"x\"\"\",3,0,0\n");
  CHECK(r.rows.size() == 3);
  CHECK(r.rows.count({I(1), I(2), Value::null(), S("")}) == 1);
  CHECK(r.rows.count({I(2), Value::null(), I(4), S("b")}) == 1);
  std::string out = write_relation_csv(r);
  CHECK(out.rfind("K,A,B,T\n", 0) == 0);
  CHECK(read_relation_csv(s, out) == r);
  CHECK(write_relation_csv(read_relation_csv(s, out)) == out);
  CHECK(read_relation_csv(s, "K,A,B,T\n").rows.empty());
}

TEST_CASE("relation csv errors name the record") {
  Schema s = r_schema();
  try {
    read_relation_csv(s, "K,A,B,T\n1,2,3,a\n2,x,3,a\n");
    FAIL("expected a data error");
  } catch (const DataError& e) {
    std::string m = e.what();
    CHECK(m.find("record 3") != std::string::npos);
    CHECK(m.find("column A") != std::string::npos);
  }
  CHECK_THROWS_AS(read_relation_csv(s, "K,A,B\n1,2,3\n"), DataError);
  CHECK_THROWS_AS(read_relation_csv(s, "K,A,B,Z\n1,2,3,4\n"), DataError);
  CHECK_THROWS_AS(read_relation_csv(s, "K,A,B,T\n1,2,3\n"), DataError);
}

TEST_CASE("versioned store reconstructs every version") {
  Rand r(81);
  GenOptions o;
  StmtMix mix;
  for (int i = 0; i < 30; ++i) {
    Database db = random_db(r, o, 6);
    int64_t key = 100;
    History h = random_history(r, o, mix, static_cast<size_t>(r.range(0, 25)), &key);
    VersionedStore st(db, static_cast<size_t>(r.range(1, 6)));
    st.append(h);
    CHECK(st.size() == h.size());
    CHECK(st.current() == run_history(h, db));
    for (size_t v = 0; v <= h.size(); ++v) {
      History prefix(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(v));
      REQUIRE(st.reconstruct(v) == run_history(prefix, db));
    }
    CHECK_THROWS_AS(st.reconstruct(h.size() + 1), RangeError);
    std::vector<size_t> cps = st.checkpoints();
    CHECK(cps.front() == 0);
    for (size_t c : cps) CHECK(c % st.checkpoint_every() == 0);
  }
}

TEST_CASE("append validates against the current state") {
  VersionedStore st(order_db());
  CHECK_THROWS_AS(st.append(parse_statement("UPDATE Order SET Nope = 1")), SchemaError);
  CHECK(st.size() == 0);
  st.append(order_history());
  CHECK(fees(st.current()) == std::vector<int64_t>{8, 5, 0, 4});
}

TEST_CASE("store directory round trip") {
  TempDir tmp;
  VersionedStore st(order_db(), 2);
  st.append(order_history());
  save_store(st, tmp.path);
  CHECK(fs::exists(tmp.path / "schema.json"));
  CHECK(fs::exists(tmp.path / "base" / "Order.csv"));
  CHECK(fs::exists(tmp.path / "history.sql"));
  CHECK(fs::exists(tmp.path / "snapshots" / "2" / "Order.csv"));
  VersionedStore back = open_store(tmp.path);
  CHECK(back.base() == st.base());
  CHECK(back.current() == st.current());
  REQUIRE(back.size() == 3);
  for (size_t i = 0; i < 3; ++i) CHECK(equal(back.log()[i], st.log()[i]));
  CHECK_THROWS_AS(open_store(tmp.path / "missing"), DataError);
}

TEST_CASE("load database from files") {
  TempDir tmp;
  fs::path data = fs::path(HISTIF_TESTDATA_DIR) / "order";
  Database db = load_database(data / "schema.json", {data / "Order.csv"});
  CHECK(db == order_db());
  write_file(tmp.path / "anything.csv", read_file(data / "Order.csv"));
  CHECK(load_database(data / "schema.json", {tmp.path / "anything.csv"}) == order_db());
  write_file(tmp.path / "empty.csv", "ID,Customer,Country,Price,ShippingFee\n");
  CHECK(load_database(data / "schema.json", {tmp.path / "empty.csv"}).get("Order").rows.empty());
  CHECK_THROWS_AS(read_file(tmp.path / "nope.csv"), DataError);
}
