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

#include <thread>

#include "doctest.h"
#include "histif/dsl.hpp"
#include "histif/json_codec.hpp"
#include "histif/service.hpp"
#include "http_binding.hpp"
#include "testkit.hpp"

using namespace histif;
using namespace histif::testkit;

namespace {

VersionedStore order_store() {
  VersionedStore s(order_db());
  s.append(order_history());
  return s;
}

struct Reply {
  int status;
  Json body;
};

Reply call(ApiSession& api, const std::string& method, const std::string& path,
           const std::string& body = "", std::map<std::string, std::string> query = {}) {
  ApiResponse r = api.handle(method, path, query, body);
  return {r.status, r.body.empty() ? Json() : Json::parse(r.body)};
}

const char* kMods = R"([{"op": "replace", "pos": 1,
                        "statement": "UPDATE Order SET ShippingFee = 0 WHERE Price >= 60"}])";

Json whatif_body(const std::string& method, const char* mods = kMods) {
  return Json{{"history_id", "main"}, {"modifications", Json::parse(mods)}, {"method", method}};
}

}  // namespace

TEST_CASE("history listing and retrieval") {
  ApiSession api(order_store());
  Reply list = call(api, "GET", "/api/history");
  REQUIRE(list.status == 200);
  REQUIRE(list.body["histories"].size() == 1);
  CHECK(list.body["histories"][0]["id"] == "main");
  CHECK(list.body["histories"][0]["length"] == 3);

  Reply h = call(api, "GET", "/api/history/main");
  REQUIRE(h.status == 200);
  REQUIRE(h.body["statements"].size() == 3);
  CHECK(h.body["statements"][0]["position"] == 1);
  CHECK(to_string(parse_statement(h.body["statements"][1]["dsl"].get<std::string>())) ==
        to_string(u2()));
  CHECK(to_string(statement_from_json(h.body["statements"][2]["ast"])) == to_string(u3()));

  Reply missing = call(api, "GET", "/api/history/nope");
  CHECK(missing.status == 404);
  CHECK(missing.body["error"]["kind"] == "not_found");
}

TEST_CASE("posted histories come back with identical statements") {
  ApiSession api(order_store());
  Json stmts = Json::array();
  for (const Statement& s : order_history()) stmts.push_back(to_json(s));
  Reply made = call(api, "POST", "/api/history", Json{{"statements", stmts}}.dump());
  REQUIRE(made.status == 201);
  std::string id = made.body["id"];
  CHECK(id != "main");
  Reply got = call(api, "GET", "/api/history/" + id);
  REQUIRE(got.status == 200);
  Reply main = call(api, "GET", "/api/history/main");
  for (size_t i = 0; i < 3; ++i) {
    CHECK(got.body["statements"][i]["ast"] == main.body["statements"][i]["ast"]);
  }

  Reply named = call(api, "POST", "/api/history",
                     R"({"id": "short", "dsl": "DELETE FROM Order WHERE Price > 55"})");
  REQUIRE(named.status == 201);
  CHECK(named.body["length"] == 1);
  CHECK(call(api, "POST", "/api/history", R"({"id": "short", "dsl": ""})").status == 400);
  CHECK(call(api, "GET", "/api/history").body["histories"].size() == 3);

  Reply bad = call(api, "POST", "/api/history", R"({"dsl": "UPDATE Order SET"})");
  CHECK(bad.status == 400);
  CHECK(bad.body["error"]["kind"] == "parse");
  CHECK(bad.body["error"].contains("line"));
  CHECK(call(api, "POST", "/api/history", "{not json").status == 400);
  CHECK(call(api, "POST", "/api/history", "{}").status == 400);
}

TEST_CASE("whatif returns the delta and a report") {
  ApiSession api(order_store());
  Reply naive;
  for (const char* m : {"naive", "r", "r+ds", "r+ps", "r+ps+ds"}) {
    CAPTURE(m);
    Reply r = call(api, "POST", "/api/whatif", whatif_body(m).dump());
    REQUIRE(r.status == 200);
    const Json& d = r.body["delta"];
    REQUIRE(d.size() == 2);
    CHECK(d[0]["sign"] == "-");
    CHECK(d[0]["row"]["ID"] == 12);
    CHECK(d[0]["row"]["ShippingFee"] == 5);
    CHECK(d[1]["sign"] == "+");
    CHECK(d[1]["row"]["ShippingFee"] == 10);
    CHECK(r.body["report"]["method"] == m);
    if (std::string(m) == "naive") {
      naive = r;
    } else {
      CHECK(r.body["delta"] == naive.body["delta"]);
    }
    Reply rep = call(api, "GET", "/api/report/" + r.body["request_id"].get<std::string>());
    CHECK(rep.status == 200);
    CHECK(rep.body == r.body["report"]);
  }
  CHECK(call(api, "GET", "/api/report/r999").status == 404);

  Reply none = call(api, "POST", "/api/whatif", whatif_body("r+ps+ds", "[]").dump());
  REQUIRE(none.status == 200);
  CHECK(none.body["delta"].empty());
}

TEST_CASE("whatif parameters and errors") {
  ApiSession api(order_store());
  Json body = whatif_body("r+ps+ds");
  body["params"] = {{"groups", 2}, {"big_m", 100}, {"solver_budget", 50}};
  CHECK(call(api, "POST", "/api/whatif", body.dump()).status == 200);
  body["params"] = {{"groups", 0}};
  CHECK(call(api, "POST", "/api/whatif", body.dump()).status == 400);
  body["params"] = {{"colour", "red"}};
  CHECK(call(api, "POST", "/api/whatif", body.dump()).status == 400);

  CHECK(call(api, "POST", "/api/whatif", whatif_body("fastest").dump()).status == 400);
  Reply range = call(api, "POST", "/api/whatif",
                     whatif_body("r", R"([{"op": "replace", "pos": 7,
                       "statement": "DELETE FROM Order WHERE ID = 1"}])")
                         .dump());
  CHECK(range.status == 400);
  Reply garbled = call(api, "POST", "/api/whatif",
                       whatif_body("r", R"([{"op": "replace", "pos": 1,
                         "statement": "UPDATE Order SET Nope = 1"}])")
                           .dump());
  CHECK(garbled.status == 400);
  Json other = whatif_body("r");
  other["history_id"] = "ghost";
  CHECK(call(api, "POST", "/api/whatif", other.dump()).status == 404);
}

TEST_CASE("degraded optimizations answer with 422 and the full result") {
  ApiSession api(order_store());
  Reply made = call(api, "POST", "/api/history", Json{{"id", "iq"},
           {"dsl",
            "UPDATE Order SET ShippingFee = ShippingFee + 1 WHERE Price >= 50\n"
            "INSERT INTO Order SELECT ID + 10 AS ID, Customer, Country, Price, ShippingFee "
            "FROM Order WHERE Price > 40"}}
                         .dump());
  REQUIRE(made.status == 201);
  Json body = whatif_body("r+ps+ds", R"([{"op": "replace", "pos": 1,
      "statement": "UPDATE Order SET ShippingFee = ShippingFee + 2 WHERE Price >= 50"}])");
  body["history_id"] = "iq";
  Reply r = call(api, "POST", "/api/whatif", body.dump());
  CHECK(r.status == 422);
  CHECK_FALSE(r.body["detail"].empty());
  body["method"] = "naive";
  Reply n = call(api, "POST", "/api/whatif", body.dump());
  CHECK(n.status == 200);
  CHECK(r.body["delta"] == n.body["delta"]);
  CHECK(n.body["delta"].size() == 8);
}

TEST_CASE("relation snapshots by version") {
  ApiSession api(order_store());
  Reply v0 = call(api, "GET", "/api/relation/Order", "", {{"at", "0"}});
  REQUIRE(v0.status == 200);
  CHECK(v0.body["total"] == 4);
  CHECK(v0.body["columns"][0]["name"] == "ID");
  std::vector<int64_t> got;
  for (const Json& row : v0.body["rows"]) got.push_back(row[4].get<int64_t>());
  CHECK(got == std::vector<int64_t>{5, 5, 3, 4});

  Reply now = call(api, "GET", "/api/relation/Order");
  got.clear();
  for (const Json& row : now.body["rows"]) got.push_back(row[4].get<int64_t>());
  CHECK(got == fees(run_history(order_history(), order_db())));
  CHECK(now.body["version"] == 3);

  Reply v1 = call(api, "GET", "/api/relation/Order", "", {{"at", "1"}});
  got.clear();
  for (const Json& row : v1.body["rows"]) got.push_back(row[4].get<int64_t>());
  CHECK(got == fees(apply_statement(u1(), order_db())));

  Reply page = call(api, "GET", "/api/relation/Order", "", {{"offset", "1"}, {"limit", "2"}});
  REQUIRE(page.body["rows"].size() == 2);
  CHECK(page.body["rows"][0][0] == 12);

  CHECK(call(api, "GET", "/api/relation/Order", "", {{"at", "4"}}).status == 416);
  CHECK(call(api, "GET", "/api/relation/Order", "", {{"at", "-1"}}).status == 416);
  CHECK(call(api, "GET", "/api/relation/Order", "", {{"offset", "9"}}).status == 416);
  CHECK(call(api, "GET", "/api/relation/Order", "", {{"at", "x"}}).status == 400);
  CHECK(call(api, "GET", "/api/relation/Nope").status == 404);
}

TEST_CASE("schema, preflight and unknown routes") {
  ApiSession api(order_store());
  Reply s = call(api, "GET", "/api/schema");
  REQUIRE(s.status == 200);
  CHECK(schema_from_json(s.body["relations"][0]) == order_schema());
  CHECK(api.handle("OPTIONS", "/api/whatif", {}, "").status == 204);
  CHECK(call(api, "GET", "/api/nothing").status == 404);
  CHECK(call(api, "DELETE", "/api/history").status == 404);
}

TEST_CASE("http binding serves the API with CORS headers") {
  ApiSession api(order_store());
  httplib::Server server;
  bind_routes(server, api);
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto list = client.Get("/api/history");
  REQUIRE(list);
  CHECK(list->status == 200);
  CHECK(list->get_header_value("Access-Control-Allow-Origin") == "*");
  CHECK(list->get_header_value("Content-Type") == "application/json");

  auto r = client.Post("/api/whatif", whatif_body("r+ps+ds").dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(Json::parse(r->body)["delta"].size() == 2);

  httplib::Headers pre{{"Origin", "http://localhost:5173"},
                       {"Access-Control-Request-Method", "POST"}};
  auto opt = client.Options("/api/whatif", pre);
  REQUIRE(opt);
  CHECK(opt->status == 204);
  CHECK(opt->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);

  server.stop();
  t.join();
}
