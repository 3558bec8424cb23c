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
#include "histif/error.hpp"
#include "histif/workload.hpp"

using namespace histif;

namespace {

size_t matches(const Workload& w, const Cond& c) {
  const Relation& r = w.db.get("R");
  size_t n = 0;
  for (const Tuple& t : r.rows) n += eval_cond(c, t, r.schema);
  return n;
}

}  // namespace

TEST_CASE("one dependent statement at D10 over ten updates") {
  WorkloadSpec s;
  s.updates = 10;
  s.mods = 1;
  s.dependent = 10;
  s.tuples = 10;
  s.size = 1000;
  s.seed = 42;
  Workload w = generate_workload(s);
  CHECK(w.db.get("R").rows.size() == 1000);
  CHECK(w.history.size() == 10);
  CHECK(w.mods.size() == 1);
  CHECK(w.width == 100);
  REQUIRE(w.dependent_positions.size() == 1);
  const Statement& dep = w.history[w.dependent_positions[0] - 1];
  size_t m = matches(w, dep.where);
  CHECK(m > 0);
  CHECK(m <= 100);
  // It overlaps the modified statement on at least one tuple.
  CHECK(matches(w, and_(dep.where, w.history[0].where)) +
            matches(w, and_(dep.where, w.mods[0].stmt.where)) >
        0);
  CHECK(matches(w, w.history[0].where) == 100);
  CHECK(matches(w, w.mods[0].stmt.where) == 100);
}

TEST_CASE("empty history") {
  WorkloadSpec s;
  s.updates = 0;
  s.mods = 0;
  Workload w = generate_workload(s);
  CHECK(w.history.empty());
  CHECK(w.mods.empty());
}

TEST_CASE("mixed statement kinds") {
  WorkloadSpec s;
  s.updates = 100;
  s.inserts = 10;
  s.deletes = 10;
  s.tuples = 1;
  s.size = 10000;
  Workload w = generate_workload(s);
  size_t ins = 0, del = 0, upd = 0;
  for (const Statement& u : w.history) {
    ins += u.kind == StmtKind::kInsertTuple;
    del += u.kind == StmtKind::kDelete;
    upd += u.kind == StmtKind::kUpdate;
  }
  CHECK(ins == 10);
  CHECK(del == 10);
  CHECK(upd == 80);
}

TEST_CASE("generation is deterministic per seed") {
  WorkloadSpec s;
  s.updates = 20;
  s.dependent = 50;
  Workload a = generate_workload(s);
  Workload b = generate_workload(s);
  CHECK(a.db == b.db);
  REQUIRE(a.history.size() == b.history.size());
  for (size_t i = 0; i < a.history.size(); ++i) CHECK(equal(a.history[i], b.history[i]));
  s.seed = 43;
  Workload c = generate_workload(s);
  CHECK_FALSE(c.db == a.db);
}

TEST_CASE("infeasible specs") {
  WorkloadSpec s;
  s.inserts = 60;
  s.deletes = 60;
  CHECK_THROWS_AS(generate_workload(s), RangeError);
  WorkloadSpec t;
  t.tuples = 60;
  CHECK_THROWS_AS(generate_workload(t), RangeError);
  WorkloadSpec m;
  m.updates = 2;
  m.mods = 3;
  CHECK_THROWS_AS(generate_workload(m), RangeError);
}

TEST_CASE("spec json") {
  WorkloadSpec s = workload_spec_from_json(Json::parse(R"({"U": 5, "D": 100, "seed": 7})"));
  CHECK(s.updates == 5);
  CHECK(s.dependent == 100);
  CHECK(s.seed == 7);
  CHECK(workload_spec_from_json(to_json(s)).dependent == 100);
  CHECK_THROWS_AS(workload_spec_from_json(Json::parse(R"({"Q": 1})")), DataError);
  CHECK_THROWS_AS(workload_spec_from_json(Json::parse(R"({"U": "x"})")), DataError);
}
