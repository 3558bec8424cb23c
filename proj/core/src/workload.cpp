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

#include "histif/workload.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "histif/error.hpp"

namespace histif {

namespace {

const char* const kCategories[] = {"books", "games", "garden", "music", "office", "sports",
                                   "tools", "toys"};

class Rng {
 public:
  explicit Rng(uint64_t seed) : g_(seed) {}
  // Uniform in [lo, hi].
  int64_t range(int64_t lo, int64_t hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<int64_t>(g_() % static_cast<uint64_t>(hi - lo + 1));
  }
  bool chance(int percent) { return range(0, 99) < percent; }
  std::mt19937_64& engine() { return g_; }

 private:
  std::mt19937_64 g_;
};

Cond id_range(int64_t lo, int64_t hi) {
  return and_(ge(attr("id"), lit(lo)), le(attr("id"), lit(hi)));
}

std::vector<std::pair<std::string, Expr>> random_sets(Rng& r) {
  switch (r.range(0, 4)) {
    case 0: return {{"a", add(attr("a"), lit(r.range(1, 20)))}};
    case 1: return {{"b", lit(r.range(0, 999))}};
    case 2: return {{"c", sub(attr("a"), attr("b"))}};
    case 3:
      return {{"price", add(attr("price"), lit(Value::decimal_units(BigInt(r.range(1, 999)))))}};
    default: return {{"a", sub(attr("a"), lit(r.range(1, 20)))}, {"b", add(attr("b"), lit(1))}};
  }
}

// Occasionally narrows a range condition by a value predicate.
Cond maybe_refine(Rng& r, Cond c) {
  if (!r.chance(25)) return c;
  return and_(c, ge(attr("a"), lit(r.range(0, 500))));
}

Tuple random_row(Rng& r, int64_t id) {
  return {Value::integer(id), Value::text(kCategories[r.range(0, 7)]),
          Value::integer(r.range(0, 999)), Value::integer(r.range(0, 999)),
          Value::integer(r.range(0, 999)), Value::decimal_units(BigInt(r.range(0, 99999)))};
}

}  // namespace

WorkloadSpec workload_spec_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("workload spec must be an object");
  WorkloadSpec s;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_integer()) throw DataError("workload field " + k + " must be an integer");
    auto n = v.get<int64_t>();
    if (n < 0) throw DataError("workload field " + k + " must be non-negative");
    if (k == "U" || k == "updates") {
      s.updates = static_cast<size_t>(n);
    } else if (k == "M" || k == "mods") {
      s.mods = static_cast<size_t>(n);
    } else if (k == "D" || k == "dependent") {
      s.dependent = static_cast<int>(n);
    } else if (k == "T" || k == "tuples") {
      s.tuples = static_cast<int>(n);
    } else if (k == "I" || k == "inserts") {
      s.inserts = static_cast<int>(n);
    } else if (k == "X" || k == "deletes") {
      s.deletes = static_cast<int>(n);
    } else if (k == "size") {
      s.size = static_cast<size_t>(n);
    } else if (k == "seed") {
      s.seed = static_cast<uint64_t>(n);
    } else {
      throw DataError("unknown workload field " + k);
    }
  }
  return s;
}

Json to_json(const WorkloadSpec& s) {
  return {{"U", s.updates}, {"M", s.mods},    {"D", s.dependent}, {"T", s.tuples},
          {"I", s.inserts}, {"X", s.deletes}, {"size", s.size},   {"seed", s.seed}};
}

Workload generate_workload(const WorkloadSpec& spec) {
  for (int p : {spec.dependent, spec.tuples, spec.inserts, spec.deletes}) {
    if (p < 0 || p > 100) throw RangeError("percentages must lie in [0, 100]");
  }
  if (spec.inserts + spec.deletes > 100) throw RangeError("I + X exceeds 100");
  size_t n_ins = static_cast<size_t>(std::llround(spec.updates * spec.inserts / 100.0));
  size_t n_del = static_cast<size_t>(std::llround(spec.updates * spec.deletes / 100.0));
  size_t n_upd = spec.updates - n_ins - n_del;
  if (spec.mods > n_upd) throw RangeError("more modifications than updates");

  Workload w;
  Rng r(spec.seed);
  auto size = static_cast<int64_t>(spec.size);
  auto width = std::max<int64_t>(1, std::llround(size * spec.tuples / 100.0));
  w.width = static_cast<size_t>(width);
  // Modified ranges sit at the bottom of the id space, 2w apart; the
  // modified version is shifted by w/2. Independent ranges lie above.
  int64_t free_lo = static_cast<int64_t>(spec.mods) * 2 * width + 1;
  if (spec.updates > 0 && free_lo + width - 1 > size) {
    throw RangeError("relation too small for the requested selectivity");
  }

  Schema s("R", {{"id", Type::kInteger, true},
                 {"category", Type::kText},
                 {"a", Type::kInteger},
                 {"b", Type::kInteger},
                 {"c", Type::kInteger},
                 {"price", Type::kDecimal}});
  w.db.add_relation(s);
  for (int64_t id = 1; id <= size; ++id) w.db.insert("R", random_row(r, id));

  std::vector<int64_t> mod_lo;
  for (size_t k = 0; k < spec.mods; ++k) {
    int64_t lo = 1 + static_cast<int64_t>(k) * 2 * width;
    mod_lo.push_back(lo);
    auto sets = random_sets(r);
    w.history.push_back(Statement::update("R", sets, id_range(lo, lo + width - 1)));
    int64_t shifted = lo + width / 2 + (width == 1 ? 1 : 0);
    w.mods.push_back(Modification::replace(
        k + 1, Statement::update("R", sets, id_range(shifted, shifted + width - 1))));
  }

  std::vector<StmtKind> rest;
  rest.insert(rest.end(), n_upd - spec.mods, StmtKind::kUpdate);
  rest.insert(rest.end(), n_del, StmtKind::kDelete);
  rest.insert(rest.end(), n_ins, StmtKind::kInsertTuple);
  std::shuffle(rest.begin(), rest.end(), r.engine());
  size_t candidates = rest.size() - n_ins;
  auto n_dep = static_cast<size_t>(std::llround(candidates * spec.dependent / 100.0));
  if (spec.mods == 0) n_dep = 0;
  std::vector<bool> dep(candidates, false);
  std::fill(dep.begin(), dep.begin() + static_cast<std::ptrdiff_t>(n_dep), true);
  std::shuffle(dep.begin(), dep.end(), r.engine());

  size_t next_dep = 0;
  int64_t next_id = size + 1;
  for (StmtKind kind : rest) {
    if (kind == StmtKind::kInsertTuple) {
      w.history.push_back(Statement::insert_tuple("R", random_row(r, next_id++)));
      continue;
    }
    int64_t lo;
    if (dep[next_dep++]) {
      int64_t m = mod_lo[static_cast<size_t>(r.range(0, static_cast<int64_t>(mod_lo.size()) - 1))];
      lo = std::max<int64_t>(1, m + r.range(-width / 2, width / 2));
      w.dependent_positions.push_back(w.history.size() + 1);
    } else {
      lo = r.range(free_lo, size - width + 1);
    }
    Cond where = maybe_refine(r, id_range(lo, lo + width - 1));
    if (kind == StmtKind::kDelete) {
      w.history.push_back(Statement::delete_("R", where));
    } else {
      w.history.push_back(Statement::update("R", random_sets(r), where));
    }
  }
  return w;
}

}  // namespace histif
