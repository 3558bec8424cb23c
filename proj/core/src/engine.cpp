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

#include "histif/engine.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "histif/error.hpp"

namespace histif {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

bool has_insert_query(const History& h) {
  return std::any_of(h.begin(), h.end(),
                     [](const Statement& u) { return u.kind == StmtKind::kInsertQuery; });
}

std::set<std::string> touched(const History& a, const History& b) {
  std::set<std::string> out = touched_relations(a);
  for (const std::string& r : touched_relations(b)) out.insert(r);
  return out;
}

History restrict(const History& h, const std::vector<size_t>& keep) {
  History out;
  out.reserve(keep.size());
  for (size_t p : keep) out.push_back(h[p - 1]);
  return out;
}

// Common first steps of both algorithms.
struct Prepared {
  NormalizedHistories norm;
  size_t m1 = 0;
  History hs, hms;  // suffixes from the first modification
  Database start;
  std::set<std::string> rels;
};

bool prepare(const VersionedStore& store, const std::vector<Modification>& mods,
             RunReport& rep, Prepared& p) {
  auto t = Clock::now();
  rep.history_length = store.size();
  p.norm = normalize_mods(store.log(), mods);
  for (const Statement& u : p.norm.hm) validate(u, store.base());
  rep.modified = p.norm.mods;
  rep.ms.normalize = ms_since(t);
  if (p.norm.mods.empty()) return false;
  p.m1 = p.norm.mods[0];
  rep.suffix_start = p.m1;
  rep.start_version = p.norm.original_prefix(p.m1);
  t = Clock::now();
  p.start = store.reconstruct(rep.start_version);
  rep.ms.reconstruct = ms_since(t);
  p.hs.assign(p.norm.h.begin() + static_cast<std::ptrdiff_t>(p.m1 - 1), p.norm.h.end());
  p.hms.assign(p.norm.hm.begin() + static_cast<std::ptrdiff_t>(p.m1 - 1), p.norm.hm.end());
  p.rels = touched(p.hs, p.hms);
  return true;
}

void add_delta(DeltaSet& out, const std::string& rel, const Relation& a, const Relation& b) {
  SignedDelta d = delta(a, b);
  if (!d.empty()) out[rel] = std::move(d);
}

Json cond_map_json(const CondMap& m) {
  Json j = Json::object();
  for (const auto& [rel, c] : m) j[rel] = to_string(c);
  return j;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kNaive: return "naive";
    case Method::kR: return "r";
    case Method::kRDs: return "r+ds";
    case Method::kRPs: return "r+ps";
    case Method::kRPsDs: return "r+ps+ds";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view s) {
  for (Method m : all_methods()) {
    if (method_name(m) == s) return m;
  }
  return std::nullopt;
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> kAll{Method::kNaive, Method::kR, Method::kRDs, Method::kRPs,
                                        Method::kRPsDs};
  return kAll;
}

bool uses_program_slicing(Method m) { return m == Method::kRPs || m == Method::kRPsDs; }
bool uses_data_slicing(Method m) { return m == Method::kRDs || m == Method::kRPsDs; }

KeyGuard check_key_guard(const Database& start, const std::string& rel, const History& h,
                         const History& hm) {
  KeyGuard g;
  if (has_insert_query(h) || has_insert_query(hm)) {
    g.reason = "INSERT ... SELECT in the history";
    return g;
  }
  if (!start.has(rel)) {
    g.reason = "unknown relation";
    return g;
  }
  const Relation& r = start.get(rel);
  const Schema& s = r.schema;
  std::vector<size_t> cand;
  for (size_t i = 0; i < s.arity(); ++i) {
    if (s.at(i).key) cand.push_back(i);
  }
  for (size_t i = 0; i < s.arity(); ++i) {
    if (!s.at(i).key) cand.push_back(i);
  }
  std::string last = "relation has no attributes";
  for (size_t i : cand) {
    const std::string& a = s.at(i).name;
    bool assigned = false;
    for (const History* hist : {&h, &hm}) {
      for (const Statement& u : *hist) {
        if (u.relation == rel && u.kind == StmtKind::kUpdate && u.written(s).count(a)) {
          assigned = true;
        }
      }
    }
    if (assigned) {
      last = a + " is assigned by an update";
      continue;
    }
    std::unordered_set<Value, decltype([](const Value& v) { return v.hash(); })> seen;
    bool ok = true;
    for (const Tuple& t : r.rows) {
      if (t[i].is_null() || !seen.insert(t[i]).second) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      last = a + " is not unique and non-null";
      continue;
    }
    for (const History* hist : {&h, &hm}) {
      auto fresh = seen;
      for (const Statement& u : *hist) {
        if (u.relation != rel || u.kind != StmtKind::kInsertTuple) continue;
        Value v = conform(u.values, s)[i];
        if (v.is_null() || !fresh.insert(v).second) ok = false;
      }
    }
    if (!ok) {
      last = "an inserted tuple reuses a value of " + a;
      continue;
    }
    g.ok = true;
    g.key = a;
    return g;
  }
  g.reason = last;
  return g;
}

Json RunReport::to_json() const {
  Json j;
  j["method"] = std::string(method_name(method));
  j["history_length"] = history_length;
  j["modified_positions"] = modified;
  j["suffix_start"] = suffix_start;
  j["start_version"] = start_version;
  Json g = Json::object();
  for (const auto& [rel, k] : guards) {
    g[rel] = k.ok ? Json{{"ok", true}, {"key", k.key}} : Json{{"ok", false}, {"reason", k.reason}};
  }
  j["key_guard"] = g;
  if (slice) {
    Json s = slice->to_json();
    s["mode"] = slice_mode;
    s["kept_history_positions"] = kept_positions;
    j["program_slicing"] = s;
  } else {
    j["program_slicing"] = nullptr;
  }
  if (data_slice) {
    j["data_slicing"] = {{"h", cond_map_json(data_slice->h)},
                         {"hm", cond_map_json(data_slice->hm)},
                         {"degraded", data_slice->degraded}};
  } else {
    j["data_slicing"] = nullptr;
  }
  j["degradations"] = degradations;
  j["solver_unknown"] = solver_unknown;
  j["delta_rows"] = delta_rows;
  j["timings_ms"] = {{"normalize", ms.normalize},
                     {"reconstruct", ms.reconstruct},
                     {"program_slicing", ms.program_slicing},
                     {"data_slicing", ms.data_slicing},
                     {"execution", ms.execution},
                     {"delta", ms.delta},
                     {"total", ms.total}};
  return j;
}

WhatIfResult answer(const VersionedStore& store, const std::vector<Modification>& mods,
                    const WhatIfOptions& opts) {
  return opts.method == Method::kNaive ? answer_naive(store, mods, opts)
                                       : answer_optimized(store, mods, opts);
}

WhatIfResult answer_naive(const VersionedStore& store, const std::vector<Modification>& mods,
                          const WhatIfOptions& opts) {
  (void)opts;
  auto t0 = Clock::now();
  WhatIfResult res;
  RunReport& rep = res.report;
  rep.method = Method::kNaive;
  Prepared p;
  if (prepare(store, mods, rep, p)) {
    auto t = Clock::now();
    for (const Statement& u : p.hms) execute(u, p.start);
    rep.ms.execution = ms_since(t);
    t = Clock::now();
    for (const std::string& rel : p.rels) {
      add_delta(res.delta, rel, store.current().get(rel), p.start.get(rel));
    }
    rep.ms.delta = ms_since(t);
  }
  rep.delta_rows = delta_size(res.delta);
  rep.ms.total = ms_since(t0);
  return res;
}

WhatIfResult answer_optimized(const VersionedStore& store,
                              const std::vector<Modification>& mods,
                              const WhatIfOptions& opts) {
  auto t0 = Clock::now();
  WhatIfResult res;
  RunReport& rep = res.report;
  rep.method = opts.method == Method::kNaive ? Method::kRPsDs : opts.method;
  Prepared p;
  if (!prepare(store, mods, rep, p)) {
    rep.ms.total = ms_since(t0);
    return res;
  }
  const Database& d = p.start;
  bool iq = has_insert_query(p.hs) || has_insert_query(p.hms);
  bool all_keyed = true;
  for (const std::string& rel : p.rels) {
    rep.guards[rel] = check_key_guard(d, rel, p.hs, p.hms);
    all_keyed = all_keyed && rep.guards[rel].ok;
  }

  // Constant inserts run as separate branches unless an INSERT ... SELECT
  // could read the relation they go to.
  SplitHistory sh{p.hs, {}, p.hs}, shm{p.hms, {}, p.hms};
  if (!iq) {
    sh = split_inserts(p.hs);
    shm = split_inserts(p.hms);
  }
  std::vector<size_t> mods_s;
  for (size_t m : p.norm.mods) mods_s.push_back(m - p.m1 + 1);
  size_t n = sh.main.size();
  std::vector<size_t> keep;
  for (size_t i = 1; i <= n; ++i) keep.push_back(i);

  if (uses_program_slicing(rep.method)) {
    auto t = Clock::now();
    if (iq) {
      rep.degradations.push_back("program slicing skipped: INSERT ... SELECT in the history");
    } else {
      try {
        SliceContexts ctx;
        for (const std::string& rel : p.rels) {
          const Relation& r = d.get(rel);
          CompressOptions co = opts.compress;
          if (!co.group_by.empty() && r.schema.index_of(co.group_by) < 0) co.group_by.clear();
          SliceContext c{r.schema, compress(r, co), {}};
          for (size_t i = 0; i < r.schema.arity(); ++i) {
            for (const Tuple& tup : r.rows) {
              if (tup[i].is_null()) {
                c.nullable.insert(r.schema.at(i).name);
                break;
              }
            }
          }
          ctx.emplace(rel, std::move(c));
        }
        SliceOptions so;
        so.mode = all_keyed ? SliceMode::kKeyed : SliceMode::kStrict;
        so.compile.big_m_floor = opts.big_m_floor;
        so.solve.node_budget = opts.solver_budget;
        so.solve.deadline = opts.deadline;
        rep.slice_mode = all_keyed ? "keyed" : "strict";
        if (!all_keyed) {
          rep.degradations.push_back("program slicing uses the strict test: no preserved key");
        }
        SliceResult sr = (mods_s.size() == 1 && all_keyed)
                             ? single_mod_dependency(sh.main, shm.main, mods_s[0], ctx, so)
                             : greedy_slice(sh.main, shm.main, mods_s, ctx, so);
        keep = sr.kept;
        rep.solver_unknown = sr.unknown;
        for (size_t k : keep) {
          size_t o = p.norm.orig[p.m1 - 1 + k - 1];
          if (o) rep.kept_positions.push_back(o);
        }
        rep.slice = std::move(sr);
      } catch (const NotApplicable& e) {
        rep.degradations.push_back(std::string("program slicing skipped: ") + e.what());
      }
    }
    rep.ms.program_slicing = ms_since(t);
  }

  History ih = restrict(sh.main, keep), ihm = restrict(shm.main, keep);
  std::vector<size_t> mods_i;
  for (size_t m : mods_s) {
    mods_i.push_back(static_cast<size_t>(std::lower_bound(keep.begin(), keep.end(), m) -
                                         keep.begin()) + 1);
  }

  QueryMap in_h, in_m;
  if (uses_data_slicing(rep.method)) {
    auto t = Clock::now();
    SlicingCondition sc;
    try {
      if (iq) throw NotApplicable("INSERT ... SELECT in the history");
      sc = data_slice(ih, ihm, mods_i, d, opts.data_slicing);
    } catch (const NotApplicable& e) {
      rep.degradations.push_back(std::string("data slicing skipped: ") + e.what());
      for (const std::string& rel : p.rels) sc.h[rel] = sc.hm[rel] = true_c();
    }
    for (const std::string& rel : p.rels) {
      if (!rep.guards[rel].ok) {
        if (iq) continue;
        rep.degradations.push_back("data slicing skipped for " + rel + ": " +
                                   rep.guards[rel].reason);
        continue;
      }
      Cond ch = lookup(sc.h, rel), cm = lookup(sc.hm, rel);
      if (!is_true(ch)) in_h[rel] = select(ch, base(rel));
      if (!is_true(cm)) in_m[rel] = select(cm, base(rel));
    }
    rep.data_slice = std::move(sc);
    rep.ms.data_slicing = ms_since(t);
  }

  auto t = Clock::now();
  QueryMap qh = reenact_history(ih, d, in_h);
  QueryMap qm = reenact_history(ihm, d, in_m);
  auto side = [&](const QueryMap& q, const QueryMap& in, const SplitHistory& s,
                  const std::string& rel) {
    Query main;
    if (auto it = q.find(rel); it != q.end()) {
      main = it->second;
    } else if (auto it2 = in.find(rel); it2 != in.end()) {
      main = it2->second;
    } else {
      main = base(rel);
    }
    Query br = insert_branch(s, rel, d);
    return eval_query(br ? union_(main, br) : main, d);
  };
  std::map<std::string, std::pair<Relation, Relation>> states;
  for (const std::string& rel : p.rels) {
    states.emplace(rel, std::make_pair(side(qh, in_h, sh, rel), side(qm, in_m, shm, rel)));
  }
  rep.ms.execution = ms_since(t);
  t = Clock::now();
  for (const auto& [rel, st] : states) add_delta(res.delta, rel, st.first, st.second);
  rep.ms.delta = ms_since(t);
  rep.delta_rows = delta_size(res.delta);
  rep.ms.total = ms_since(t0);
  return res;
}

}  // namespace histif
