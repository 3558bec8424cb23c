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

#include "histif/slicing.hpp"

#include <algorithm>
#include <unordered_map>

#include "histif/error.hpp"

namespace histif {

namespace {

bool relevant(const Statement& u, const std::string& rel) {
  if (u.kind == StmtKind::kInsertQuery) {
    throw NotApplicable("program slicing does not support INSERT ... SELECT");
  }
  return u.relation == rel && u.kind != StmtKind::kInsertTuple && u.kind != StmtKind::kNoOp;
}

std::map<std::string, Expr> tuple_map(const Schema& s, const VCTuple& t) {
  std::map<std::string, Expr> m;
  for (size_t i = 0; i < s.arity(); ++i) m[s.at(i).name] = t.values[i];
  return m;
}

// Definitions of several symbolic runs with structurally equal right-hand
// sides merged into one variable.
class DefPool {
 public:
  explicit DefPool(VarTable vars) : vars_(std::move(vars)) {}

  // Adds the definitions of `v` created after the first `from` ones and
  // rewrites tuple `t` (from the same run) to the pooled names.
  void absorb(const VCDatabase& v, size_t from, VCTuple& t) {
    for (size_t k = from; k < v.defs.size(); ++k) {
      const Definition& d = v.defs[k];
      Expr rhs = rename_.empty() ? d.expr : simplify(substitute(d.expr, rename_));
      if (rhs->kind == ExprKind::kAttr || rhs->kind == ExprKind::kConst) {
        rename_[d.var] = rhs;
        continue;
      }
      auto it = by_rhs_.find(rhs);
      if (it != by_rhs_.end()) {
        rename_[d.var] = attr(it->second);
        continue;
      }
      by_rhs_.emplace(rhs, d.var);
      defs_[d.var] = rhs;
      order_.push_back(d.var);
      vars_[d.var] = v.vars.at(d.var);
    }
    if (rename_.empty()) return;
    for (Expr& e : t.values) e = substitute(e, rename_);
    t.local = simplify(substitute(t.local, rename_));
  }

  Expr rename(const Expr& e) const { return rename_.empty() ? e : substitute(e, rename_); }

  bool any_nullable() const {
    for (const auto& [n, info] : vars_) {
      if (info.nullable) return true;
    }
    return false;
  }

  bool nullable(const Expr& e) const {
    for (const std::string& n : attrs_of(e)) {
      auto it = vars_.find(n);
      if (it == vars_.end() || it->second.nullable) return true;
    }
    return e->kind == ExprKind::kConst && e->value.is_null();
  }

  // Definitions reachable from the variables of `roots`, in creation order.
  std::vector<Cond> cone(const std::vector<Cond>& roots) const {
    std::set<std::string> need;
    std::vector<std::string> work;
    for (const Cond& c : roots) {
      for (const std::string& n : attrs_of(c)) {
        if (defs_.count(n) && need.insert(n).second) work.push_back(n);
      }
    }
    while (!work.empty()) {
      std::string n = work.back();
      work.pop_back();
      for (const std::string& m : attrs_of(defs_.at(n))) {
        if (defs_.count(m) && need.insert(m).second) work.push_back(m);
      }
    }
    std::vector<Cond> out;
    for (const std::string& n : order_) {
      if (!need.count(n)) continue;
      Cond c = eq(attr(n), defs_.at(n));
      if (vars_.at(n).nullable) c = or_(c, and_(is_null(attr(n)), is_null(defs_.at(n))));
      out.push_back(c);
    }
    return out;
  }

  const VarTable& vars() const { return vars_; }

 private:
  VarTable vars_;
  std::map<std::string, Expr> rename_;
  std::unordered_map<Expr, std::string, ExprHash, ExprEq> by_rhs_;
  std::map<std::string, Expr> defs_;
  std::vector<std::string> order_;
};

// Symbolic run over the positions in `keep` (all when null).
VCDatabase run(const History& h, const std::vector<size_t>* keep, const SliceContext& ctx,
               const std::string& side) {
  VCDatabase v = initial_vcdb(ctx.schema, side, ctx.nullable);
  const std::string& rel = ctx.schema.relation();
  for (size_t p = 1; p <= h.size(); ++p) {
    if (!relevant(h[p - 1], rel)) continue;
    if (keep && !std::binary_search(keep->begin(), keep->end(), p)) continue;
    v = sym_apply(h[p - 1], v, static_cast<int>(p));
  }
  return v;
}

SliceResult finish(SliceResult r, size_t n) {
  std::set<size_t> kept(r.kept.begin(), r.kept.end());
  r.kept.assign(kept.begin(), kept.end());
  r.removed.clear();
  for (size_t p = 1; p <= n; ++p) {
    if (!kept.count(p)) r.removed.push_back(p);
  }
  for (const SliceCall& c : r.calls) {
    r.solver_calls += c.check.solver_called;
    r.unknown = r.unknown || (c.check.solver_called && c.check.status == SolveStatus::kUnknown);
  }
  return r;
}

}  // namespace

Cond SliceTest::body() const { return or_(not_(premise), conclusion); }

Cond SliceTest::negated() const {
  std::vector<Cond> parts;
  if (premise->kind == CondKind::kAnd) {
    parts = premise->kids;
  } else {
    parts.push_back(premise);
  }
  parts.push_back(simplify(not_(conclusion)));
  return and_(std::move(parts));
}

SliceTest build_slice_test(const History& h, const History& hm, const std::vector<size_t>& keep,
                           const SliceContext& ctx, SliceMode mode) {
  if (h.size() != hm.size()) throw RangeError("slice test needs histories of equal length");
  const Schema& s = ctx.schema;
  const std::string& rel = s.relation();
  std::vector<size_t> sorted = keep;
  std::sort(sorted.begin(), sorted.end());

  VCDatabase runs[4] = {run(h, nullptr, ctx, "H"), run(hm, nullptr, ctx, "M"),
                        run(h, &sorted, ctx, "HI"), run(hm, &sorted, ctx, "MI")};
  DefPool pool(runs[0].vars);
  VCTuple tup[4];
  for (int k = 0; k < 4; ++k) {
    tup[k] = runs[k].tuples.at(0);
    pool.absorb(runs[k], 0, tup[k]);
  }

  // Attributes assigned by some statement; the others are the shared
  // version-0 variables in every run.
  std::vector<size_t> cols;
  for (size_t i = 0; i < s.arity(); ++i) {
    bool w = false;
    for (const History* hist : {&h, &hm}) {
      for (const Statement& u : *hist) {
        if (u.relation == rel && u.kind == StmtKind::kUpdate && u.written(s).count(s.at(i).name)) {
          w = true;
        }
      }
    }
    if (w) cols.push_back(i);
  }
  auto same = [&](int a, int b) {
    bool one_local = equal(tup[a].local, tup[b].local);
    std::vector<Cond> both;
    if (!one_local) both = {tup[a].local, tup[b].local};
    for (size_t i : cols) {
      const Expr& x = tup[a].values[i];
      const Expr& y = tup[b].values[i];
      if (equal(x, y)) continue;
      Cond c = eq(x, y);
      if (pool.nullable(x) || pool.nullable(y)) c = or_(c, and_(is_null(x), is_null(y)));
      both.push_back(c);
    }
    if (one_local) return or_(not_(tup[a].local), and_(both));
    return or_(and_(both), and_(not_(tup[a].local), not_(tup[b].local)));
  };
  SimplifyOptions so;
  so.assume_non_null = !pool.any_nullable();
  Cond s02 = simplify(same(0, 2), so), s13 = simplify(same(1, 3), so);
  Cond conclusion;
  if (mode == SliceMode::kKeyed) {
    Cond s01 = simplify(same(0, 1), so), s23 = simplify(same(2, 3), so);
    if (is_true(s02) && is_true(s13) && equal(s01, s23)) {
      conclusion = true_c();  // the restricted runs coincide with the full ones
    } else {
      conclusion = or_(and_(s01, s23), and_({not_(s01), s02, s13}));
    }
  } else {
    conclusion = and_(s02, s13);
  }
  SliceTest t;
  t.conclusion = simplify(conclusion, so);
  std::vector<Cond> premise = pool.cone({t.conclusion});
  premise.push_back(ctx.chi);
  t.premise = and_(std::move(premise));
  t.vars = pool.vars();
  return t;
}

SliceCheck check_slice(const SliceTest& t, const SliceOptions& opts) {
  SliceCheck out;
  if (is_true(t.conclusion) || is_false(t.premise)) {
    out.verdict = SliceVerdict::kIsSlice;
    return out;
  }
  out.solver_called = true;
  SatResult r = check_sat(t.negated(), t.vars, opts.compile, opts.solve);
  out.status = r.status;
  out.nodes = r.nodes;
  out.note = r.note;
  if (r.status == SolveStatus::kInfeasible) {
    out.verdict = SliceVerdict::kIsSlice;
  } else if (r.status == SolveStatus::kFeasible) {
    out.witness = std::move(r.witness);
  }
  return out;
}

Json SliceResult::to_json() const {
  Json calls_json = Json::array();
  for (const SliceCall& c : calls) {
    std::string status =
        c.check.solver_called ? std::string(status_name(c.check.status)) : "skipped";
    calls_json.push_back(
        {{"position", c.position},
         {"verdict", c.check.verdict == SliceVerdict::kIsSlice ? "removable" : "kept"},
         {"solver_called", c.check.solver_called},
         {"status", status},
         {"nodes", c.check.nodes}});
    if (!c.check.note.empty()) calls_json.back()["note"] = c.check.note;
  }
  return {{"algorithm", algorithm}, {"kept", kept},     {"removed", removed},
          {"solver_calls", solver_calls}, {"unknown", unknown}, {"calls", calls_json}};
}

SliceResult greedy_slice(const History& h, const History& hm, const std::vector<size_t>& mods,
                         const SliceContexts& ctx, const SliceOptions& opts) {
  size_t n = h.size();
  SliceResult r;
  r.algorithm = "greedy";
  std::set<size_t> pinned(mods.begin(), mods.end());
  std::vector<size_t> cur;
  for (size_t p = 1; p <= n; ++p) cur.push_back(p);
  for (size_t p = 1; p <= n; ++p) {
    if (pinned.count(p)) continue;
    const Statement& a = h[p - 1];
    const Statement& b = hm[p - 1];
    std::vector<size_t> cand;
    for (size_t q : cur) {
      if (q != p) cand.push_back(q);
    }
    auto it = ctx.find(a.relation);
    bool trivial = (a.kind == StmtKind::kNoOp || a.kind == StmtKind::kInsertTuple) &&
                   (b.kind == StmtKind::kNoOp || b.kind == StmtKind::kInsertTuple);
    if (trivial || it == ctx.end()) {
      if (trivial) cur = std::move(cand);
      continue;
    }
    SliceCall call{p, {}};
    try {
      call.check = check_slice(build_slice_test(h, hm, cand, it->second, opts.mode), opts);
    } catch (const NotApplicable& e) {
      call.check.note = e.what();
    }
    if (call.check.verdict == SliceVerdict::kIsSlice) cur = std::move(cand);
    r.calls.push_back(std::move(call));
  }
  r.kept = cur;
  return finish(std::move(r), n);
}

SliceResult single_mod_dependency(const History& h, const History& hm, size_t mod,
                                  const SliceContexts& ctx, const SliceOptions& opts) {
  if (h.size() != hm.size()) throw RangeError("slice test needs histories of equal length");
  size_t n = h.size();
  if (mod < 1 || mod > n) throw RangeError("modification position out of range");
  SliceResult r;
  r.algorithm = "single_mod";
  for (size_t p = 1; p <= mod; ++p) r.kept.push_back(p);
  const Statement& u = h[mod - 1];
  const Statement& u2 = hm[mod - 1];
  auto it = ctx.find(u.relation);
  if (it == ctx.end()) throw NotApplicable("no slice context for relation " + u.relation);
  const SliceContext& c = it->second;
  const Schema& s = c.schema;
  const std::string& rel = s.relation();

  // Step-by-step symbolic runs of both sides, sharing equal definitions.
  VCDatabase vh = initial_vcdb(s, "H", c.nullable);
  VCDatabase vm = initial_vcdb(s, "M", c.nullable);
  DefPool pool(vh.vars);
  VCTuple th = vh.tuples[0], tm = vm.tuples[0];
  auto advance = [&](size_t p) {
    size_t fh = vh.defs.size(), fm = vm.defs.size();
    if (relevant(h[p - 1], rel)) vh = sym_apply(h[p - 1], vh, static_cast<int>(p));
    if (relevant(hm[p - 1], rel)) vm = sym_apply(hm[p - 1], vm, static_cast<int>(p));
    th = vh.tuples[0];
    tm = vm.tuples[0];
    pool.absorb(vh, fh, th);
    pool.absorb(vm, fm, tm);
    // Keep later rewrites relative to the pooled names.
    vh.tuples[0] = th;
    vm.tuples[0] = tm;
    for (const auto& [name, info] : pool.vars()) {
      vh.vars.emplace(name, info);
      vm.vars.emplace(name, info);
    }
  };
  for (size_t p = 1; p < mod; ++p) advance(p);
  auto cond_at = [&](const Statement& st, const VCTuple& t) {
    if (!relevant(st, rel)) return false_c();
    return simplify(substitute(st.condition(), tuple_map(s, t)));
  };
  Cond touched = or_(cond_at(u, th), cond_at(u2, tm));
  SimplifyOptions so;
  so.assume_non_null = !pool.any_nullable();
  touched = simplify(touched, so);
  for (size_t p = mod; p < n; ++p) {
    advance(p);
    size_t i = p + 1;
    const Statement& ui = h[i - 1];
    if (!relevant(ui, rel) || is_false(touched)) continue;
    Cond hit = or_(and_(th.local, cond_at(ui, th)), and_(tm.local, cond_at(hm[i - 1], tm)));
    Cond dep = simplify(and_(touched, hit), so);
    SliceCall call{i, {}};
    if (is_false(dep)) {
      call.check.verdict = SliceVerdict::kIsSlice;
      r.calls.push_back(std::move(call));
      continue;
    }
    std::vector<Cond> parts = pool.cone({dep});
    parts.push_back(c.chi);
    parts.push_back(dep);
    call.check.solver_called = true;
    SatResult sat = check_sat(and_(std::move(parts)), pool.vars(), opts.compile, opts.solve);
    call.check.status = sat.status;
    call.check.nodes = sat.nodes;
    call.check.note = sat.note;
    if (sat.status == SolveStatus::kInfeasible) {
      call.check.verdict = SliceVerdict::kIsSlice;
    } else {
      r.kept.push_back(i);
      call.check.witness = std::move(sat.witness);
    }
    r.calls.push_back(std::move(call));
  }
  return finish(std::move(r), n);
}

}  // namespace histif
