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

#include "histif/solver.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <set>

#include "histif/error.hpp"

namespace histif {

namespace {

using i128 = __int128;

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

int64_t clamp64(i128 v) {
  constexpr i128 kMax = std::numeric_limits<int64_t>::max();
  return static_cast<int64_t>(std::clamp(v, -kMax, kMax));
}

// Integral rows: strict senses become non-strict with rhs shifted by one.
struct Row {
  std::vector<std::pair<int, int64_t>> terms;
  std::optional<int64_t> lo, hi;  // lo <= sum <= hi
};

std::vector<Row> normalise_rows(const MILPProgram& p) {
  std::vector<Row> out;
  out.reserve(p.rows.size());
  for (const LinRow& r : p.rows) {
    Row row{r.terms, std::nullopt, std::nullopt};
    switch (r.sense) {
      case RowSense::kLe: row.hi = r.rhs; break;
      case RowSense::kLt: row.hi = r.rhs - 1; break;
      case RowSense::kGe: row.lo = r.rhs; break;
      case RowSense::kGt: row.lo = r.rhs + 1; break;
      case RowSense::kEq: row.lo = row.hi = r.rhs; break;
    }
    out.push_back(std::move(row));
  }
  return out;
}

struct Box {
  std::vector<int64_t> lo, hi;
};

// Interval propagation over the rows. Returns false on a proven conflict.
class Propagator {
 public:
  explicit Propagator(const std::vector<Row>& rows, size_t nvars) : rows_(rows), occurs_(nvars) {
    for (size_t r = 0; r < rows.size(); ++r) {
      for (const auto& [v, c] : rows[r].terms) occurs_[v].push_back(static_cast<int>(r));
    }
  }

  bool run(Box& b) const {
    std::deque<int> queue;
    std::vector<char> queued(rows_.size(), 1);
    for (size_t r = 0; r < rows_.size(); ++r) queue.push_back(static_cast<int>(r));
    size_t budget = 20 * rows_.size() + 100;
    while (!queue.empty() && budget-- > 0) {
      int r = queue.front();
      queue.pop_front();
      queued[r] = 0;
      const Row& row = rows_[r];
      i128 amin = 0, amax = 0;
      for (const auto& [v, c] : row.terms) {
        amin += c > 0 ? static_cast<i128>(c) * b.lo[v] : static_cast<i128>(c) * b.hi[v];
        amax += c > 0 ? static_cast<i128>(c) * b.hi[v] : static_cast<i128>(c) * b.lo[v];
      }
      if (row.hi && amin > *row.hi) return false;
      if (row.lo && amax < *row.lo) return false;
      for (const auto& [v, c] : row.terms) {
        i128 cmin = c > 0 ? static_cast<i128>(c) * b.lo[v] : static_cast<i128>(c) * b.hi[v];
        i128 cmax = c > 0 ? static_cast<i128>(c) * b.hi[v] : static_cast<i128>(c) * b.lo[v];
        int64_t nlo = b.lo[v], nhi = b.hi[v];
        if (row.hi) {
          i128 rest = static_cast<i128>(*row.hi) - (amin - cmin);  // c x <= rest
          if (c > 0) {
            nhi = std::min<int64_t>(nhi, clamp64(floor_div(rest, c)));
          } else {
            nlo = std::max<int64_t>(nlo, clamp64(ceil_div(rest, c)));
          }
        }
        if (row.lo) {
          i128 rest = static_cast<i128>(*row.lo) - (amax - cmax);  // c x >= rest
          if (c > 0) {
            nlo = std::max<int64_t>(nlo, clamp64(ceil_div(rest, c)));
          } else {
            nhi = std::min<int64_t>(nhi, clamp64(floor_div(rest, c)));
          }
        }
        if (nlo > nhi) return false;
        if (nlo != b.lo[v] || nhi != b.hi[v]) {
          b.lo[v] = nlo;
          b.hi[v] = nhi;
          for (int o : occurs_[v]) {
            if (!queued[o]) {
              queued[o] = 1;
              queue.push_back(o);
            }
          }
        }
      }
    }
    return true;
  }

 private:
  const std::vector<Row>& rows_;
  std::vector<std::vector<int>> occurs_;
};

// General simplex over exact rationals with bounded variables. Variables
// 0..n-1 are structural, n..n+m-1 are row slacks. Bland's rule.
class Simplex {
 public:
  Simplex(const std::vector<Row>& rows, size_t n) : n_(n) {
    size_t total = n + rows.size();
    lo_.resize(total);
    hi_.resize(total);
    has_lo_.assign(total, false);
    has_hi_.assign(total, false);
    beta_.assign(total, mpq_class(0));
    row_of_.assign(total, -1);
    cols_.resize(total);
    for (size_t r = 0; r < rows.size(); ++r) {
      int s = static_cast<int>(n + r);
      basic_.push_back(s);
      row_of_[s] = static_cast<int>(r);
      std::map<int, mpq_class> t;
      for (const auto& [v, c] : rows[r].terms) t[v] += c;
      for (auto it = t.begin(); it != t.end();) {
        if (it->second == 0) {
          it = t.erase(it);
        } else {
          cols_[it->first].insert(static_cast<int>(r));
          ++it;
        }
      }
      tab_.push_back(std::move(t));
      if (rows[r].lo) {
        has_lo_[s] = true;
        lo_[s] = *rows[r].lo;
      }
      if (rows[r].hi) {
        has_hi_[s] = true;
        hi_[s] = *rows[r].hi;
      }
    }
  }

  void set_bounds(const Box& b) {
    for (size_t v = 0; v < n_; ++v) {
      has_lo_[v] = has_hi_[v] = true;
      lo_[v] = b.lo[v];
      hi_[v] = b.hi[v];
      if (row_of_[v] < 0) {
        if (beta_[v] < lo_[v]) update(static_cast<int>(v), lo_[v]);
        else if (beta_[v] > hi_[v]) update(static_cast<int>(v), hi_[v]);
      }
    }
  }

  // true: feasible. Checks the deadline every few pivots.
  bool check(const std::function<bool()>& interrupted, bool& stopped) {
    stopped = false;
    for (uint64_t iter = 0;; ++iter) {
      if ((iter & 63) == 63 && interrupted()) {
        stopped = true;
        return false;
      }
      int xi = -1;
      bool below = false;
      for (size_t v = 0; v < beta_.size(); ++v) {
        if (row_of_[v] < 0) continue;
        if (has_lo_[v] && beta_[v] < lo_[v]) {
          xi = static_cast<int>(v);
          below = true;
          break;
        }
        if (has_hi_[v] && beta_[v] > hi_[v]) {
          xi = static_cast<int>(v);
          below = false;
          break;
        }
      }
      if (xi < 0) return true;
      const auto& row = tab_[row_of_[xi]];
      int xj = -1;
      for (const auto& [v, a] : row) {
        bool up_ok = !has_hi_[v] || beta_[v] < hi_[v];
        bool down_ok = !has_lo_[v] || beta_[v] > lo_[v];
        bool ok = below ? (a > 0 ? up_ok : down_ok) : (a > 0 ? down_ok : up_ok);
        if (ok) {
          xj = v;
          break;
        }
      }
      if (xj < 0) return false;
      pivot_and_update(xi, xj, below ? lo_[xi] : hi_[xi]);
    }
  }

  const mpq_class& value(int v) const { return beta_[v]; }

 private:
  void update(int xj, const mpq_class& v) {
    mpq_class d = v - beta_[xj];
    for (int r : cols_[xj]) beta_[basic_[r]] += tab_[r].at(xj) * d;
    beta_[xj] = v;
  }

  void pivot_and_update(int xi, int xj, const mpq_class& v) {
    int r = row_of_[xi];
    mpq_class a = tab_[r].at(xj);
    mpq_class theta = (v - beta_[xi]) / a;
    beta_[xi] = v;
    beta_[xj] += theta;
    for (int s : cols_[xj]) {
      if (s != r) beta_[basic_[s]] += tab_[s].at(xj) * theta;
    }
    pivot(r, xi, xj);
  }

  void pivot(int r, int xi, int xj) {
    auto& row = tab_[r];
    mpq_class a = row.at(xj);
    // xj = (1/a) xi - sum_{k != j} (a_k / a) x_k
    std::map<int, mpq_class> nrow;
    for (const auto& [k, c] : row) {
      if (k != xj) nrow[k] = -c / a;
    }
    nrow[xi] = 1 / a;
    for (const auto& [k, c] : row) cols_[k].erase(r);
    for (const auto& [k, c] : nrow) cols_[k].insert(r);
    row = std::move(nrow);
    std::vector<int> others(cols_[xj].begin(), cols_[xj].end());
    for (int s : others) {
      auto& srow = tab_[s];
      mpq_class c = srow.at(xj);
      srow.erase(xj);
      for (const auto& [k, d] : row) {
        auto it = srow.find(k);
        if (it == srow.end()) {
          srow.emplace(k, c * d);
          cols_[k].insert(s);
        } else {
          it->second += c * d;
          if (it->second == 0) {
            srow.erase(it);
            cols_[k].erase(s);
          }
        }
      }
    }
    cols_[xj].clear();
    basic_[r] = xj;
    row_of_[xj] = r;
    row_of_[xi] = -1;
  }

  size_t n_;
  std::vector<mpq_class> lo_, hi_, beta_;
  std::vector<bool> has_lo_, has_hi_;
  std::vector<int> basic_;   // row -> basic variable
  std::vector<int> row_of_;  // variable -> row, -1 when nonbasic
  std::vector<std::map<int, mpq_class>> tab_;
  std::vector<std::set<int>> cols_;  // variable -> rows mentioning it
};

bool integral(const mpq_class& q) { return q.get_den() == 1; }

int64_t floor_q(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f.get_si();
}

}  // namespace

std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnknown: return "unknown";
  }
  return "unknown";
}

SolveResult solve(const MILPProgram& p, const SolveOptions& opts) {
  SolveResult res;
  size_t n = p.vars.size();
  std::vector<Row> rows = normalise_rows(p);
  Propagator prop(rows, n);
  Simplex lp(rows, n);
  auto interrupted = [&] {
    return opts.deadline && std::chrono::steady_clock::now() > *opts.deadline;
  };

  Box root;
  for (const LinVar& v : p.vars) {
    root.lo.push_back(v.lo);
    root.hi.push_back(v.hi);
  }
  std::vector<Box> stack{std::move(root)};
  bool exhausted = true;
  while (!stack.empty()) {
    if (res.nodes >= opts.node_budget || ((res.nodes & 15) == 15 && interrupted())) {
      exhausted = false;
      break;
    }
    ++res.nodes;
    Box box = std::move(stack.back());
    stack.pop_back();
    bool empty = false;
    for (size_t v = 0; v < n && !empty; ++v) empty = box.lo[v] > box.hi[v];
    if (empty || !prop.run(box)) continue;
    lp.set_bounds(box);
    bool stopped = false;
    if (!lp.check(interrupted, stopped)) {
      if (stopped) {
        exhausted = false;
        break;
      }
      continue;
    }
    int branch = -1;
    for (int pass = 0; pass < 2 && branch < 0; ++pass) {
      for (size_t v = 0; v < n; ++v) {
        if (p.vars[v].boolean == (pass == 0) && !integral(lp.value(static_cast<int>(v)))) {
          branch = static_cast<int>(v);
          break;
        }
      }
    }
    if (branch < 0) {
      std::vector<int64_t> x(n);
      for (size_t v = 0; v < n; ++v) x[v] = lp.value(static_cast<int>(v)).get_num().get_si();
      if (p.satisfied_by(x)) {
        res.status = SolveStatus::kFeasible;
        res.values = std::move(x);
        return res;
      }
      exhausted = false;  // should not happen; do not claim infeasibility
      continue;
    }
    const mpq_class& val = lp.value(branch);
    int64_t f = floor_q(val);
    Box down = box, up = box;
    down.hi[branch] = f;
    up.lo[branch] = f + 1;
    // Explore the nearer side first (it is pushed last).
    if (val - f >= mpq_class(1, 2)) {
      stack.push_back(std::move(down));
      stack.push_back(std::move(up));
    } else {
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
    }
  }
  res.status = exhausted ? SolveStatus::kInfeasible : SolveStatus::kUnknown;
  return res;
}

SatResult check_sat(const Cond& f, const VarTable& vars, const CompileOptions& copts,
                    const SolveOptions& sopts) {
  SatResult out;
  MILPProgram p;
  try {
    p = compile(f, vars, copts);
  } catch (const NotApplicable& e) {
    out.note = e.what();
    return out;
  }
  SolveResult r = solve(p, sopts);
  out.nodes = r.nodes;
  out.status = r.status;
  if (r.status == SolveStatus::kUnknown) {
    out.note = "search budget exhausted";
  } else if (r.status == SolveStatus::kFeasible) {
    out.witness = p.decode(r.values);
    for (const std::string& name : attrs_of(f)) {
      if (out.witness.count(name)) continue;
      auto it = vars.find(name);
      Type t = it == vars.end() ? Type::kInteger : it->second.type;
      switch (t) {
        case Type::kText: out.witness[name] = Value::text(""); break;
        case Type::kBoolean: out.witness[name] = Value::boolean(false); break;
        case Type::kDecimal: out.witness[name] = Value::decimal_units(0); break;
        default: out.witness[name] = Value::integer(0); break;
      }
    }
    bool ok = false;
    try {
      ok = eval_sym(f, out.witness);
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) {
      out.status = SolveStatus::kUnknown;
      out.note = "witness does not satisfy the formula";
    }
  }
  return out;
}

std::optional<Assignment> brute_force_sat(
    const Cond& f, const std::map<std::string, std::vector<Value>>& domains) {
  std::vector<std::string> names;
  std::vector<const std::vector<Value>*> doms;
  double total = 1;
  for (const auto& [name, d] : domains) {
    if (d.empty()) return std::nullopt;
    names.push_back(name);
    doms.push_back(&d);
    total *= static_cast<double>(d.size());
  }
  if (total > 1e6) throw NotApplicable("domain product exceeds 10^6");
  std::vector<size_t> idx(names.size(), 0);
  Assignment a;
  while (true) {
    for (size_t i = 0; i < names.size(); ++i) a[names[i]] = (*doms[i])[idx[i]];
    if (eval_sym(f, a)) return a;
    size_t k = 0;
    while (k < idx.size() && ++idx[k] == doms[k]->size()) idx[k++] = 0;
    if (k == idx.size()) return std::nullopt;
  }
}

}  // namespace histif
