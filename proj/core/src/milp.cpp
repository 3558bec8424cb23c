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

#include "histif/milp.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <unordered_map>

#include "histif/error.hpp"

namespace histif {

namespace {

using i128 = __int128;

constexpr i128 kLimit = static_cast<i128>(1) << 62;

int64_t narrow(i128 v) {
  if (v > kLimit || v < -kLimit) {
    throw NotApplicable("constraint coefficients exceed 62 bits");
  }
  return static_cast<int64_t>(v);
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

struct Interval {
  std::optional<int64_t> lo, hi;
  bool bounded() const { return lo && hi; }
};

Interval meet(const Interval& a, const Interval& b) {
  Interval out = a;
  if (b.lo) out.lo = out.lo ? std::max(*out.lo, *b.lo) : *b.lo;
  if (b.hi) out.hi = out.hi ? std::min(*out.hi, *b.hi) : *b.hi;
  return out;
}

Interval hull(const Interval& a, const Interval& b) {
  Interval out;
  if (a.lo && b.lo) out.lo = std::min(*a.lo, *b.lo);
  if (a.hi && b.hi) out.hi = std::max(*a.hi, *b.hi);
  return out;
}

using BoundMap = std::map<std::string, Interval>;

struct Operand {
  int var = -1;
  int64_t coef = 0;
  int64_t konst = 0;
  int64_t lo = 0, hi = 0;
};

class Compiler {
 public:
  Compiler(const VarTable& vars, const CompileOptions& opts, MILPProgram& p)
      : vars_(vars), opts_(opts), p_(p) {}

  void run(const Cond& f) {
    setup(f);
    if (opts_.flatten_top_level) {
      assert_true(f);
    } else {
      int b = compile_bool(f);
      p_.root = b;
      add_row({{b, 1}}, RowSense::kEq, 1);
    }
  }

 private:
  // ---- setup -------------------------------------------------------------

  void scan(const Expr& e, bool& decimals, std::set<std::string>& texts,
            std::set<std::string>& names) {
    switch (e->kind) {
      case ExprKind::kAttr:
        names.insert(e->name);
        if (type_of(e->name) == Type::kDecimal) decimals = true;
        break;
      case ExprKind::kConst:
        if (e->value.type() == Type::kDecimal) decimals = true;
        if (e->value.type() == Type::kText) texts.insert(e->value.str());
        break;
      case ExprKind::kArith:
        scan(e->lhs, decimals, texts, names);
        scan(e->rhs, decimals, texts, names);
        break;
      case ExprKind::kCase:
        scan(e->cond, decimals, texts, names);
        scan(e->lhs, decimals, texts, names);
        scan(e->rhs, decimals, texts, names);
        break;
    }
  }

  void scan(const Cond& c, bool& decimals, std::set<std::string>& texts,
            std::set<std::string>& names) {
    if (!seen_.insert(c.get()).second) return;
    if (c->lhs) scan(c->lhs, decimals, texts, names);
    if (c->rhs) scan(c->rhs, decimals, texts, names);
    for (const Cond& k : c->kids) scan(k, decimals, texts, names);
  }

  Type type_of(const std::string& name) const {
    auto it = vars_.find(name);
    return it == vars_.end() ? Type::kInteger : it->second.type;
  }

  bool nullable(const std::string& name) const {
    auto it = vars_.find(name);
    return it != vars_.end() && it->second.nullable;
  }

  void setup(const Cond& f) {
    bool decimals = false;
    std::set<std::string> texts(opts_.text_values.begin(), opts_.text_values.end());
    std::set<std::string> names;
    scan(f, decimals, texts, names);
    seen_.clear();
    for (const auto& [name, b] : opts_.bounds) {
      if (b.first.type() == Type::kDecimal || b.second.type() == Type::kDecimal) {
        decimals = true;
      }
    }
    p_.scale = decimals ? narrow(static_cast<i128>(scale_factor().small())) : 1;
    p_.dictionary.assign(texts.begin(), texts.end());
    size_t text_vars = 0;
    for (const std::string& n : names) text_vars += type_of(n) == Type::kText;
    p_.text_gap = static_cast<int64_t>(text_vars) + 2;

    std::vector<Cond> top;
    flatten(f, top);
    for (const Cond& c : top) {
      for (auto& [name, iv] : bounds_of(c)) bounds_[name] = meet(bounds_[name], iv);
    }
    for (const auto& [name, b] : opts_.bounds) {
      Interval iv{scaled(b.first), scaled(b.second)};
      bounds_[name] = meet(bounds_[name], iv);
    }
    // Definitions x = e inherit the interval of e.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Cond& c : top) {
        if (c->kind != CondKind::kCmp || c->op != CmpOp::kEq) continue;
        if (c->lhs->kind != ExprKind::kAttr) continue;
        Interval iv = interval(c->rhs);
        if (iv.bounded()) bounds_[c->lhs->name] = meet(bounds_[c->lhs->name], iv);
      }
    }
  }

  static void flatten(const Cond& c, std::vector<Cond>& out) {
    if (c->kind == CondKind::kAnd) {
      for (const Cond& k : c->kids) flatten(k, out);
    } else {
      out.push_back(c);
    }
  }

  int64_t text_code(const std::string& s) const {
    auto it = std::lower_bound(p_.dictionary.begin(), p_.dictionary.end(), s);
    if (it == p_.dictionary.end() || *it != s) {
      throw NotApplicable("text constant outside the dictionary");
    }
    return narrow(static_cast<i128>(it - p_.dictionary.begin() + 1) * p_.text_gap);
  }

  int64_t scaled(const Value& v) const {
    switch (v.type()) {
      case Type::kNull: throw NotApplicable("NULL constant in constraint");
      case Type::kBoolean: return v.flag() ? 1 : 0;
      case Type::kText: return text_code(v.str());
      case Type::kInteger: {
        if (!v.number().is_small()) throw NotApplicable("integer constant exceeds 64 bits");
        return narrow(static_cast<i128>(v.number().small()) * p_.scale);
      }
      case Type::kDecimal: {
        if (!v.number().is_small()) throw NotApplicable("decimal constant exceeds 64 bits");
        return v.number().small();  // scale is 10^s whenever decimals occur
      }
    }
    return 0;
  }

  BoundMap bounds_of(const Cond& c) {
    BoundMap out;
    switch (c->kind) {
      case CondKind::kCmp: {
        Expr a = c->lhs, b = c->rhs;
        CmpOp op = c->op;
        if (a->kind == ExprKind::kConst && b->kind == ExprKind::kAttr) {
          std::swap(a, b);
          op = flip(op);
        }
        if (a->kind != ExprKind::kAttr || b->kind != ExprKind::kConst) break;
        if (b->value.is_null() || b->value.type() == Type::kText) break;
        int64_t k = scaled(b->value);
        Interval iv;
        switch (op) {
          case CmpOp::kEq: iv = {k, k}; break;
          case CmpOp::kLe: iv.hi = k; break;
          case CmpOp::kLt: iv.hi = k - 1; break;
          case CmpOp::kGe: iv.lo = k; break;
          case CmpOp::kGt: iv.lo = k + 1; break;
          case CmpOp::kNe: return out;
        }
        out[a->name] = iv;
        break;
      }
      case CondKind::kAnd:
        for (const Cond& k : c->kids) {
          for (auto& [name, iv] : bounds_of(k)) out[name] = meet(out[name], iv);
        }
        break;
      case CondKind::kOr: {
        bool first = true;
        for (const Cond& k : c->kids) {
          BoundMap m = bounds_of(k);
          if (first) {
            out = m;
            first = false;
            continue;
          }
          BoundMap merged;
          for (auto& [name, iv] : out) {
            auto it = m.find(name);
            if (it != m.end()) merged[name] = hull(iv, it->second);
          }
          out = merged;
        }
        break;
      }
      default: break;
    }
    return out;
  }

  Interval interval(const Expr& e) {
    switch (e->kind) {
      case ExprKind::kAttr: {
        Type t = type_of(e->name);
        if (t == Type::kBoolean) return {0, 1};
        if (t == Type::kText) return {0, text_max()};
        auto it = bounds_.find(e->name);
        return it == bounds_.end() ? Interval{} : it->second;
      }
      case ExprKind::kConst:
        if (e->value.is_null()) return {};
        return {scaled(e->value), scaled(e->value)};
      case ExprKind::kArith: {
        Interval a = interval(e->lhs), b = interval(e->rhs);
        if (!a.bounded() || !b.bounded()) return {};
        if (e->op == ArithOp::kAdd) {
          return {narrow(static_cast<i128>(*a.lo) + *b.lo),
                  narrow(static_cast<i128>(*a.hi) + *b.hi)};
        }
        if (e->op == ArithOp::kSub) {
          return {narrow(static_cast<i128>(*a.lo) - *b.hi),
                  narrow(static_cast<i128>(*a.hi) - *b.lo)};
        }
        if (e->op == ArithOp::kMul) {
          std::optional<int64_t> m;
          Interval x;
          if (e->lhs->kind == ExprKind::kConst) {
            m = integral_factor(e->lhs->value);
            x = b;
          } else if (e->rhs->kind == ExprKind::kConst) {
            m = integral_factor(e->rhs->value);
            x = a;
          }
          if (!m) return {};
          i128 p1 = static_cast<i128>(*m) * *x.lo, p2 = static_cast<i128>(*m) * *x.hi;
          return {narrow(std::min(p1, p2)), narrow(std::max(p1, p2))};
        }
        return {};
      }
      case ExprKind::kCase: {
        Interval a = interval(e->lhs), b = interval(e->rhs);
        if (!a.bounded() || !b.bounded()) return {};
        return hull(a, b);
      }
    }
    return {};
  }

  int64_t text_max() const {
    return narrow(static_cast<i128>(p_.dictionary.size() + 1) * p_.text_gap);
  }

  // Integer multiplier represented by a constant, if it is integral.
  std::optional<int64_t> integral_factor(const Value& v) const {
    if (!v.is_numeric() || !v.number().is_small()) return std::nullopt;
    if (v.type() == Type::kInteger) return v.number().small();
    int64_t units = v.number().small();
    int64_t f = scale_factor().small();
    if (units % f != 0) return std::nullopt;
    return units / f;
  }

  // ---- emission ------------------------------------------------------------

  int new_var(const std::string& prefix, bool boolean, int64_t lo, int64_t hi,
              const std::string& name = "") {
    int id = static_cast<int>(p_.vars.size());
    p_.vars.push_back({name.empty() ? prefix + std::to_string(id) : name, boolean, lo, hi});
    return id;
  }

  struct RowBuilder {
    std::map<int, i128> terms;
    i128 konst = 0;
    void add(const Operand& o, i128 mult) {
      if (o.var >= 0) terms[o.var] += mult * o.coef;
      konst += mult * o.konst;
    }
    void add_var(int v, i128 mult) { terms[v] += mult; }
  };

  void emit(const RowBuilder& rb, RowSense sense, i128 rhs) {
    LinRow row;
    for (const auto& [v, c] : rb.terms) {
      if (c != 0) row.terms.emplace_back(v, narrow(c));
    }
    row.sense = sense;
    row.rhs = narrow(rhs - rb.konst);
    p_.rows.push_back(std::move(row));
  }

  void add_row(std::vector<std::pair<int, int64_t>> terms, RowSense sense, int64_t rhs) {
    p_.rows.push_back({std::move(terms), sense, rhs});
  }

  Operand var_operand(int v) const {
    return {v, 1, 0, p_.vars[v].lo, p_.vars[v].hi};
  }

  Operand constant(int64_t k) const { return {-1, 0, k, k, k}; }

  Operand symbol(const std::string& name) {
    auto it = p_.symbols.find(name);
    if (it != p_.symbols.end()) {
      const SymbolEncoding& s = it->second;
      Operand o{s.var, s.coef, s.konst, s.konst, s.konst};
      if (s.var >= 0) {
        i128 a = static_cast<i128>(s.coef) * p_.vars[s.var].lo + s.konst;
        i128 b = static_cast<i128>(s.coef) * p_.vars[s.var].hi + s.konst;
        o.lo = narrow(std::min(a, b));
        o.hi = narrow(std::max(a, b));
      }
      return o;
    }
    Type t = type_of(name);
    SymbolEncoding enc;
    enc.type = t;
    if (t == Type::kBoolean) {
      enc.var = new_var("", true, 0, 1, name);
      enc.coef = 1;
    } else if (t == Type::kText) {
      enc.var = new_var("", false, 0, text_max(), name);
      enc.coef = 1;
    } else {
      Interval iv = bounds_[name];
      if (!iv.bounded()) throw NotApplicable("no bound derivable for variable " + name);
      if (t == Type::kInteger && p_.scale > 1) {
        int64_t lo = narrow(ceil_div(*iv.lo, p_.scale));
        int64_t hi = narrow(floor_div(*iv.hi, p_.scale));
        enc.var = new_var("", false, lo, hi, name);
        enc.coef = p_.scale;
      } else {
        enc.var = new_var("", false, *iv.lo, *iv.hi, name);
        enc.coef = 1;
      }
    }
    p_.symbols[name] = enc;
    return symbol(name);
  }

  Operand compile_expr(const Expr& e) {
    auto it = expr_memo_.find(e);
    if (it != expr_memo_.end()) return it->second;
    Operand out;
    switch (e->kind) {
      case ExprKind::kAttr: out = symbol(e->name); break;
      case ExprKind::kConst: out = constant(scaled(e->value)); break;
      case ExprKind::kArith: {
        if (e->op == ArithOp::kDiv) throw NotApplicable("division in constraint");
        Operand a = compile_expr(e->lhs), b = compile_expr(e->rhs);
        if (e->op == ArithOp::kMul) {
          std::optional<int64_t> m;
          Operand x;
          if (a.var < 0 && e->lhs->kind == ExprKind::kConst) {
            m = integral_factor(e->lhs->value);
            x = b;
          } else if (b.var < 0 && e->rhs->kind == ExprKind::kConst) {
            m = integral_factor(e->rhs->value);
            x = a;
          }
          if (!m) throw NotApplicable("non-linear multiplication in constraint");
          i128 p1 = static_cast<i128>(*m) * x.lo, p2 = static_cast<i128>(*m) * x.hi;
          int v = new_var("v", false, narrow(std::min(p1, p2)), narrow(std::max(p1, p2)));
          RowBuilder rb;
          rb.add(x, *m);
          rb.add_var(v, -1);
          emit(rb, RowSense::kEq, 0);
          out = var_operand(v);
          break;
        }
        int sign = e->op == ArithOp::kAdd ? 1 : -1;
        i128 lo = sign > 0 ? static_cast<i128>(a.lo) + b.lo : static_cast<i128>(a.lo) - b.hi;
        i128 hi = sign > 0 ? static_cast<i128>(a.hi) + b.hi : static_cast<i128>(a.hi) - b.lo;
        int v = new_var("v", false, narrow(lo), narrow(hi));
        RowBuilder rb;
        rb.add(a, 1);
        rb.add(b, sign);
        rb.add_var(v, -1);
        emit(rb, RowSense::kEq, 0);
        out = var_operand(v);
        break;
      }
      case ExprKind::kCase: {
        int bc = compile_bool(e->cond);
        Operand a = compile_expr(e->lhs), b = compile_expr(e->rhs);
        if (p_.vars[bc].lo == p_.vars[bc].hi) {
          out = p_.vars[bc].lo == 1 ? a : b;
          break;
        }
        int64_t lo = std::min({a.lo, b.lo, int64_t{0}});
        int64_t hi = std::max({a.hi, b.hi, int64_t{0}});
        int64_t m = big_m(narrow(static_cast<i128>(hi) - lo + 1));
        int vif = new_var("v", false, std::min(a.lo, int64_t{0}), std::max(a.hi, int64_t{0}));
        int velse = new_var("v", false, std::min(b.lo, int64_t{0}), std::max(b.hi, int64_t{0}));
        int v = new_var("v", false, std::min(a.lo, b.lo), std::max(a.hi, b.hi));
        RowBuilder r1;
        r1.add_var(vif, 1);
        r1.add_var(velse, 1);
        r1.add_var(v, -1);
        emit(r1, RowSense::kEq, 0);
        // then-branch: v_if = v1 when bc, else 0
        RowBuilder r2;
        r2.add_var(vif, 1);
        r2.add(a, -1);
        r2.add_var(bc, m);
        emit(r2, RowSense::kLe, m);
        RowBuilder r3;
        r3.add_var(vif, 1);
        r3.add(a, -1);
        r3.add_var(bc, -m);
        emit(r3, RowSense::kGe, -static_cast<i128>(m));
        emit_pair(vif, bc, m, RowSense::kLe, 0);
        emit_pair(vif, bc, -m, RowSense::kGe, 0);
        // else-branch: v_else = v2 when not bc, else 0
        RowBuilder r6;
        r6.add_var(velse, 1);
        r6.add(b, -1);
        r6.add_var(bc, -m);
        emit(r6, RowSense::kLe, 0);
        emit_pair(velse, bc, -m, RowSense::kLe, -static_cast<i128>(m));
        RowBuilder r8;
        r8.add_var(velse, 1);
        r8.add(b, -1);
        r8.add_var(bc, m);
        emit(r8, RowSense::kGe, 0);
        emit_pair(velse, bc, m, RowSense::kGe, m);
        out = var_operand(v);
        break;
      }
    }
    expr_memo_.emplace(e, out);
    return out;
  }

  // x - coef_b * b  (sense)  rhs, written as x + (-coef_b) b; callers pass
  // the coefficient of b already negated where needed.
  void emit_pair(int x, int b, int64_t coef_b, RowSense sense, i128 rhs) {
    RowBuilder rb;
    rb.add_var(x, 1);
    rb.add_var(b, -static_cast<i128>(coef_b));
    emit(rb, sense, -rhs);
  }

  int64_t big_m(int64_t width) const {
    i128 floor = static_cast<i128>(opts_.big_m_floor) * p_.scale;
    return narrow(std::max<i128>(width, floor));
  }

  int fixed_bool(bool v) {
    int& slot = v ? true_var_ : false_var_;
    if (slot < 0) slot = new_var("b", true, v ? 1 : 0, v ? 1 : 0);
    return slot;
  }

  // b <=> a < c (strict) or a <= c.
  int compile_less(const Operand& a, const Operand& c, bool strict) {
    if (strict ? a.hi < c.lo : a.hi <= c.lo) return fixed_bool(true);
    if (strict ? a.lo >= c.hi : a.lo > c.hi) return fixed_bool(false);
    int64_t lo = std::min(a.lo, c.lo), hi = std::max(a.hi, c.hi);
    int64_t m = big_m(narrow(static_cast<i128>(hi) - lo + 1));
    int b = new_var("b", true, 0, 1);
    RowBuilder r1;  // v1 - v2 + bM  (>= | >) 0
    r1.add(a, 1);
    r1.add(c, -1);
    r1.add_var(b, m);
    emit(r1, strict ? RowSense::kGe : RowSense::kGt, 0);
    RowBuilder r2;  // v2 - v1 + (1 - b)M  (> | >=) 0
    r2.add(c, 1);
    r2.add(a, -1);
    r2.add_var(b, -m);
    emit(r2, strict ? RowSense::kGt : RowSense::kGe, -static_cast<i128>(m));
    return b;
  }

  int junction(const std::vector<int>& kids, bool conj) {
    std::vector<int> open;
    for (int k : kids) {
      const LinVar& v = p_.vars[k];
      if (v.lo == v.hi) {
        if (conj && v.lo == 0) return fixed_bool(false);
        if (!conj && v.lo == 1) return fixed_bool(true);
        continue;
      }
      if (std::find(open.begin(), open.end(), k) == open.end()) open.push_back(k);
    }
    if (open.empty()) return fixed_bool(conj);
    if (open.size() == 1) return open[0];
    int b = new_var("b", true, 0, 1);
    i128 k = static_cast<i128>(open.size());
    RowBuilder r1, r2;
    for (int v : open) {
      r1.add_var(v, 1);
      r2.add_var(v, 1);
    }
    if (conj) {
      r1.add_var(b, -k);
      emit(r1, RowSense::kLe, k - 1);
      r2.add_var(b, -k);
      emit(r2, RowSense::kGe, 0);
    } else {
      r1.add_var(b, -k);
      emit(r1, RowSense::kLe, 0);
      r2.add_var(b, -1);
      emit(r2, RowSense::kGe, 0);
    }
    return b;
  }

  int negate(int k) {
    const LinVar& v = p_.vars[k];
    if (v.lo == v.hi) return fixed_bool(v.lo == 0);
    int b = new_var("b", true, 0, 1);
    add_row({{b, 1}, {k, 1}}, RowSense::kEq, 1);
    return b;
  }

  bool nullable_expr(const Expr& e) const {
    switch (e->kind) {
      case ExprKind::kAttr: return nullable(e->name);
      case ExprKind::kConst: return e->value.is_null();
      case ExprKind::kArith:
        return e->op == ArithOp::kDiv || nullable_expr(e->lhs) || nullable_expr(e->rhs);
      case ExprKind::kCase: return nullable_expr(e->lhs) || nullable_expr(e->rhs);
    }
    return true;
  }

  int compile_cmp(CmpOp op, const Operand& a, const Operand& c) {
    switch (op) {
      case CmpOp::kLt: return compile_less(a, c, true);
      case CmpOp::kLe: return compile_less(a, c, false);
      case CmpOp::kGt: return compile_less(c, a, true);
      case CmpOp::kGe: return compile_less(c, a, false);
      case CmpOp::kEq:
        return junction({compile_less(a, c, false), compile_less(c, a, false)}, true);
      case CmpOp::kNe:
        return negate(junction({compile_less(a, c, false), compile_less(c, a, false)}, true));
    }
    return fixed_bool(false);
  }

  int compile_bool(const Cond& c) {
    auto it = cond_memo_.find(c);
    if (it != cond_memo_.end()) return it->second;
    int out = -1;
    switch (c->kind) {
      case CondKind::kTrue: out = fixed_bool(true); break;
      case CondKind::kFalse: out = fixed_bool(false); break;
      case CondKind::kCmp:
        out = compile_cmp(c->op, compile_expr(c->lhs), compile_expr(c->rhs));
        break;
      case CondKind::kAnd:
      case CondKind::kOr: {
        std::vector<int> kids;
        for (const Cond& k : c->kids) kids.push_back(compile_bool(k));
        out = junction(kids, c->kind == CondKind::kAnd);
        break;
      }
      case CondKind::kNot: out = negate(compile_bool(c->kids[0])); break;
      case CondKind::kIsNull:
        if (nullable_expr(c->lhs)) throw NotApplicable("IS NULL over a nullable term");
        out = fixed_bool(false);
        break;
    }
    cond_memo_.emplace(c, out);
    return out;
  }

  void assert_true(const Cond& c) {
    switch (c->kind) {
      case CondKind::kTrue: return;
      case CondKind::kFalse: add_row({}, RowSense::kGe, 1); return;
      case CondKind::kAnd:
        for (const Cond& k : c->kids) assert_true(k);
        return;
      case CondKind::kCmp: {
        if (c->op == CmpOp::kEq && c->lhs->kind == ExprKind::kAttr &&
            !p_.symbols.count(c->lhs->name) && !opts_.bounds.count(c->lhs->name) &&
            !attrs_of(c->rhs).count(c->lhs->name)) {
          // Definition: the variable becomes an alias of the right side.
          Operand o = compile_expr(c->rhs);
          Type t = type_of(c->lhs->name);
          if (!(t == Type::kInteger && p_.scale > 1)) {
            p_.symbols[c->lhs->name] = {o.var, o.coef, o.konst, t};
            return;
          }
        }
        if (c->op == CmpOp::kNe) break;
        Operand a = compile_expr(c->lhs), b = compile_expr(c->rhs);
        RowBuilder rb;
        rb.add(a, 1);
        rb.add(b, -1);
        static const RowSense kSense[] = {RowSense::kEq, RowSense::kEq, RowSense::kLt,
                                          RowSense::kLe, RowSense::kGt, RowSense::kGe};
        emit(rb, kSense[static_cast<int>(c->op)], 0);
        return;
      }
      default: break;
    }
    int b = compile_bool(c);
    LinVar& v = p_.vars[b];
    if (v.hi == 0) {
      add_row({}, RowSense::kGe, 1);
    } else if (v.lo == 0) {
      add_row({{b, 1}}, RowSense::kEq, 1);
    }
  }

  const VarTable& vars_;
  const CompileOptions& opts_;
  MILPProgram& p_;
  BoundMap bounds_;
  std::set<const CondNode*> seen_;
  std::unordered_map<Expr, Operand, ExprHash, ExprEq> expr_memo_;
  std::unordered_map<Cond, int, CondHash, CondEq> cond_memo_;
  int true_var_ = -1, false_var_ = -1;
};

}  // namespace

MILPProgram compile(const Cond& f, const VarTable& vars, const CompileOptions& opts) {
  MILPProgram p;
  Compiler c(vars, opts, p);
  c.run(f);
  return p;
}

bool MILPProgram::satisfied_by(const std::vector<int64_t>& x) const {
  if (x.size() != vars.size()) return false;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (x[i] < vars[i].lo || x[i] > vars[i].hi) return false;
  }
  for (const LinRow& r : rows) {
    i128 s = 0;
    for (const auto& [v, c] : r.terms) s += static_cast<i128>(c) * x[v];
    bool ok = true;
    switch (r.sense) {
      case RowSense::kLe: ok = s <= r.rhs; break;
      case RowSense::kGe: ok = s >= r.rhs; break;
      case RowSense::kEq: ok = s == r.rhs; break;
      case RowSense::kLt: ok = s < r.rhs; break;
      case RowSense::kGt: ok = s > r.rhs; break;
    }
    if (!ok) return false;
  }
  return true;
}

Assignment MILPProgram::decode(const std::vector<int64_t>& x) const {
  Assignment out;
  for (const auto& [name, s] : symbols) {
    i128 v = s.konst;
    if (s.var >= 0) v += static_cast<i128>(s.coef) * x[s.var];
    switch (s.type) {
      case Type::kBoolean: out[name] = Value::boolean(v != 0); break;
      case Type::kText: {
        int64_t code = static_cast<int64_t>(v);
        int64_t j = code / text_gap, r = code % text_gap;
        if (r == 0 && j >= 1 && j <= static_cast<int64_t>(dictionary.size())) {
          out[name] = Value::text(dictionary[j - 1]);
        } else if (j == 0 || dictionary.empty()) {
          out[name] = Value::text(std::string(std::max<int64_t>(code - 1, 0), '\x01'));
        } else {
          int64_t k = std::min<int64_t>(j, static_cast<int64_t>(dictionary.size()));
          out[name] = Value::text(dictionary[k - 1] + std::string(code - k * text_gap, '\x01'));
        }
        break;
      }
      case Type::kInteger:
        out[name] = Value::integer(BigInt(static_cast<int64_t>(v / scale)));
        break;
      case Type::kDecimal: {
        i128 units = scale == 1 ? v * scale_factor().small() : v;
        out[name] = Value::decimal_units(BigInt(static_cast<int64_t>(units)));
        break;
      }
      case Type::kNull: break;
    }
  }
  return out;
}

std::string MILPProgram::to_lp() const {
  auto term_list = [&](const LinRow& r) {
    std::string s;
    for (size_t i = 0; i < r.terms.size(); ++i) {
      int64_t c = r.terms[i].second;
      s += (c < 0 ? " - " : (i ? " + " : " "));
      int64_t a = c < 0 ? -c : c;
      if (a != 1) s += std::to_string(a) + " ";
      s += vars[r.terms[i].first].name;
    }
    if (r.terms.empty()) s = " 0 " + (vars.empty() ? std::string("x") : vars[0].name);
    return s;
  };
  std::string out = "\\ histif feasibility program, scale " + std::to_string(scale) + "\n";
  out += "Minimize\n obj:";
  out += vars.empty() ? "\n" : " 0 " + vars[0].name + "\n";
  out += "Subject To\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const LinRow& r = rows[i];
    std::string rel;
    int64_t rhs = r.rhs;
    switch (r.sense) {
      case RowSense::kLe: rel = "<="; break;
      case RowSense::kGe: rel = ">="; break;
      case RowSense::kEq: rel = "="; break;
      case RowSense::kLt: rel = "<="; rhs -= 1; break;  // integral rows
      case RowSense::kGt: rel = ">="; rhs += 1; break;
    }
    out += " c" + std::to_string(i) + ":" + term_list(r) + " " + rel + " " +
           std::to_string(rhs) + "\n";
  }
  out += "Bounds\n";
  for (const LinVar& v : vars) {
    out += " " + std::to_string(v.lo) + " <= " + v.name + " <= " + std::to_string(v.hi) + "\n";
  }
  std::string bins, ints;
  for (const LinVar& v : vars) (v.boolean ? bins : ints) += " " + v.name + "\n";
  if (!bins.empty()) out += "Binary\n" + bins;
  if (!ints.empty()) out += "General\n" + ints;
  return out + "End\n";
}

}  // namespace histif
