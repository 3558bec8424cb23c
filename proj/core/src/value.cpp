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

#include "histif/value.hpp"

#include <atomic>
#include <functional>

#include "histif/error.hpp"

namespace histif {

namespace {

std::atomic<int> g_scale{2};

}  // namespace

BigInt::BigInt(const mpz_class& v) {
  if (v.fits_slong_p()) {
    small_ = v.get_si();
  } else {
    big_ = std::make_shared<const mpz_class>(v);
  }
}

void BigInt::normalize() {
  if (big_ && big_->fits_slong_p()) {
    small_ = big_->get_si();
    big_.reset();
  }
}

std::optional<BigInt> BigInt::parse(std::string_view s) {
  size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return std::nullopt;
  for (size_t j = i; j < s.size(); ++j) {
    if (s[j] < '0' || s[j] > '9') return std::nullopt;
  }
  std::string buf(s[0] == '+' ? s.substr(1) : s);
  return BigInt(mpz_class(buf, 10));
}

mpz_class BigInt::to_mpz() const {
  if (big_) return *big_;
  return mpz_class(static_cast<long>(small_));
}

std::string BigInt::to_string() const {
  if (big_) return big_->get_str(10);
  return std::to_string(small_);
}

int BigInt::sign() const {
  if (big_) return sgn(*big_);
  return (small_ > 0) - (small_ < 0);
}

size_t BigInt::hash() const {
  if (big_) return std::hash<std::string>()(big_->get_str(16));
  return std::hash<int64_t>()(small_);
}

BigInt BigInt::operator-() const {
  if (!big_ && small_ != INT64_MIN) return BigInt(-small_);
  return BigInt(mpz_class(-to_mpz()));
}

BigInt operator+(const BigInt& a, const BigInt& b) {
  int64_t r;
  if (a.is_small() && b.is_small() &&
      !__builtin_add_overflow(a.small_, b.small_, &r)) {
    return BigInt(r);
  }
  return BigInt(mpz_class(a.to_mpz() + b.to_mpz()));
}

BigInt operator-(const BigInt& a, const BigInt& b) {
  int64_t r;
  if (a.is_small() && b.is_small() &&
      !__builtin_sub_overflow(a.small_, b.small_, &r)) {
    return BigInt(r);
  }
  return BigInt(mpz_class(a.to_mpz() - b.to_mpz()));
}

BigInt operator*(const BigInt& a, const BigInt& b) {
  int64_t r;
  if (a.is_small() && b.is_small() &&
      !__builtin_mul_overflow(a.small_, b.small_, &r)) {
    return BigInt(r);
  }
  return BigInt(mpz_class(a.to_mpz() * b.to_mpz()));
}

BigInt BigInt::div_trunc(const BigInt& a, const BigInt& b) {
  if (a.is_small() && b.is_small() &&
      !(a.small_ == INT64_MIN && b.small_ == -1)) {
    return BigInt(a.small_ / b.small_);
  }
  mpz_class q;
  mpz_tdiv_q(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return BigInt(q);
}

bool BigInt::divides(const BigInt& d, const BigInt& a) {
  if (d.sign() == 0) return a.sign() == 0;
  if (a.is_small() && d.is_small() && d.small_ != -1) {
    return a.small_ % d.small_ == 0;
  }
  return mpz_divisible_p(a.to_mpz().get_mpz_t(), d.to_mpz().get_mpz_t()) != 0;
}

BigInt BigInt::pow10(int e) {
  BigInt r(1);
  for (int i = 0; i < e; ++i) r = r * BigInt(10);
  return r;
}

int compare(const BigInt& a, const BigInt& b) {
  if (a.is_small() && b.is_small()) {
    return (a.small_ > b.small_) - (a.small_ < b.small_);
  }
  int c = cmp(a.to_mpz(), b.to_mpz());
  return (c > 0) - (c < 0);
}

std::string_view type_name(Type t) {
  switch (t) {
    case Type::kNull: return "null";
    case Type::kInteger: return "integer";
    case Type::kDecimal: return "decimal";
    case Type::kText: return "text";
    case Type::kBoolean: return "boolean";
  }
  return "null";
}

Type parse_type(std::string_view name) {
  if (name == "integer" || name == "int") return Type::kInteger;
  if (name == "decimal") return Type::kDecimal;
  if (name == "text" || name == "string") return Type::kText;
  if (name == "boolean" || name == "bool") return Type::kBoolean;
  if (name == "null") return Type::kNull;
  throw DataError("unknown type '" + std::string(name) + "'");
}

int decimal_scale() { return g_scale.load(std::memory_order_relaxed); }

void set_decimal_scale(int s) {
  if (s < 0 || s > 18) throw DataError("decimal scale out of range");
  g_scale.store(s, std::memory_order_relaxed);
}

BigInt scale_factor() { return BigInt::pow10(decimal_scale()); }

std::string_view arith_symbol(ArithOp op) {
  switch (op) {
    case ArithOp::kAdd: return "+";
    case ArithOp::kSub: return "-";
    case ArithOp::kMul: return "*";
    case ArithOp::kDiv: return "/";
  }
  return "?";
}

Value Value::integer(BigInt v) {
  Value r;
  r.type_ = Type::kInteger;
  r.num_ = std::move(v);
  return r;
}

Value Value::decimal_units(BigInt units) {
  Value r;
  r.type_ = Type::kDecimal;
  r.num_ = std::move(units);
  return r;
}

Value Value::text(std::string s) {
  Value r;
  r.type_ = Type::kText;
  r.str_ = std::move(s);
  return r;
}

Value Value::boolean(bool b) {
  Value r;
  r.type_ = Type::kBoolean;
  r.flag_ = b;
  return r;
}

Value Value::parse_decimal(std::string_view s) {
  std::string_view body = s;
  bool neg = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body.remove_prefix(1);
  }
  size_t dot = body.find('.');
  std::string_view whole = body.substr(0, dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view() : body.substr(dot + 1);
  int scale = decimal_scale();
  if (whole.empty() && frac.empty()) {
    throw DataError("invalid decimal '" + std::string(s) + "'");
  }
  if (static_cast<int>(frac.size()) > scale) {
    throw DataError("decimal '" + std::string(s) + "' exceeds scale " +
                    std::to_string(scale));
  }
  std::string digits(whole.empty() ? "0" : whole);
  digits += frac;
  digits.append(scale - frac.size(), '0');
  auto units = BigInt::parse(digits);
  if (!units) throw DataError("invalid decimal '" + std::string(s) + "'");
  return decimal_units(neg ? -*units : *units);
}

Value Value::parse(std::string_view s, Type t) {
  if (t == Type::kText) return text(std::string(s));
  if (s.empty() || s == "NULL") return null();
  switch (t) {
    case Type::kInteger: {
      auto v = BigInt::parse(s);
      if (!v) throw DataError("invalid integer '" + std::string(s) + "'");
      return integer(*v);
    }
    case Type::kDecimal:
      return parse_decimal(s);
    case Type::kBoolean:
      if (s == "true" || s == "TRUE" || s == "1") return boolean(true);
      if (s == "false" || s == "FALSE" || s == "0") return boolean(false);
      throw DataError("invalid boolean '" + std::string(s) + "'");
    default:
      return null();
  }
}

std::string Value::to_string() const {
  switch (type_) {
    case Type::kNull: return "";
    case Type::kInteger: return num_.to_string();
    case Type::kDecimal: {
      int scale = decimal_scale();
      std::string digits = (num_.sign() < 0 ? -num_ : num_).to_string();
      if (scale == 0) return (num_.sign() < 0 ? "-" : "") + digits;
      if (static_cast<int>(digits.size()) <= scale) {
        digits.insert(0, scale + 1 - digits.size(), '0');
      }
      digits.insert(digits.size() - scale, ".");
      return (num_.sign() < 0 ? "-" : "") + digits;
    }
    case Type::kText: return str_;
    case Type::kBoolean: return flag_ ? "true" : "false";
  }
  return "";
}

std::string Value::to_literal() const {
  switch (type_) {
    case Type::kNull: return "NULL";
    case Type::kText: {
      std::string out = "'";
      for (char c : str_) {
        if (c == '\'') out += '\'';
        out += c;
      }
      return out + "'";
    }
    case Type::kDecimal: {
      std::string s = to_string();
      // Keep the decimal point so the literal re-parses as Decimal.
      if (s.find('.') == std::string::npos) s += ".";
      return s;
    }
    default:
      return to_string();
  }
}

size_t Value::hash() const {
  size_t h = static_cast<size_t>(type_) * 0x9e3779b97f4a7c15ULL;
  switch (type_) {
    case Type::kInteger:
    case Type::kDecimal: return h ^ num_.hash();
    case Type::kText: return h ^ std::hash<std::string>()(str_);
    case Type::kBoolean: return h ^ static_cast<size_t>(flag_);
    case Type::kNull: return h;
  }
  return h;
}

bool operator==(const Value& a, const Value& b) {
  if (a.type_ != b.type_) return false;
  switch (a.type_) {
    case Type::kNull: return true;
    case Type::kInteger:
    case Type::kDecimal: return a.num_ == b.num_;
    case Type::kText: return a.str_ == b.str_;
    case Type::kBoolean: return a.flag_ == b.flag_;
  }
  return false;
}

namespace {

// Brings two numeric values onto a common scale.
std::pair<BigInt, BigInt> align(const Value& a, const Value& b) {
  if (a.type() == b.type()) return {a.number(), b.number()};
  BigInt f = scale_factor();
  if (a.type() == Type::kInteger) return {a.number() * f, b.number()};
  return {a.number(), b.number() * f};
}

}  // namespace

bool operator<(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) {
    auto [x, y] = align(a, b);
    int c = compare(x, y);
    if (c != 0) return c < 0;
    return a.type_ < b.type_;
  }
  if (a.type_ != b.type_) return a.type_ < b.type_;
  switch (a.type_) {
    case Type::kText: return a.str_ < b.str_;
    case Type::kBoolean: return a.flag_ < b.flag_;
    default: return false;
  }
}

std::optional<int> compare_values(const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return std::nullopt;
  if (a.is_numeric() && b.is_numeric()) {
    auto [x, y] = align(a, b);
    return compare(x, y);
  }
  if (a.type() != b.type()) {
    throw TypeError("cannot compare " + std::string(type_name(a.type())) +
                    " with " + std::string(type_name(b.type())));
  }
  if (a.type() == Type::kText) {
    int c = a.str().compare(b.str());
    return (c > 0) - (c < 0);
  }
  return static_cast<int>(a.flag()) - static_cast<int>(b.flag());
}

Type arith_type(ArithOp, Type a, Type b) {
  if (a == Type::kText || a == Type::kBoolean || b == Type::kText ||
      b == Type::kBoolean) {
    throw TypeError("arithmetic over " +
                    std::string(type_name(a == Type::kText || a == Type::kBoolean
                                              ? a
                                              : b)));
  }
  if (a == Type::kNull || b == Type::kNull) {
    return a == Type::kNull ? b : a;
  }
  if (a == Type::kDecimal || b == Type::kDecimal) return Type::kDecimal;
  return Type::kInteger;
}

Value arith(ArithOp op, const Value& a, const Value& b) {
  if ((!a.is_null() && !a.is_numeric()) || (!b.is_null() && !b.is_numeric())) {
    arith_type(op, a.type(), b.type());  // throws
  }
  if (a.is_null() || b.is_null()) return Value::null();
  bool dec = a.type() == Type::kDecimal || b.type() == Type::kDecimal;
  auto [x, y] = align(a, b);
  auto make = [dec](BigInt v) {
    return dec ? Value::decimal_units(std::move(v)) : Value::integer(std::move(v));
  };
  switch (op) {
    case ArithOp::kAdd: return make(x + y);
    case ArithOp::kSub: return make(x - y);
    case ArithOp::kMul:
      if (!dec) return make(x * y);
      return make(BigInt::div_trunc(x * y, scale_factor()));
    case ArithOp::kDiv:
      if (y.sign() == 0) return Value::null();
      if (!dec) return make(BigInt::div_trunc(x, y));
      return make(BigInt::div_trunc(x * scale_factor(), y));
  }
  return Value::null();
}

Value coerce(const Value& v, Type t) {
  if (v.is_null() || v.type() == t) return v;
  if (v.type() == Type::kInteger && t == Type::kDecimal) {
    return Value::decimal_units(v.number() * scale_factor());
  }
  if (v.type() == Type::kDecimal && t == Type::kInteger) {
    BigInt f = scale_factor();
    if (BigInt::divides(f, v.number())) {
      return Value::integer(BigInt::div_trunc(v.number(), f));
    }
  }
  throw TypeError("cannot store " + std::string(type_name(v.type())) + " value " +
                  v.to_string() + " as " + std::string(type_name(t)));
}

}  // namespace histif
