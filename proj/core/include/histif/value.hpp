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

#ifndef HISTIF_VALUE_HPP_
#define HISTIF_VALUE_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace histif {

// Exact integer with an int64 fast path; promotes to GMP on overflow.
class BigInt {
 public:
  BigInt() = default;
  BigInt(int64_t v) : small_(v) {}  // NOLINT(runtime/explicit)
  explicit BigInt(const mpz_class& v);

  // Accepts an optional sign followed by decimal digits.
  static std::optional<BigInt> parse(std::string_view s);

  bool is_small() const { return big_ == nullptr; }
  int64_t small() const { return small_; }
  mpz_class to_mpz() const;
  std::string to_string() const;
  int sign() const;
  size_t hash() const;

  BigInt operator-() const;
  friend BigInt operator+(const BigInt& a, const BigInt& b);
  friend BigInt operator-(const BigInt& a, const BigInt& b);
  friend BigInt operator*(const BigInt& a, const BigInt& b);
  // Truncates toward zero. b must be non-zero.
  static BigInt div_trunc(const BigInt& a, const BigInt& b);
  static bool divides(const BigInt& d, const BigInt& a);
  static BigInt pow10(int e);

  friend int compare(const BigInt& a, const BigInt& b);
  friend bool operator==(const BigInt& a, const BigInt& b) {
    return compare(a, b) == 0;
  }
  friend bool operator<(const BigInt& a, const BigInt& b) {
    return compare(a, b) < 0;
  }

 private:
  void normalize();
  int64_t small_ = 0;
  std::shared_ptr<const mpz_class> big_;
};

enum class Type : uint8_t { kNull, kInteger, kDecimal, kText, kBoolean };

std::string_view type_name(Type t);
// Throws DataError on an unknown name.
Type parse_type(std::string_view name);
inline bool is_numeric(Type t) {
  return t == Type::kInteger || t == Type::kDecimal;
}

// Number of fractional digits carried by Decimal values. Process-wide;
// values created under one scale must not be mixed with another.
int decimal_scale();
void set_decimal_scale(int s);
BigInt scale_factor();

enum class ArithOp : uint8_t { kAdd, kSub, kMul, kDiv };
std::string_view arith_symbol(ArithOp op);

class Value {
 public:
  Value() = default;

  static Value null() { return Value(); }
  static Value integer(BigInt v);
  // `units` is the value multiplied by 10^decimal_scale().
  static Value decimal_units(BigInt units);
  static Value text(std::string s);
  static Value boolean(bool b);

  // Parses a decimal literal such as "-12.5". Throws DataError when the
  // literal has more fractional digits than the current scale.
  static Value parse_decimal(std::string_view s);
  // Parses a CSV field for an attribute of type t. Empty input is Null
  // except for Text, where the caller distinguishes quoted empty strings.
  static Value parse(std::string_view s, Type t);

  Type type() const { return type_; }
  bool is_null() const { return type_ == Type::kNull; }
  bool is_numeric() const { return histif::is_numeric(type_); }
  // Integer value, or scaled units for Decimal.
  const BigInt& number() const { return num_; }
  const std::string& str() const { return str_; }
  bool flag() const { return flag_; }

  // Plain rendering: digits, "12.50", raw text, true/false, "" for Null.
  std::string to_string() const;
  // DSL literal: text quoted, NULL spelled out.
  std::string to_literal() const;

  size_t hash() const;
  friend bool operator==(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
  // Total order used for deterministic sorting; numeric types compare by
  // magnitude, other types by type tag first.
  friend bool operator<(const Value& a, const Value& b);

 private:
  Type type_ = Type::kNull;
  bool flag_ = false;
  BigInt num_;
  std::string str_;
};

// Three-way comparison; nullopt if either side is Null. Throws TypeError
// on incomparable types.
std::optional<int> compare_values(const Value& a, const Value& b);

// Null-propagating arithmetic; division by zero yields Null. Integer
// division truncates toward zero. Mixing Integer and Decimal yields Decimal.
Value arith(ArithOp op, const Value& a, const Value& b);

// Converts v for storage in an attribute of type t (Integer widens to
// Decimal). Throws TypeError when the conversion would lose information.
Value coerce(const Value& v, Type t);

// Static result type of arithmetic; kNull if an operand is the Null type.
Type arith_type(ArithOp op, Type a, Type b);

struct ValueHash {
  size_t operator()(const Value& v) const { return v.hash(); }
};

}  // namespace histif

#endif  // HISTIF_VALUE_HPP_
