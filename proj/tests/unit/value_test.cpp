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
#include "histif/value.hpp"

using namespace histif;

TEST_CASE("bigint promotes on overflow and demotes back") {
  BigInt big = BigInt(INT64_MAX) + BigInt(1);
  CHECK_FALSE(big.is_small());
  CHECK(big.to_string() == "9223372036854775808");
  BigInt back = big - BigInt(1);
  CHECK(back.is_small());
  CHECK(back.small() == INT64_MAX);
  CHECK((BigInt(INT64_MIN) * BigInt(-1)).to_string() == "9223372036854775808");
  CHECK(BigInt::pow10(20).to_string() == "100000000000000000000");
}

TEST_CASE("bigint parse and truncating division") {
  CHECK(BigInt::parse("-42")->small() == -42);
  CHECK(BigInt::parse("+7")->small() == 7);
  CHECK_FALSE(BigInt::parse("4x").has_value());
  CHECK_FALSE(BigInt::parse("").has_value());
  CHECK(BigInt::div_trunc(-7, 2).small() == -3);
  CHECK(BigInt::div_trunc(7, -2).small() == -3);
  CHECK(BigInt::divides(3, 12));
  CHECK_FALSE(BigInt::divides(5, 12));
  CHECK(BigInt::parse("123456789012345678901234567890")->to_string() ==
        "123456789012345678901234567890");
}

TEST_CASE("decimal literals at the default scale") {
  CHECK(decimal_scale() == 2);
  Value d = Value::parse_decimal("12.5");
  CHECK(d.type() == Type::kDecimal);
  CHECK(d.number().small() == 1250);
  CHECK(d.to_string() == "12.50");
  CHECK(Value::parse_decimal("-0.05").to_string() == "-0.05");
  CHECK_THROWS_AS(Value::parse_decimal("1.234"), DataError);
}

TEST_CASE("arithmetic over null and division by zero") {
  Value n = Value::null();
  CHECK(arith(ArithOp::kAdd, Value::integer(1), n).is_null());
  CHECK(arith(ArithOp::kMul, n, n).is_null());
  CHECK(arith(ArithOp::kDiv, Value::integer(5), Value::integer(0)).is_null());
  CHECK(arith(ArithOp::kDiv, Value::integer(-7), Value::integer(2)) == Value::integer(-3));
  Value mixed = arith(ArithOp::kAdd, Value::integer(1), Value::parse_decimal("0.25"));
  CHECK(mixed.type() == Type::kDecimal);
  CHECK(mixed.to_string() == "1.25");
  CHECK(arith(ArithOp::kMul, Value::parse_decimal("1.50"), Value::parse_decimal("2.00"))
            .to_string() == "3.00");
  CHECK(arith(ArithOp::kDiv, Value::parse_decimal("1.00"), Value::integer(3)).to_string() ==
        "0.33");
  CHECK_THROWS_AS(arith(ArithOp::kAdd, Value::text("a"), Value::integer(1)), TypeError);
}

TEST_CASE("comparison is undefined on null and typed otherwise") {
  CHECK_FALSE(compare_values(Value::null(), Value::integer(1)).has_value());
  CHECK(*compare_values(Value::integer(2), Value::parse_decimal("1.99")) > 0);
  CHECK(*compare_values(Value::text("UK"), Value::text("US")) < 0);
  CHECK_THROWS_AS(compare_values(Value::text("1"), Value::integer(1)), TypeError);
}

TEST_CASE("equality and hashing treat integer and decimal by magnitude") {
  Value a = Value::integer(3);
  Value b = Value::parse_decimal("3.00");
  CHECK(coerce(a, Type::kDecimal) == b);
  CHECK(coerce(a, Type::kDecimal).hash() == b.hash());
  CHECK(Value::null() == Value::null());
  CHECK(Value::text("") != Value::null());
}

TEST_CASE("coercion rejects lossy conversions") {
  CHECK(coerce(Value::parse_decimal("4.00"), Type::kInteger) == Value::integer(4));
  CHECK_THROWS_AS(coerce(Value::parse_decimal("4.50"), Type::kInteger), TypeError);
  CHECK_THROWS_AS(coerce(Value::text("x"), Type::kInteger), TypeError);
  CHECK(coerce(Value::null(), Type::kText).is_null());
}

TEST_CASE("field parsing and literal rendering") {
  CHECK(Value::parse("42", Type::kInteger) == Value::integer(42));
  CHECK(Value::parse("", Type::kInteger).is_null());
  CHECK(Value::parse("true", Type::kBoolean) == Value::boolean(true));
  CHECK_THROWS_AS(Value::parse("4.2", Type::kInteger), DataError);
  CHECK(Value::text("O'Neil").to_literal() == "'O''Neil'");
  CHECK(Value::null().to_literal() == "NULL");
  CHECK(parse_type("decimal") == Type::kDecimal);
  CHECK_THROWS_AS(parse_type("float"), DataError);
}
