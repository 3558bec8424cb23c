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

#ifndef HISTIF_DSL_HPP_
#define HISTIF_DSL_HPP_

#include <string_view>

#include "histif/expr.hpp"
#include "histif/statement.hpp"

namespace histif {

// Statement language:
//   UPDATE R SET A = e [, B = e ...] [WHERE c]
//   DELETE FROM R [WHERE c]
//   INSERT INTO R VALUES (v, ...)
//   INSERT INTO R SELECT e [AS n], ... | * FROM S [, T ...] [WHERE c]
//                 [UNION SELECT ...]
//   NOOP R
// Keywords are case-insensitive, `--` starts a comment, identifiers may be
// double-quoted and text literals single-quoted ('' escapes a quote).
// All functions throw ParseError with a 1-based line and column.
Statement parse_statement(std::string_view text);
// Any number of statements, optionally separated by ';'.
History parse_history(std::string_view text);
Expr parse_expr(std::string_view text);
Cond parse_cond(std::string_view text);

}  // namespace histif

#endif  // HISTIF_DSL_HPP_
