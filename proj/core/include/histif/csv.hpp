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

#ifndef HISTIF_CSV_HPP_
#define HISTIF_CSV_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "histif/relation.hpp"

namespace histif {

struct CsvField {
  std::string text;
  bool quoted = false;
};
using CsvRow = std::vector<CsvField>;

// RFC 4180 reader. Records end at unquoted CR, LF or CRLF; a trailing
// newline does not produce an empty record and blank lines are skipped.
// Throws DataError with the line number on malformed quoting.
std::vector<CsvRow> parse_csv(std::string_view text);

// Null renders as an empty field, the empty string as "". Fields containing
// separators, quotes or line breaks are quoted.
std::string csv_field(const Value& v);
std::string csv_escape(std::string_view s);
std::string csv_row(const Tuple& t);

// Typed field; unquoted empty fields are Null.
Value csv_value(const CsvField& f, Type t);

}  // namespace histif

#endif  // HISTIF_CSV_HPP_
