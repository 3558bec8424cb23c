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

#include "histif/csv.hpp"

#include "histif/error.hpp"

namespace histif {

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  CsvRow row;
  CsvField field;
  bool in_quotes = false, after_quote = false, any = false;
  size_t line = 1;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field = CsvField();
    after_quote = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    any = false;
  };
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.text += '"';
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.text += c;
      }
      continue;
    }
    if (c == ',') {
      end_field();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      // Blank lines are skipped.
      if (any || !row.empty()) end_row();
      ++line;
    } else if (c == '"') {
      if (!field.text.empty() || after_quote) {
        throw DataError("line " + std::to_string(line) + ": stray quote");
      }
      in_quotes = true;
      field.quoted = true;
      any = true;
    } else {
      if (after_quote) {
        throw DataError("line " + std::to_string(line) + ": text after closing quote");
      }
      field.text += c;
      any = true;
    }
  }
  if (in_quotes) throw DataError("line " + std::to_string(line) + ": unterminated quote");
  if (any || !row.empty()) end_row();
  return rows;
}

std::string csv_escape(std::string_view s) {
  bool quote = s.empty() || s.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!quote) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_field(const Value& v) {
  if (v.is_null()) return "";
  if (v.type() == Type::kText) return csv_escape(v.str());
  return v.to_string();
}

std::string csv_row(const Tuple& t) {
  std::string out;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += csv_field(t[i]);
  }
  return out;
}

Value csv_value(const CsvField& f, Type t) {
  if (f.text.empty() && !f.quoted) return Value::null();
  return Value::parse(f.text, t);
}

}  // namespace histif
