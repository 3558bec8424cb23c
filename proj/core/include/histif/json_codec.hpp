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

#ifndef HISTIF_JSON_CODEC_HPP_
#define HISTIF_JSON_CODEC_HPP_

#include <vector>

#include "json.hpp"

#include "histif/query.hpp"
#include "histif/relation.hpp"
#include "histif/statement.hpp"

namespace histif {

using Json = nlohmann::json;

// Canonical tagged-variant encodings. Decoders throw DataError on
// malformed input.
//
// Values: null, true/false, JSON strings for Text, JSON integers for
// Integer ({"int": "digits"} beyond 64 bits), {"dec": "12.50"} for Decimal.
Json to_json(const Value& v);
Value value_from_json(const Json& j);

Json to_json(const Expr& e);
Json to_json(const Cond& c);
Json to_json(const Query& q);
Json to_json(const Statement& s);
Json to_json(const Modification& m);
Json to_json(const Schema& s);
Json to_json(const History& h);

Expr expr_from_json(const Json& j);
Cond cond_from_json(const Json& j);
Query query_from_json(const Json& j);
// Also accepts a DSL string.
Statement statement_from_json(const Json& j);
Modification modification_from_json(const Json& j);
std::vector<Modification> modifications_from_json(const Json& j);
History history_from_json(const Json& j);
// {"relation": ..., "attributes": [{"name", "type", "key"?}]}
Schema schema_from_json(const Json& j);
// One schema object, an array of them, or {"relations": [...]}.
std::vector<Schema> schemas_from_json(const Json& j);

}  // namespace histif

#endif  // HISTIF_JSON_CODEC_HPP_
