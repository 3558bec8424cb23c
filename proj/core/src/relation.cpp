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

#include "histif/relation.hpp"

#include <algorithm>
#include <set>

#include "histif/error.hpp"

namespace histif {

Schema::Schema(std::string relation, std::vector<Attribute> attrs)
    : relation_(std::move(relation)), attrs_(std::move(attrs)) {
  std::set<std::string> seen;
  for (const Attribute& a : attrs_) {
    if (!seen.insert(a.name).second) {
      throw SchemaError("duplicate attribute '" + a.name + "' in " + relation_);
    }
  }
}

int Schema::index_of(const std::string& name) const {
  for (size_t i = 0; i < attrs_.size(); ++i) {
    if (attrs_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> Schema::names() const {
  std::vector<std::string> out;
  for (const Attribute& a : attrs_) out.push_back(a.name);
  return out;
}

size_t TupleHash::operator()(const Tuple& t) const {
  size_t h = 0xcbf29ce484222325ULL;
  for (const Value& v : t) h = (h ^ v.hash()) * 0x100000001b3ULL;
  return h;
}

bool tuple_less(const Tuple& a, const Tuple& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string tuple_to_string(const Tuple& t) {
  std::string out = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += t[i].to_literal();
  }
  return out + ")";
}

std::vector<Tuple> Relation::sorted() const {
  std::vector<Tuple> out(rows.begin(), rows.end());
  std::sort(out.begin(), out.end(), tuple_less);
  return out;
}

Tuple conform(Tuple t, const Schema& s) {
  if (t.size() != s.arity()) {
    throw SchemaError("tuple of arity " + std::to_string(t.size()) + " for " +
                      s.relation() + " of arity " + std::to_string(s.arity()));
  }
  for (size_t i = 0; i < t.size(); ++i) t[i] = coerce(t[i], s.at(i).type);
  return t;
}

void Database::add_relation(const Schema& s) {
  if (has(s.relation())) throw SchemaError("relation '" + s.relation() + "' exists");
  rels_[s.relation()].schema = s;
}

const Relation& Database::get(const std::string& name) const {
  auto it = rels_.find(name);
  if (it == rels_.end()) throw SchemaError("unknown relation '" + name + "'");
  return it->second;
}

Relation& Database::get(const std::string& name) {
  auto it = rels_.find(name);
  if (it == rels_.end()) throw SchemaError("unknown relation '" + name + "'");
  return it->second;
}

bool Database::insert(const std::string& name, Tuple t) {
  Relation& r = get(name);
  return r.rows.insert(conform(std::move(t), r.schema)).second;
}

bool SchemaBinder::resolve(const std::string& name, int* slot, Type* type) const {
  int i = schema_.index_of(name);
  if (i < 0) return false;
  *slot = i;
  *type = schema_.at(i).type;
  return true;
}

Value eval_expr(const Expr& e, const Tuple& t, const Schema& s) {
  Expr b = histif::bind(e, SchemaBinder(s));
  return eval(*b, t.data());
}

bool eval_cond(const Cond& c, const Tuple& t, const Schema& s) {
  Cond b = histif::bind(c, SchemaBinder(s));
  return eval(*b, t.data());
}

}  // namespace histif
