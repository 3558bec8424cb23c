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

#ifndef HISTIF_RELATION_HPP_
#define HISTIF_RELATION_HPP_

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "histif/expr.hpp"
#include "histif/value.hpp"

namespace histif {

struct Attribute {
  std::string name;
  Type type = Type::kInteger;
  // Declared identifier. Used as the preferred key candidate and treated as
  // unordered by compression; uniqueness is never enforced.
  bool key = false;

  friend bool operator==(const Attribute& a, const Attribute& b) {
    return a.name == b.name && a.type == b.type && a.key == b.key;
  }
};

class Schema {
 public:
  Schema() = default;
  // Throws SchemaError on duplicate attribute names.
  Schema(std::string relation, std::vector<Attribute> attrs);

  const std::string& relation() const { return relation_; }
  const std::vector<Attribute>& attrs() const { return attrs_; }
  size_t arity() const { return attrs_.size(); }
  const Attribute& at(size_t i) const { return attrs_[i]; }
  // -1 when absent.
  int index_of(const std::string& name) const;
  std::vector<std::string> names() const;

  friend bool operator==(const Schema& a, const Schema& b) {
    return a.relation_ == b.relation_ && a.attrs_ == b.attrs_;
  }

 private:
  std::string relation_;
  std::vector<Attribute> attrs_;
};

using Tuple = std::vector<Value>;

struct TupleHash {
  size_t operator()(const Tuple& t) const;
};
using TupleSet = std::unordered_set<Tuple, TupleHash>;

// Lexicographic by Value ordering.
bool tuple_less(const Tuple& a, const Tuple& b);
std::string tuple_to_string(const Tuple& t);

struct Relation {
  Schema schema;
  TupleSet rows;

  // Rows in tuple_less order.
  std::vector<Tuple> sorted() const;
  friend bool operator==(const Relation& a, const Relation& b) {
    return a.schema == b.schema && a.rows == b.rows;
  }
};

// Checks arity and coerces every field to the attribute type.
Tuple conform(Tuple t, const Schema& s);

class Database {
 public:
  void add_relation(const Schema& s);
  bool has(const std::string& name) const { return rels_.count(name) != 0; }
  // Throws SchemaError when absent.
  const Relation& get(const std::string& name) const;
  Relation& get(const std::string& name);
  const Schema& schema(const std::string& name) const { return get(name).schema; }
  // Conforms and inserts; returns false for duplicates.
  bool insert(const std::string& name, Tuple t);

  const std::map<std::string, Relation>& relations() const { return rels_; }
  std::map<std::string, Relation>& relations() { return rels_; }

  friend bool operator==(const Database& a, const Database& b) {
    return a.rels_ == b.rels_;
  }

 private:
  std::map<std::string, Relation> rels_;
};

// Resolves attribute names to positions in a schema.
class SchemaBinder : public Binder {
 public:
  explicit SchemaBinder(const Schema& s) : schema_(s) {}
  bool resolve(const std::string& name, int* slot, Type* type) const override;

 private:
  const Schema& schema_;
};

Value eval_expr(const Expr& e, const Tuple& t, const Schema& s);
bool eval_cond(const Cond& c, const Tuple& t, const Schema& s);

}  // namespace histif

#endif  // HISTIF_RELATION_HPP_
