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

#ifndef HISTIF_STORE_HPP_
#define HISTIF_STORE_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "histif/statement.hpp"

namespace histif {

// Base snapshot D0, an append-only statement log and periodic checkpoints.
// reconstruct(i) == run_history(log[0..i), D0).
class VersionedStore {
 public:
  explicit VersionedStore(Database base = {}, size_t checkpoint_every = 10);

  const Database& base() const { return base_; }
  const Database& current() const { return current_; }
  const History& log() const { return log_; }
  size_t size() const { return log_.size(); }
  size_t checkpoint_every() const { return every_; }

  // Validates against the current state, executes, and checkpoints.
  void append(const Statement& u);
  void append(const History& h);

  // State after the first i statements; RangeError when i > size().
  Database reconstruct(size_t i) const;
  // Checkpoint positions (0 is the base).
  std::vector<size_t> checkpoints() const;

 private:
  Database base_;
  History log_;
  size_t every_;
  std::map<size_t, Database> snaps_;
  Database current_;
};

// CSV with a header naming the schema's attributes (any order). Throws
// DataError naming the line of the offending record.
Relation read_relation_csv(const Schema& s, std::string_view text);
// Header in schema order, rows sorted.
std::string write_relation_csv(const Relation& r);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);

// Database from a schema file and CSV files. A CSV named <relation>.csv
// goes to that relation; with a single schema any name is accepted.
Database load_database(const std::filesystem::path& schema_json,
                       const std::vector<std::filesystem::path>& csv_files);

// Directory layout:
//   schema.json           relation schemas
//   base/<rel>.csv        D0
//   history.sql           the statement log, one statement per line
//   snapshots/<i>/<rel>.csv  checkpoint states
void save_store(const VersionedStore& s, const std::filesystem::path& dir);
VersionedStore open_store(const std::filesystem::path& dir, size_t checkpoint_every = 10);

}  // namespace histif

#endif  // HISTIF_STORE_HPP_
