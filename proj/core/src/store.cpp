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

#include "histif/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "histif/csv.hpp"
#include "histif/dsl.hpp"
#include "histif/error.hpp"
#include "histif/json_codec.hpp"

namespace histif {

namespace fs = std::filesystem;

VersionedStore::VersionedStore(Database base, size_t checkpoint_every)
    : base_(std::move(base)), every_(checkpoint_every == 0 ? 10 : checkpoint_every) {
  current_ = base_;
}

void VersionedStore::append(const Statement& u) {
  validate(u, current_);
  execute(u, current_);
  log_.push_back(u);
  if (log_.size() % every_ == 0) snaps_[log_.size()] = current_;
}

void VersionedStore::append(const History& h) {
  for (const Statement& u : h) append(u);
}

Database VersionedStore::reconstruct(size_t i) const {
  if (i > log_.size()) {
    throw RangeError("version " + std::to_string(i) + " is beyond the history length " +
                     std::to_string(log_.size()));
  }
  if (i == log_.size()) return current_;
  size_t from = 0;
  Database db;
  auto it = snaps_.upper_bound(i);
  if (it != snaps_.begin()) {
    --it;
    from = it->first;
    db = it->second;
  } else {
    db = base_;
  }
  for (size_t k = from; k < i; ++k) execute(log_[k], db);
  return db;
}

std::vector<size_t> VersionedStore::checkpoints() const {
  std::vector<size_t> out{0};
  for (const auto& [k, db] : snaps_) out.push_back(k);
  return out;
}

Relation read_relation_csv(const Schema& s, std::string_view text) {
  Relation r{s, {}};
  std::vector<CsvRow> rows = parse_csv(text);
  if (rows.empty()) return r;
  const CsvRow& header = rows[0];
  if (header.size() != s.arity()) {
    throw DataError(s.relation() + ": header has " + std::to_string(header.size()) +
                    " columns, schema has " + std::to_string(s.arity()));
  }
  std::vector<int> slot(header.size());
  std::vector<bool> seen(s.arity(), false);
  for (size_t c = 0; c < header.size(); ++c) {
    int i = s.index_of(header[c].text);
    if (i < 0 || seen[i]) {
      throw DataError(s.relation() + ": unexpected header column '" + header[c].text + "'");
    }
    seen[i] = true;
    slot[c] = i;
  }
  // parse_csv drops blank lines, so record numbers are reported as lines
  // counted from the header.
  for (size_t k = 1; k < rows.size(); ++k) {
    const CsvRow& row = rows[k];
    std::string where = s.relation() + " record " + std::to_string(k + 1);
    if (row.size() != s.arity()) {
      throw DataError(where + ": expected " + std::to_string(s.arity()) + " fields, got " +
                      std::to_string(row.size()));
    }
    Tuple t(s.arity());
    for (size_t c = 0; c < row.size(); ++c) {
      try {
        t[slot[c]] = csv_value(row[c], s.at(slot[c]).type);
      } catch (const Error& e) {
        throw DataError(where + ", column " + s.at(slot[c]).name + ": " + e.what());
      }
    }
    r.rows.insert(std::move(t));
  }
  return r;
}

std::string write_relation_csv(const Relation& r) {
  std::string out;
  const Schema& s = r.schema;
  for (size_t i = 0; i < s.arity(); ++i) {
    out += (i ? "," : "") + csv_escape(s.at(i).name);
  }
  out += "\n";
  for (const Tuple& t : r.sorted()) out += csv_row(t) + "\n";
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, std::string_view content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + p.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

namespace {

Json parse_json(const std::string& text, const fs::path& p) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw DataError(p.string() + ": " + e.what());
  }
}

void write_db(const Database& db, const fs::path& dir) {
  for (const auto& [name, rel] : db.relations()) {
    write_file(dir / (name + ".csv"), write_relation_csv(rel));
  }
}

}  // namespace

Database load_database(const fs::path& schema_json, const std::vector<fs::path>& csv_files) {
  std::vector<Schema> schemas = schemas_from_json(parse_json(read_file(schema_json), schema_json));
  Database db;
  for (const Schema& s : schemas) db.add_relation(s);
  for (const fs::path& f : csv_files) {
    std::string name = f.stem().string();
    if (!db.has(name)) {
      if (schemas.size() != 1) throw DataError(f.string() + ": no relation named " + name);
      name = schemas[0].relation();
    }
    Relation r = read_relation_csv(db.schema(name), read_file(f));
    db.get(name).rows = std::move(r.rows);
  }
  return db;
}

void save_store(const VersionedStore& s, const fs::path& dir) {
  Json schemas = Json::array();
  for (const auto& [name, rel] : s.base().relations()) schemas.push_back(to_json(rel.schema));
  write_file(dir / "schema.json", schemas.dump(2) + "\n");
  write_db(s.base(), dir / "base");
  std::string log;
  for (const Statement& u : s.log()) log += to_string(u) + ";\n";
  write_file(dir / "history.sql", log);
  fs::remove_all(dir / "snapshots");
  for (size_t k : s.checkpoints()) {
    if (k > 0) write_db(s.reconstruct(k), dir / "snapshots" / std::to_string(k));
  }
}

VersionedStore open_store(const fs::path& dir, size_t checkpoint_every) {
  if (!fs::exists(dir / "schema.json")) {
    throw DataError("no store at " + dir.string() + " (missing schema.json)");
  }
  std::vector<fs::path> csvs;
  if (fs::exists(dir / "base")) {
    for (const auto& e : fs::directory_iterator(dir / "base")) {
      if (e.path().extension() == ".csv") csvs.push_back(e.path());
    }
  }
  std::sort(csvs.begin(), csvs.end());
  VersionedStore s(load_database(dir / "schema.json", csvs), checkpoint_every);
  if (fs::exists(dir / "history.sql")) s.append(parse_history(read_file(dir / "history.sql")));
  return s;
}

}  // namespace histif
