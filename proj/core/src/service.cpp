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

#include "histif/service.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "histif/dsl.hpp"
#include "histif/error.hpp"

namespace histif {

namespace {

using OJson = nlohmann::ordered_json;

ApiResponse reply(int status, const OJson& body) { return {status, body.dump()}; }

ApiResponse error_reply(int status, const std::string& kind, const std::string& message) {
  return reply(status, OJson{{"error", {{"kind", kind}, {"message", message}}}});
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < path.size()) {
    size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) out.emplace_back(path.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::optional<long long> to_int(const std::string& s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

Json parse_body(std::string_view body) {
  try {
    return Json::parse(body);
  } catch (const Json::exception& e) {
    throw DataError(std::string("request body is not JSON: ") + e.what());
  }
}

OJson delta_json(const DeltaSet& d) {
  OJson arr = OJson::array();
  std::string lines = delta_jsonl(d);
  size_t i = 0;
  while (i < lines.size()) {
    size_t j = lines.find('\n', i);
    arr.push_back(OJson::parse(lines.substr(i, j - i)));
    i = j + 1;
  }
  return arr;
}

OJson history_json(const std::string& id, const VersionedStore& s) {
  OJson stmts = OJson::array();
  for (size_t i = 0; i < s.log().size(); ++i) {
    stmts.push_back({{"position", i + 1},
                     {"dsl", to_string(s.log()[i])},
                     {"ast", OJson::parse(to_json(s.log()[i]).dump())}});
  }
  return {{"id", id}, {"length", s.size()}, {"statements", stmts}};
}

}  // namespace

ApiSession::ApiSession(VersionedStore store, ApiOptions opts) : opts_(std::move(opts)) {
  base_ = store.base();
  histories_["main"] = std::make_shared<const VersionedStore>(std::move(store));
}

std::shared_ptr<const VersionedStore> ApiSession::find(const std::string& id) {
  std::shared_lock lock(mu_);
  auto it = histories_.find(id);
  return it == histories_.end() ? nullptr : it->second;
}

ApiResponse ApiSession::handle(std::string_view method, std::string_view path,
                               const std::map<std::string, std::string>& query,
                               std::string_view body) {
  std::vector<std::string> parts = split_path(path);
  try {
    if (method == "OPTIONS") return {204, ""};
    if (parts.size() < 2 || parts[0] != "api") {
      return error_reply(404, "not_found", "no route for " + std::string(path));
    }
    const std::string& res = parts[1];
    if (res == "history" && parts.size() == 2) {
      if (method == "GET") return list_histories();
      if (method == "POST") return post_history(body);
    } else if (res == "history" && parts.size() == 3 && method == "GET") {
      return get_history(parts[2]);
    } else if (res == "whatif" && parts.size() == 2 && method == "POST") {
      return post_whatif(body);
    } else if (res == "report" && parts.size() == 3 && method == "GET") {
      return get_report(parts[2]);
    } else if (res == "relation" && parts.size() == 3 && method == "GET") {
      return get_relation(parts[2], query);
    } else if (res == "schema" && parts.size() == 2 && method == "GET") {
      return get_schema();
    }
    return error_reply(404, "not_found", "no route for " + std::string(method) + " " +
                                             std::string(path));
  } catch (const ParseError& e) {
    OJson j{{"error", {{"kind", "parse"}, {"message", e.what()}, {"line", e.line()},
                       {"column", e.column()}}}};
    return reply(400, j);
  } catch (const RangeError& e) {
    return error_reply(400, "range", e.what());
  } catch (const SchemaError& e) {
    return error_reply(400, "schema", e.what());
  } catch (const TypeError& e) {
    return error_reply(400, "type", e.what());
  } catch (const DataError& e) {
    return error_reply(400, "data", e.what());
  } catch (const std::exception& e) {
    return error_reply(500, "internal", e.what());
  }
}

ApiResponse ApiSession::list_histories() {
  std::shared_lock lock(mu_);
  OJson arr = OJson::array();
  for (const auto& [id, s] : histories_) arr.push_back({{"id", id}, {"length", s->size()}});
  return reply(200, OJson{{"histories", arr}});
}

ApiResponse ApiSession::get_history(const std::string& id) {
  auto s = find(id);
  if (!s) return error_reply(404, "not_found", "unknown history " + id);
  return reply(200, history_json(id, *s));
}

ApiResponse ApiSession::post_history(std::string_view body) {
  Json j = parse_body(body);
  if (!j.is_object()) throw DataError("expected an object");
  History h;
  if (j.contains("dsl")) {
    if (!j["dsl"].is_string()) throw DataError("dsl must be a string");
    h = parse_history(j["dsl"].get<std::string>());
  } else if (j.contains("statements")) {
    h = history_from_json(j["statements"]);
  } else {
    throw DataError("expected 'statements' or 'dsl'");
  }
  auto store = std::make_shared<VersionedStore>(base_);
  store->append(h);
  std::unique_lock lock(mu_);
  std::string id;
  if (j.contains("id")) {
    if (!j["id"].is_string() || j["id"].get<std::string>().empty()) {
      throw DataError("id must be a non-empty string");
    }
    id = j["id"].get<std::string>();
    if (id.find('/') != std::string::npos) throw DataError("id must not contain '/'");
    if (histories_.count(id)) throw DataError("history " + id + " already exists");
  } else {
    do {
      id = "h" + std::to_string(next_history_++);
    } while (histories_.count(id));
  }
  histories_[id] = store;
  lock.unlock();
  return reply(201, history_json(id, *store));
}

ApiResponse ApiSession::post_whatif(std::string_view body) {
  Json j = parse_body(body);
  if (!j.is_object()) throw DataError("expected an object");
  std::string hid = j.value("history_id", std::string("main"));
  auto store = find(hid);
  if (!store) return error_reply(404, "not_found", "unknown history " + hid);
  std::vector<Modification> mods =
      j.contains("modifications") ? modifications_from_json(j["modifications"])
                                  : std::vector<Modification>{};
  WhatIfOptions o = opts_.defaults;
  if (j.contains("method")) {
    if (!j["method"].is_string()) throw DataError("method must be a string");
    auto m = parse_method(j["method"].get<std::string>());
    if (!m) throw DataError("unknown method " + j["method"].get<std::string>());
    o.method = *m;
  }
  if (j.contains("params")) {
    const Json& p = j["params"];
    if (!p.is_object()) throw DataError("params must be an object");
    for (const auto& [k, v] : p.items()) {
      if (k == "group_by" && v.is_string()) {
        o.compress.group_by = v.get<std::string>();
      } else if (k == "groups" && v.is_number_integer() && v.get<int64_t>() >= 1) {
        o.compress.groups = v.get<int>();
      } else if (k == "big_m" && v.is_number_integer() && v.get<int64_t>() >= 0) {
        o.big_m_floor = v.get<int64_t>();
      } else if (k == "solver_budget" && v.is_number_integer() && v.get<int64_t>() >= 1) {
        o.solver_budget = v.get<uint64_t>();
      } else {
        throw DataError("invalid parameter " + k);
      }
    }
  }
  o.deadline = std::chrono::steady_clock::now() + opts_.timeout;
  WhatIfResult r = answer(*store, mods, o);

  std::string rid;
  OJson report = OJson::parse(r.report.to_json().dump());
  {
    std::lock_guard lock(report_mu_);
    rid = "r" + std::to_string(next_request_++);
    reports_.emplace_front(rid, report.dump());
    while (reports_.size() > opts_.report_cache) reports_.pop_back();
  }
  OJson out{{"request_id", rid}, {"history_id", hid}, {"delta", delta_json(r.delta)},
            {"report", report}};
  if (!r.report.degradations.empty()) {
    out["detail"] = r.report.degradations;
    return reply(422, out);
  }
  return reply(200, out);
}

ApiResponse ApiSession::get_report(const std::string& id) {
  std::lock_guard lock(report_mu_);
  for (auto it = reports_.begin(); it != reports_.end(); ++it) {
    if (it->first == id) {
      reports_.splice(reports_.begin(), reports_, it);
      return {200, reports_.front().second};
    }
  }
  return error_reply(404, "not_found", "no report " + id);
}

ApiResponse ApiSession::get_relation(const std::string& name,
                                     const std::map<std::string, std::string>& query) {
  auto param = [&](const char* k) -> std::optional<std::string> {
    auto it = query.find(k);
    if (it == query.end()) return std::nullopt;
    return it->second;
  };
  std::string hid = param("history").value_or("main");
  auto store = find(hid);
  if (!store) return error_reply(404, "not_found", "unknown history " + hid);
  if (!store->base().has(name)) return error_reply(404, "not_found", "unknown relation " + name);
  size_t at = store->size();
  if (auto a = param("at")) {
    auto v = to_int(*a);
    if (!v) throw DataError("at must be an integer");
    if (*v < 0 || static_cast<size_t>(*v) > store->size()) {
      return error_reply(416, "range", "version " + *a + " outside [0, " +
                                           std::to_string(store->size()) + "]");
    }
    at = static_cast<size_t>(*v);
  }
  size_t offset = 0, limit = 1000;
  if (auto o = param("offset")) {
    auto v = to_int(*o);
    if (!v || *v < 0) throw DataError("offset must be a non-negative integer");
    offset = static_cast<size_t>(*v);
  }
  if (auto l = param("limit")) {
    auto v = to_int(*l);
    if (!v || *v < 0) throw DataError("limit must be a non-negative integer");
    limit = static_cast<size_t>(*v);
  }
  Database db = store->reconstruct(at);
  const Relation& r = db.get(name);
  std::vector<Tuple> rows = r.sorted();
  if (offset > rows.size() && !rows.empty()) {
    return error_reply(416, "range", "offset beyond the last row");
  }
  OJson cols = OJson::array();
  for (const Attribute& a : r.schema.attrs()) {
    cols.push_back({{"name", a.name}, {"type", std::string(type_name(a.type))}});
  }
  OJson out_rows = OJson::array();
  for (size_t i = offset; i < rows.size() && i < offset + limit; ++i) {
    OJson row = OJson::array();
    for (const Value& v : rows[i]) row.push_back(OJson::parse(to_json(v).dump()));
    out_rows.push_back(row);
  }
  return reply(200, OJson{{"relation", name},
                          {"history_id", hid},
                          {"version", at},
                          {"total", rows.size()},
                          {"offset", offset},
                          {"limit", limit},
                          {"columns", cols},
                          {"rows", out_rows}});
}

ApiResponse ApiSession::get_schema() {
  OJson arr = OJson::array();
  for (const auto& [name, rel] : base_.relations()) {
    arr.push_back(OJson::parse(to_json(rel.schema).dump()));
  }
  return reply(200, OJson{{"relations", arr}});
}

}  // namespace histif
