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

#ifndef HISTIF_SERVICE_HPP_
#define HISTIF_SERVICE_HPP_

#include <chrono>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "histif/engine.hpp"

namespace histif {

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON text
};

struct ApiOptions {
  std::chrono::seconds timeout{60};
  size_t report_cache = 100;
  WhatIfOptions defaults;
};

// Transport-independent request handling for the JSON API:
//   GET  /api/history              ids of the loaded histories
//   GET  /api/history/{id}         statements with positions
//   POST /api/history              {"id"?, "statements": [...] | "dsl": "..."}
//   POST /api/whatif               {"history_id", "modifications", "method", "params"}
//   GET  /api/report/{request_id}  a recent run report
//   GET  /api/relation/{name}?history=&at=&offset=&limit=
//   GET  /api/schema
class ApiSession {
 public:
  // `store` becomes history "main".
  explicit ApiSession(VersionedStore store, ApiOptions opts = {});

  ApiResponse handle(std::string_view method, std::string_view path,
                     const std::map<std::string, std::string>& query, std::string_view body);

 private:
  ApiResponse list_histories();
  ApiResponse get_history(const std::string& id);
  ApiResponse post_history(std::string_view body);
  ApiResponse post_whatif(std::string_view body);
  ApiResponse get_report(const std::string& id);
  ApiResponse get_relation(const std::string& name,
                           const std::map<std::string, std::string>& query);
  ApiResponse get_schema();

  std::shared_ptr<const VersionedStore> find(const std::string& id);

  ApiOptions opts_;
  Database base_;
  std::shared_mutex mu_;  // guards histories_ and next ids
  std::map<std::string, std::shared_ptr<const VersionedStore>> histories_;
  size_t next_history_ = 1;

  std::mutex report_mu_;
  size_t next_request_ = 1;
  std::list<std::pair<std::string, std::string>> reports_;  // most recent first
};

}  // namespace histif

#endif  // HISTIF_SERVICE_HPP_
