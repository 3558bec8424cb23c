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

#ifndef HISTIF_TOOLS_HTTP_BINDING_HPP_
#define HISTIF_TOOLS_HTTP_BINDING_HPP_

#include <map>
#include <string>

#include "histif/service.hpp"
#include "httplib.h"

namespace histif {

// Routes every /api request of `server` to `session`.
inline void bind_routes(httplib::Server& server, ApiSession& session) {
  auto dispatch = [&session](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    ApiResponse r = session.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    if (!r.body.empty()) res.set_content(r.body, "application/json");
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Get(R"(/api/.*)", dispatch);
  server.Post(R"(/api/.*)", dispatch);
  server.Options(R"(/api/.*)", dispatch);
}

}  // namespace histif

#endif  // HISTIF_TOOLS_HTTP_BINDING_HPP_
