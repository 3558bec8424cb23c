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

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "histif/dsl.hpp"
#include "histif/engine.hpp"
#include "histif/error.hpp"
#include "histif/json_codec.hpp"
#include "histif/store.hpp"
#include "histif/workload.hpp"

namespace histif {

namespace fs = std::filesystem;

namespace {

struct Config {
  std::string data_dir;
  std::string method = "r+ps+ds";
  int groups = 8;
  std::string group_by;
  int64_t big_m = 0;
  uint64_t solver_budget = 1000000;
  uint64_t seed = 42;
  std::string format = "csv";
};

fs::path data_dir(const Config& c) {
  if (const char* env = std::getenv("HISTIF_DATA_DIR"); env && *env) return env;
  return c.data_dir.empty() ? fs::path("histif-data") : fs::path(c.data_dir);
}

WhatIfOptions whatif_options(const Config& c) {
  WhatIfOptions o;
  auto m = parse_method(c.method);
  if (!m) throw CLI::ValidationError("--method", "unknown method " + c.method);
  o.method = *m;
  o.compress.groups = c.groups;
  o.compress.group_by = c.group_by;
  o.big_m_floor = c.big_m;
  o.solver_budget = c.solver_budget;
  return o;
}

Json read_json(const fs::path& p) {
  std::string text = read_file(p);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw DataError(p.string() + ": " + e.what());
  }
}

std::vector<Modification> read_mods(const fs::path& p) {
  std::string text = read_file(p);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  try {
    return modifications_from_json(Json::parse(text));
  } catch (const Json::exception& e) {
    throw DataError(p.string() + ": " + e.what());
  }
}

int cmd_load(const Config& c, const std::string& schema, const std::vector<std::string>& csvs,
             const std::string& history, std::ostream& out) {
  std::vector<fs::path> files(csvs.begin(), csvs.end());
  VersionedStore s(load_database(schema, files));
  if (!history.empty()) s.append(parse_history(read_file(history)));
  fs::path dir = data_dir(c);
  save_store(s, dir);
  for (const auto& [name, rel] : s.base().relations()) {
    out << name << ": " << rel.rows.size() << " rows\n";
  }
  out << "history: " << s.size() << " statements\nstore: " << dir.string() << "\n";
  return kExitOk;
}

int cmd_dump(const Config& c, const std::string& relation, long long at, std::ostream& out) {
  VersionedStore s = open_store(data_dir(c));
  size_t v = at < 0 ? s.size() : static_cast<size_t>(at);
  Database db = s.reconstruct(v);
  if (!relation.empty()) {
    out << write_relation_csv(db.get(relation));
    return kExitOk;
  }
  bool many = db.relations().size() > 1;
  for (const auto& [name, rel] : db.relations()) {
    if (many) out << "# " << name << "\n";
    out << write_relation_csv(rel);
  }
  return kExitOk;
}

int cmd_whatif(const Config& c, const std::string& history, const std::string& mods,
               const std::string& out_file, const std::string& report_file, std::ostream& out,
               std::ostream& err) {
  WhatIfOptions o = whatif_options(c);
  VersionedStore s = open_store(data_dir(c));
  if (!history.empty()) {
    VersionedStore fresh(s.base());
    fresh.append(parse_history(read_file(history)));
    s = std::move(fresh);
  }
  std::vector<Modification> m = mods.empty() ? std::vector<Modification>{} : read_mods(mods);
  WhatIfResult r = answer(s, m, o);
  std::string delta = c.format == "json" ? delta_jsonl(r.delta) : delta_csv(r.delta);
  if (out_file.empty()) {
    out << delta;
  } else {
    write_file(out_file, delta);
  }
  std::string report = r.report.to_json().dump(2) + "\n";
  if (report_file.empty()) {
    err << report;
  } else {
    write_file(report_file, report);
  }
  for (const std::string& d : r.report.degradations) err << "warning: " << d << "\n";
  if (r.report.solver_unknown) {
    err << "warning: solver budget exhausted; affected statements were kept\n";
    return kExitSolverBudget;
  }
  return kExitOk;
}

template <typename T>
std::vector<T> grid(const Json& spec, const char* key, T def) {
  if (!spec.contains(key)) return {def};
  const Json& v = spec[key];
  std::vector<T> out;
  if (v.is_array()) {
    for (const Json& x : v) out.push_back(x.get<T>());
  } else {
    out.push_back(v.get<T>());
  }
  if (out.empty()) throw DataError(std::string("empty list for ") + key);
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

int cmd_bench(const Config& c, const std::string& spec_file, std::ostream& out) {
  Json spec = read_json(spec_file);
  if (!spec.is_object()) throw DataError("bench spec must be an object");
  static const std::set<std::string> kKeys{"U", "M", "D", "T", "I", "X", "size",
                                           "seed", "methods", "repetitions"};
  for (const auto& [k, v] : spec.items()) {
    if (!kKeys.count(k)) throw DataError("unknown bench field " + k);
  }
  std::vector<Method> methods;
  if (!spec.contains("methods") || spec["methods"] == "all") {
    methods = {Method::kR, Method::kRDs, Method::kRPs, Method::kRPsDs};
  } else {
    for (const Json& m : spec["methods"]) {
      auto pm = parse_method(m.get<std::string>());
      if (!pm) throw DataError("unknown method " + m.get<std::string>());
      methods.push_back(*pm);
    }
  }
  int reps = spec.value("repetitions", 3);
  if (reps < 1) throw DataError("repetitions must be positive");
  WhatIfOptions base = whatif_options(c);

  out << "method,U,M,D,T,I,X,size,seed,normalize_ms,reconstruct_ms,program_slicing_ms,"
         "data_slicing_ms,execution_ms,delta_ms,total_ms,delta_rows\n";
  for (size_t size : grid<size_t>(spec, "size", 1000))
    for (size_t u : grid<size_t>(spec, "U", 10))
      for (size_t m : grid<size_t>(spec, "M", 1))
        for (int d : grid<int>(spec, "D", 10))
          for (int t : grid<int>(spec, "T", 10))
            for (int i : grid<int>(spec, "I", 0))
              for (int x : grid<int>(spec, "X", 0))
                for (uint64_t seed : grid<uint64_t>(spec, "seed", c.seed)) {
                  WorkloadSpec ws{u, m, d, t, i, x, size, seed};
                  Workload w = generate_workload(ws);
                  VersionedStore s(w.db);
                  s.append(w.history);
                  for (Method meth : methods) {
                    WhatIfOptions o = base;
                    o.method = meth;
                    answer(s, w.mods, o);  // warm-up, discarded
                    std::vector<std::vector<double>> ph(7);
                    size_t rows = 0;
                    for (int r = 0; r < reps; ++r) {
                      WhatIfResult res = answer(s, w.mods, o);
                      const PhaseTimes& p = res.report.ms;
                      double vals[] = {p.normalize, p.reconstruct, p.program_slicing,
                                       p.data_slicing, p.execution, p.delta, p.total};
                      for (int k = 0; k < 7; ++k) ph[k].push_back(vals[k]);
                      rows = res.report.delta_rows;
                    }
                    out << method_name(meth) << ',' << u << ',' << m << ',' << d << ',' << t
                        << ',' << i << ',' << x << ',' << size << ',' << seed;
                    for (auto& v : ph) out << ',' << std::to_string(median(v));
                    out << ',' << rows << '\n';
                  }
                }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"histif: historical what-if queries over update histories", "histif"};
  app.require_subcommand(1);
  Config c;
  app.add_option("--data-dir", c.data_dir, "Store directory (HISTIF_DATA_DIR overrides)");
  app.add_option("--method", c.method, "naive|r|r+ds|r+ps|r+ps+ds")
      ->check(CLI::IsMember({"naive", "r", "r+ds", "r+ps", "r+ps+ds"}));
  app.add_option("--groups", c.groups, "Compression groups")->check(CLI::PositiveNumber);
  app.add_option("--group-by", c.group_by, "Compression group attribute");
  app.add_option("--big-m", c.big_m, "Lower bound for big-M constants")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--solver-budget", c.solver_budget, "Branch-and-bound node budget")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "Workload seed");
  app.add_option("--format", c.format, "Delta format")->check(CLI::IsMember({"csv", "json"}));

  std::string schema, history, mods, out_file, report_file, relation, spec;
  std::vector<std::string> csvs;
  long long at = -1;

  CLI::App* load = app.add_subcommand("load", "Create a store from a schema and CSV files");
  load->add_option("--schema", schema, "Schema JSON")->required();
  load->add_option("--history", history, "Statement log (DSL)");
  load->add_option("csv", csvs, "CSV files, one per relation");

  CLI::App* whatif = app.add_subcommand("whatif", "Answer a historical what-if query");
  whatif->add_option("--history", history, "History file replacing the stored log");
  whatif->add_option("--mods", mods, "Modifications JSON");
  whatif->add_option("--out", out_file, "Delta output file (default stdout)");
  whatif->add_option("--report", report_file, "Run report file (default stderr)");

  CLI::App* bench = app.add_subcommand("bench", "Run generated workloads");
  bench->add_option("spec", spec, "Bench spec JSON")->required();

  CLI::App* dump = app.add_subcommand("dump", "Print relations at a version");
  dump->add_option("--relation", relation, "Relation name");
  dump->add_option("--at", at, "Version (default: current)")->check(CLI::NonNegativeNumber);

  // Global flags are accepted after the subcommand name as well.
  for (CLI::App* sub : {load, whatif, bench, dump}) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'histif --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (load->parsed()) return cmd_load(c, schema, csvs, history, out);
    if (dump->parsed()) return cmd_dump(c, relation, at, out);
    if (whatif->parsed()) return cmd_whatif(c, history, mods, out_file, report_file, out, err);
    if (bench->parsed()) return cmd_bench(c, spec, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace histif
