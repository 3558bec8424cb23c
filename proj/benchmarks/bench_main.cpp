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

#include <benchmark/benchmark.h>

#include "histif/dsl.hpp"
#include "histif/engine.hpp"
#include "histif/reenact.hpp"
#include "histif/solver.hpp"
#include "histif/workload.hpp"

namespace {

using histif::Method;

// Args: method index, U, D, size.
void BM_Answer(benchmark::State& state) {
  histif::WorkloadSpec spec;
  spec.updates = static_cast<size_t>(state.range(1));
  spec.dependent = static_cast<int>(state.range(2));
  spec.tuples = 1;
  spec.size = static_cast<size_t>(state.range(3));
  histif::Workload w = histif::generate_workload(spec);
  histif::VersionedStore store(w.db);
  store.append(w.history);
  histif::WhatIfOptions opts;
  opts.method = histif::all_methods().at(static_cast<size_t>(state.range(0)));
  state.SetLabel(std::string(histif::method_name(opts.method)));
  size_t rows = 0;
  for (auto _ : state) {
    histif::WhatIfResult r = histif::answer(store, w.mods, opts);
    rows = r.report.delta_rows;
    benchmark::DoNotOptimize(rows);
  }
  state.counters["delta_rows"] = static_cast<double>(rows);
}

void answer_args(benchmark::internal::Benchmark* b) {
  for (int m = 0; m < 5; ++m) {
    for (int d : {10, 100}) b->Args({m, 20, d, 10000});
  }
  b->Unit(benchmark::kMillisecond);
}
BENCHMARK(BM_Answer)->Apply(answer_args);

void BM_ReenactEval(benchmark::State& state) {
  histif::WorkloadSpec spec;
  spec.updates = static_cast<size_t>(state.range(0));
  spec.size = 10000;
  histif::Workload w = histif::generate_workload(spec);
  histif::QueryMap q = histif::reenact_history(w.history, w.db);
  for (auto _ : state) {
    for (const auto& [rel, query] : q) {
      benchmark::DoNotOptimize(histif::eval_query(query, w.db).rows.size());
    }
  }
}
BENCHMARK(BM_ReenactEval)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_CheckSat(benchmark::State& state) {
  using namespace histif;
  Cond f = parse_cond(
      "(X + Y > 7 OR Z - X < 2) AND (CASE WHEN X > 3 THEN Y ELSE Z END = 4) AND X + Z <> 6");
  VarTable vars;
  CompileOptions copts;
  for (const char* v : {"X", "Y", "Z"}) {
    vars[v] = {Type::kInteger, false};
    copts.bounds[v] = {Value::integer(0), Value::integer(state.range(0))};
  }
  for (auto _ : state) {
    SatResult r = check_sat(f, vars, copts);
    benchmark::DoNotOptimize(r.status);
  }
}
BENCHMARK(BM_CheckSat)->Arg(10)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
