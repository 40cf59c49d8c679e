// Copyright 2026 The Fixq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "benchmark/benchmark.h"

#include "fixq/datagen.hpp"
#include "fixq/eval.hpp"
#include "fixq/fixpoint.hpp"
#include "fixq/parser.hpp"
#include "fixq/queries.hpp"
#include "fixq/xdm.hpp"

namespace {

using namespace fixq;

struct CurriculumSetup {
  NodeStore store;
  DocRegistry docs;
  Program program;

  explicit CurriculumSetup(std::size_t courses) {
    GeneratedData data = generate(curriculum_random(courses));
    docs.register_document("curriculum.xml", store.parse_document(data.xml));
    program = desugar(parse_query(queries::kCurriculumClosure));
  }

  Sequence run(Strategy strategy) {
    Env env;
    env.store = &store;
    env.docs = &docs;
    env.program = &program;
    env.config.strategy = strategy;
    env.config.id_attribute = "code";
    return eval(program.main, env);
  }
};

void curriculum_closure_naive(benchmark::State& state) {
  CurriculumSetup setup(std::size_t(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(setup.run(Strategy::Naive));
  }
}
BENCHMARK(curriculum_closure_naive)->Arg(100)->Arg(800)->Arg(4000)->Unit(benchmark::kMillisecond);

void curriculum_closure_delta(benchmark::State& state) {
  CurriculumSetup setup(std::size_t(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(setup.run(Strategy::Delta));
  }
}
BENCHMARK(curriculum_closure_delta)->Arg(100)->Arg(800)->Arg(4000)->Unit(benchmark::kMillisecond);

void curriculum_closure_auto(benchmark::State& state) {
  // each run pays for both analyzers before the delta evaluation
  CurriculumSetup setup(std::size_t(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(setup.run(Strategy::Auto));
  }
}
BENCHMARK(curriculum_closure_auto)->Arg(800)->Unit(benchmark::kMillisecond);

void parse_document_bench(benchmark::State& state) {
  GeneratedData data = generate(curriculum_random(std::size_t(state.range(0))));
  for (auto _ : state) {
    NodeStore store;
    benchmark::DoNotOptimize(store.parse_document(data.xml));
  }
}
BENCHMARK(parse_document_bench)->Arg(800)->Arg(4000)->Unit(benchmark::kMillisecond);

void ddo_bench(benchmark::State& state) {
  NodeStore store;
  GeneratedData data = generate(curriculum_random(800));
  NodeId doc = store.parse_document(data.xml);
  Sequence all = store.axis_step(doc, Axis::DescendantOrSelf, NodeTest::any_node());
  Sequence shuffled;
  for (std::size_t i = 0; i < all.size(); ++i) {
    shuffled.push_back(all[(i * 7919) % all.size()]);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(ddo(shuffled));
  }
}
BENCHMARK(ddo_bench);

}  // namespace

BENCHMARK_MAIN();
