// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "signphon/dataset_io.hpp"
#include "signphon/skeleton_graph.hpp"
#include "signphon/synthesis.hpp"

namespace {

void BM_Synthesize(benchmark::State& state) {
  const auto& tax = signphon::build_taxonomy();
  const auto graph = signphon::SkeletonGraph::upper_body_27();
  auto spec = signphon::default_synthesis_spec(tax, 42);
  spec.example_count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto corpus = signphon::synthesize(spec, graph, tax);
    benchmark::DoNotOptimize(corpus.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Synthesize)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PoseJsonRoundTrip(benchmark::State& state) {
  const auto& tax = signphon::build_taxonomy();
  auto spec = signphon::default_synthesis_spec(tax, 42);
  spec.example_count = 1;
  const auto ex = signphon::synthesize(spec, signphon::SkeletonGraph::upper_body_27(), tax)[0];
  const signphon::PoseFile file{ex.id, 30.0, ex.pose};
  for (auto _ : state) {
    auto back = signphon::pose_file_from_json(signphon::pose_file_to_json(file));
    benchmark::DoNotOptimize(back.pose.values.data());
  }
}
BENCHMARK(BM_PoseJsonRoundTrip);

}  // namespace
