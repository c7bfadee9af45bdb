// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "signphon/losses.hpp"
#include "signphon/model.hpp"
#include "signphon/ops.hpp"
#include "signphon/rng.hpp"
#include "signphon/skeleton_graph.hpp"
#include "signphon/taxonomy.hpp"

namespace {

using signphon::LabeledExample;
using signphon::ModelConfig;
using signphon::ModelParameters;

LabeledExample noise_example(std::size_t frames) {
  const auto& tax = signphon::build_taxonomy();
  signphon::Rng rng(3);
  LabeledExample ex;
  ex.id = "bench";
  ex.pose = signphon::PoseSequence(frames, 27);
  for (auto& v : ex.pose.values) v = rng.uniform();
  ex.gloss = 1;
  for (const auto& t : tax.types()) ex.phonemes[t.id - 1] = 1;
  return ex;
}

ModelConfig config_for(std::size_t frames) {
  ModelConfig c;
  c.encoder.frames = frames;
  return c;
}

template <typename T>
void BM_Encode(benchmark::State& state) {
  const auto frames = static_cast<std::size_t>(state.range(0));
  const auto graph = signphon::SkeletonGraph::upper_body_27();
  const auto params =
      ModelParameters<T>::initialize(config_for(frames), signphon::build_taxonomy(), 1);
  const auto input = signphon::pose_to_input<T>(noise_example(frames).pose);
  for (auto _ : state) {
    auto z = signphon::encode(params, graph, input);
    benchmark::DoNotOptimize(z.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Encode<float>)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_Encode<double>)->Arg(32);

void BM_MultitaskForwardBackward(benchmark::State& state) {
  const auto frames = static_cast<std::size_t>(state.range(0));
  const auto graph = signphon::SkeletonGraph::upper_body_27();
  auto params =
      ModelParameters<float>::initialize(config_for(frames), signphon::build_taxonomy(), 1);
  const auto ex = noise_example(frames);
  for (auto _ : state) {
    params.zero_grad();
    signphon::Tape<float> tape;
    auto loss = signphon::loss_multitask(params, graph, ex, &tape);
    tape.backward(loss);
    benchmark::DoNotOptimize(params.projection().weight.grad().data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MultitaskForwardBackward)->Arg(32)->Arg(64);

void BM_GraphPropagate(benchmark::State& state) {
  const auto graph = signphon::SkeletonGraph::upper_body_27();
  const auto channels = static_cast<std::size_t>(state.range(0));
  signphon::Tensor<float> x(signphon::Shape{32, 27, channels});
  signphon::Rng rng(5);
  for (auto& v : x.values()) v = static_cast<float>(rng.uniform(-1, 1));
  for (auto _ : state) {
    auto y = signphon::ops::graph_propagate(graph.sparse_adjacency(), x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(x.numel() * sizeof(float)));
}
BENCHMARK(BM_GraphPropagate)->Arg(3)->Arg(16)->Arg(32);

}  // namespace
