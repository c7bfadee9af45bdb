// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_TESTS_FIXTURES_HPP
#define SIGNPHON_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "signphon/model.hpp"
#include "signphon/ops.hpp"
#include "signphon/pose.hpp"
#include "signphon/rng.hpp"
#include "signphon/taxonomy.hpp"

namespace signphon::testing {

inline ModelConfig toy_config(std::size_t gloss_classes = 20) {
  ModelConfig c;
  c.encoder.channels = {16, 32};
  c.encoder.temporal_kernel = 5;
  c.encoder.embedding_dim = 64;
  c.encoder.frames = 32;
  c.encoder.joints = 27;
  c.gloss_classes = gloss_classes;
  return c;
}

/// Uniform random keypoints and uniformly drawn valid labels.
inline LabeledExample random_example(std::uint64_t seed, std::size_t frames = 32,
                                     std::size_t joints = 27, int glosses = 20) {
  const auto& tax = build_taxonomy();
  Rng rng(seed);
  LabeledExample ex;
  ex.id = "rand" + std::to_string(seed);
  ex.pose = PoseSequence(frames, joints);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t v = 0; v < joints; ++v) {
      ex.pose.at(t, v, 0) = rng.uniform();
      ex.pose.at(t, v, 1) = rng.uniform();
      ex.pose.at(t, v, 2) = rng.uniform(0.5, 1.0);
    }
  }
  ex.gloss = static_cast<int>(rng.below(static_cast<std::uint64_t>(glosses))) + 1;
  for (const auto& t : tax.types()) {
    ex.phonemes[t.id - 1] =
        static_cast<int>(rng.below(static_cast<std::uint64_t>(t.cardinality))) + 1;
  }
  return ex;
}

/// Signs of every ReLU pre-activation in encode(), recomputed from the
/// primitive ops. Two parameter settings with equal patterns lie on the same
/// linear piece of the encoder.
inline std::vector<bool> relu_pattern(const ModelParameters<double>& params,
                                      const SkeletonGraph& graph,
                                      const PoseSequence& pose) {
  std::vector<bool> signs;
  auto record = [&signs](const Tensor<double>& pre) {
    for (double v : pre.values()) signs.push_back(v > 0.0);
  };
  Tensor<double> x = pose_to_input<double>(pose);
  for (const auto& block : params.blocks()) {
    Tensor<double> h = ops::graph_propagate(graph.sparse_adjacency(), x);
    h = ops::add_bias(ops::conv1d_temporal(ops::matmul(h, block.spatial), block.temporal),
                      block.bias);
    record(h);
    h = ops::relu(h);
    if (h.shape() == x.shape()) h = ops::add(h, x);
    x = h;
  }
  Tensor<double> z = ops::add_bias(ops::matmul(ops::mean_pool(x), params.projection().weight),
                                   params.projection().bias);
  record(z);
  return signs;
}

using PatternFn = std::function<std::vector<bool>(const ModelParameters<double>&)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::string worst;  // "<tensor>[<index>]"
  std::size_t checked = 0;
  /// Entries whose interval [x - h, x + h] flips a ReLU (central
  /// differences do not estimate a derivative there).
  std::size_t kink_crossings = 0;
  /// Kink crossings still present at step / 100.
  std::size_t unresolved_kinks = 0;
};

/// Compares reverse-mode gradients of `loss` against central differences
/// (f(x+h) - f(x-h)) / 2h on up to `per_tensor` entries of every tensor
/// (all entries when the tensor is that small; otherwise an evenly spaced
/// sample including both ends). Relative error is
/// |analytic - numeric| / max(|analytic|, |numeric|, floor).
///
/// With `pattern`, an entry whose interval flips a ReLU is measured again
/// at h/10 and then h/100, keeping the first kink-free estimate.
inline GradCheckResult gradient_check(
    ModelParameters<double>& params,
    const std::function<Tensor<double>(const ModelParameters<double>&, Tape<double>*)>& loss,
    double step = 1e-5, std::size_t per_tensor = 48, double floor = 1e-4,
    const PatternFn& pattern = {}) {
  params.zero_grad();
  Tape<double> tape;
  Tensor<double> value = loss(params, &tape);
  tape.backward(value);

  GradCheckResult result;
  const auto tensors = params.tensors();
  const auto names = params.tensor_names();
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    Tensor<double> t = tensors[k];
    const std::vector<double> analytic(t.grad().begin(), t.grad().end());
    const std::size_t n = t.numel();
    std::vector<std::size_t> picks;
    if (n <= per_tensor) {
      for (std::size_t i = 0; i < n; ++i) picks.push_back(i);
    } else {
      for (std::size_t s = 0; s < per_tensor; ++s) {
        picks.push_back(s * (n - 1) / (per_tensor - 1));
      }
    }
    for (std::size_t i : picks) {
      const double saved = t.values()[i];
      auto central = [&](double h, bool& crossed) {
        t.values()[i] = saved + h;
        const double up = loss(params, nullptr).item();
        std::vector<bool> up_pattern;
        if (pattern) up_pattern = pattern(params);
        t.values()[i] = saved - h;
        const double down = loss(params, nullptr).item();
        crossed = pattern && pattern(params) != up_pattern;
        t.values()[i] = saved;
        return (up - down) / (2.0 * h);
      };
      bool crossed = false;
      double numeric = central(step, crossed);
      if (crossed) {
        ++result.kink_crossings;
        for (double h = step / 10; crossed && h >= step / 100; h /= 10) {
          numeric = central(h, crossed);
        }
        if (crossed) ++result.unresolved_kinks;
      }
      const double a = analytic.empty() ? 0.0 : analytic[i];
      const double abs_err = std::abs(a - numeric);
      const double rel = abs_err / std::max({std::abs(a), std::abs(numeric), floor});
      result.max_abs_error = std::max(result.max_abs_error, abs_err);
      if (rel >= result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst = names[k] + "[" + std::to_string(i) + "]";
      }
      ++result.checked;
    }
  }
  params.zero_grad();
  return result;
}

}  // namespace signphon::testing

#endif  // SIGNPHON_TESTS_FIXTURES_HPP
