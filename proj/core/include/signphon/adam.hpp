// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_ADAM_HPP
#define SIGNPHON_ADAM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "signphon/tensor.hpp"

namespace signphon {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moment buffers are bound to the parameter
/// list on first use; the list's order and shapes must stay fixed.
template <typename T>
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  /// One update at step `steps() + 1` with learning rate `lr`. Every
  /// parameter must carry a gradient buffer (UsageError otherwise); the
  /// buffers are released afterwards.
  void step(std::span<Tensor<T>> params, double lr);

  std::int64_t steps() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::int64_t step_ = 0;
  std::vector<std::vector<T>> m_;
  std::vector<std::vector<T>> v_;
};

extern template class Adam<float>;
extern template class Adam<double>;

}  // namespace signphon

#endif  // SIGNPHON_ADAM_HPP
