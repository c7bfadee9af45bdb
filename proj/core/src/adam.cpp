// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/adam.hpp"

#include <cmath>
#include <string>

#include "signphon/errors.hpp"

namespace signphon {

template <typename T>
void Adam<T>::step(std::span<Tensor<T>> params, double lr) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].has_grad()) {
      throw UsageError("adam step: parameter " + std::to_string(i) +
                       " has no gradient");
    }
  }
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.numel(), T(0));
      v_.emplace_back(p.numel(), T(0));
    }
  } else if (m_.size() != params.size()) {
    throw UsageError("adam step: parameter list changed size");
  }

  ++step_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const T step_size = static_cast<T>(lr / correction1);
  const T inv_sqrt_c2 = static_cast<T>(1.0 / std::sqrt(correction2));
  const T eps = static_cast<T>(config_.epsilon);
  const T tb1 = static_cast<T>(b1), tb2 = static_cast<T>(b2);

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto values = params[i].values();
    auto grad = params[i].grad();
    auto& m = m_[i];
    auto& v = v_[i];
    if (m.size() != values.size()) {
      throw UsageError("adam step: parameter " + std::to_string(i) +
                       " changed shape");
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
      const T g = grad[j];
      m[j] = tb1 * m[j] + (T(1) - tb1) * g;
      v[j] = tb2 * v[j] + (T(1) - tb2) * g * g;
      values[j] -= step_size * m[j] / (std::sqrt(v[j]) * inv_sqrt_c2 + eps);
    }
    params[i].clear_grad();
  }
}

template class Adam<float>;
template class Adam<double>;

}  // namespace signphon
