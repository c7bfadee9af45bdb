// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/tensor.hpp"

#include <algorithm>

#include "signphon/errors.hpp"

namespace signphon {

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

template <typename T>
Tensor<T>::Tensor(Shape shape) : storage_(std::make_shared<Storage>()) {
  for (auto d : shape) {
    if (d == 0) throw DimensionError("zero extent in shape " + shape_string(shape));
  }
  storage_->values.assign(shape_numel(shape), T(0));
  storage_->shape = std::move(shape);
}

template <typename T>
Tensor<T>::Tensor(Shape shape, std::vector<T> values)
    : storage_(std::make_shared<Storage>()) {
  if (shape_numel(shape) != values.size() || shape.empty()) {
    throw DimensionError("shape " + shape_string(shape) + " does not hold " +
                         std::to_string(values.size()) + " values");
  }
  storage_->shape = std::move(shape);
  storage_->values = std::move(values);
}

template <typename T>
T Tensor<T>::item() const {
  if (numel() != 1) {
    throw UsageError("item() on tensor of shape " + shape_string(shape()));
  }
  return storage_->values[0];
}

template <typename T>
std::span<T> Tensor<T>::ensure_grad() {
  if (storage_->grad.empty()) storage_->grad.assign(numel(), T(0));
  return storage_->grad;
}

template <typename T>
void Tensor<T>::zero_grad() {
  storage_->grad.assign(numel(), T(0));
}

template <typename T>
Tensor<T> Tensor<T>::clone() const {
  return Tensor(storage_->shape, storage_->values);
}

template <typename T>
void Tape<T>::backward(Tensor<T>& loss, T seed) {
  if (!loss.defined() || loss.numel() != 1) {
    throw UsageError("backward requires a scalar loss, got shape " +
                     (loss.defined() ? shape_string(loss.shape()) : "[]"));
  }
  loss.ensure_grad()[0] += seed;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
}

template class Tensor<float>;
template class Tensor<double>;
template class Tape<float>;
template class Tape<double>;

}  // namespace signphon
