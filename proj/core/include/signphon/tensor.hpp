// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_TENSOR_HPP
#define SIGNPHON_TENSOR_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace signphon {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

/// Dense row-major tensor with an optional gradient buffer.
///
/// Tensor is a handle: copies share storage, which is what lets the tape
/// route gradients back into parameters. Use clone() for an independent
/// copy. Instantiated for float (training) and double (verification).
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<T> values);

  static Tensor scalar(T value) { return Tensor(Shape{1}, {value}); }

  bool defined() const { return storage_ != nullptr; }
  const Shape& shape() const { return storage_->shape; }
  std::size_t rank() const { return storage_->shape.size(); }
  std::size_t dim(std::size_t axis) const { return storage_->shape.at(axis); }
  std::size_t numel() const { return storage_->values.size(); }

  std::span<T> values() { return storage_->values; }
  std::span<const T> values() const { return storage_->values; }
  T* data() { return storage_->values.data(); }
  const T* data() const { return storage_->values.data(); }

  /// Value of a one-element tensor; throws UsageError otherwise.
  T item() const;

  bool has_grad() const { return !storage_->grad.empty(); }
  std::span<T> grad() { return storage_->grad; }
  std::span<const T> grad() const { return storage_->grad; }
  /// Allocates a zero gradient if none exists; returns it.
  std::span<T> ensure_grad();
  void zero_grad();
  /// Releases the gradient buffer.
  void clear_grad() { std::vector<T>().swap(storage_->grad); }

  Tensor clone() const;
  bool shares_storage_with(const Tensor& other) const {
    return storage_ == other.storage_;
  }

 private:
  struct Storage {
    Shape shape;
    std::vector<T> values;
    std::vector<T> grad;
  };
  std::shared_ptr<Storage> storage_;
};

/// Ordered record of backward closures. Operations append in evaluation
/// order, so replaying in reverse visits every node after all of its
/// consumers.
template <typename T>
class Tape {
 public:
  void record(std::function<void()> backward_fn) {
    nodes_.push_back(std::move(backward_fn));
  }
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  /// Seeds d(loss)/d(loss) = seed and propagates to every tensor reachable
  /// from `loss`. `loss` must hold exactly one element (UsageError).
  /// Gradients accumulate into existing buffers.
  void backward(Tensor<T>& loss, T seed = T(1));

 private:
  std::vector<std::function<void()>> nodes_;
};

extern template class Tensor<float>;
extern template class Tensor<double>;
extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace signphon

#endif  // SIGNPHON_TENSOR_HPP
