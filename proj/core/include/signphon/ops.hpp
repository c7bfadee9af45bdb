// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_OPS_HPP
#define SIGNPHON_OPS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "signphon/tensor.hpp"

// Differentiable primitives. Every op takes an optional tape; when it is
// non-null the op records its backward closure on it. Broadcasting is
// limited to what the encoder needs: matrix products with flattened
// leading dimensions, row-wise bias addition and scalar scaling.

namespace signphon {

/// Compressed sparse row matrix of doubles (the fixed graph adjacency).
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col_index;
  std::vector<double> values;

  static SparseMatrix from_dense(std::size_t rows, std::size_t cols,
                                 std::span<const double> dense);
  std::size_t nonzeros() const { return values.size(); }
};

namespace ops {

/// a[..., k] x b[k, n] -> [..., n]. Leading dims of `a` are flattened; a
/// rank-1 `a` is a row vector.
template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b, Tape<T>* tape = nullptr);

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b, Tape<T>* tape = nullptr);

/// x[..., n] + bias[n]
template <typename T>
Tensor<T> add_bias(const Tensor<T>& x, const Tensor<T>& bias,
                   Tape<T>* tape = nullptr);

template <typename T>
Tensor<T> scale(const Tensor<T>& x, T factor, Tape<T>* tape = nullptr);

template <typename T>
Tensor<T> relu(const Tensor<T>& x, Tape<T>* tape = nullptr);

/// Sum of all elements as a one-element tensor.
template <typename T>
Tensor<T> sum(const Tensor<T>& x, Tape<T>* tape = nullptr);

/// Mean over every axis except the last: [..., c] -> [c].
template <typename T>
Tensor<T> mean_pool(const Tensor<T>& x, Tape<T>* tape = nullptr);

/// Depthwise convolution along the frame axis with zero "same" padding:
/// x[T, V, C], kernel[k, C] (k odd) -> [T, V, C].
template <typename T>
Tensor<T> conv1d_temporal(const Tensor<T>& x, const Tensor<T>& kernel,
                          Tape<T>* tape = nullptr);

/// Per-frame neighbourhood aggregation y_t = A x_t for x[T, V, C] and a
/// V x V sparse matrix A.
template <typename T>
Tensor<T> graph_propagate(const SparseMatrix& adjacency, const Tensor<T>& x,
                          Tape<T>* tape = nullptr);

/// Max-shifted softmax along `axis`. Throws NumericError on NaN input.
template <typename T>
Tensor<T> softmax(const Tensor<T>& logits, std::size_t axis,
                  Tape<T>* tape = nullptr);

/// Probabilities below this are floored before taking the log.
inline constexpr double kProbabilityFloor = 1e-12;

/// -log(max(probs[label], floor)) for a 1-based class index into a rank-1
/// distribution. Throws RangeError for an out-of-range label.
template <typename T>
Tensor<T> cross_entropy(int label, const Tensor<T>& probs,
                        Tape<T>* tape = nullptr);

}  // namespace ops
}  // namespace signphon

#endif  // SIGNPHON_OPS_HPP
