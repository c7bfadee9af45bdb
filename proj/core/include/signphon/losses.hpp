// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_LOSSES_HPP
#define SIGNPHON_LOSSES_HPP

#include <span>

#include "signphon/model.hpp"
#include "signphon/pose.hpp"
#include "signphon/skeleton_graph.hpp"

// Per-example objectives. Type terms are cross-entropies of each head's
// distribution against the example's label, summed in curriculum order
// over a single shared encoding. Every function validates the example's
// labels first and throws ValidationError naming the offending type.

namespace signphon {

/// Sum of the cross-entropy terms for `types` given a precomputed
/// embedding. When `per_type` is non-empty, term values are written to
/// per_type[type - 1].
template <typename T>
Tensor<T> loss_over_types(const ModelParameters<T>& params,
                          const Tensor<T>& embedding,
                          const LabeledExample& example,
                          std::span<const TypeId> types, Tape<T>* tape = nullptr,
                          std::span<double> per_type = {});

/// One type's cross-entropy through the full encoder.
template <typename T>
Tensor<T> loss_finetune(const ModelParameters<T>& params,
                        const SkeletonGraph& graph,
                        const LabeledExample& example, TypeId type,
                        Tape<T>* tape = nullptr);

/// Sum of all 16 type terms over one shared encoding.
template <typename T>
Tensor<T> loss_multitask(const ModelParameters<T>& params,
                         const SkeletonGraph& graph,
                         const LabeledExample& example, Tape<T>* tape = nullptr);

/// Sum of the first `k` type terms in curriculum order.
template <typename T>
Tensor<T> loss_prefix(const ModelParameters<T>& params,
                      const SkeletonGraph& graph, const LabeledExample& example,
                      int k, Tape<T>* tape = nullptr);

/// Cumulative curriculum objective at a 0-based epoch:
/// loss_prefix with k = active_type_count(epoch, interval).
template <typename T>
Tensor<T> loss_curriculum(const ModelParameters<T>& params,
                          const SkeletonGraph& graph,
                          const LabeledExample& example, int epoch, int interval,
                          Tape<T>* tape = nullptr);

/// Gloss cross-entropy (pre-training objective).
template <typename T>
Tensor<T> loss_gloss(const ModelParameters<T>& params, const SkeletonGraph& graph,
                     const LabeledExample& example, Tape<T>* tape = nullptr);

}  // namespace signphon

#endif  // SIGNPHON_LOSSES_HPP
