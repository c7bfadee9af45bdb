// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/losses.hpp"

#include <numeric>

#include "signphon/errors.hpp"
#include "signphon/ops.hpp"
#include "signphon/schedule.hpp"

namespace signphon {
namespace {

void require_valid_labels(const LabeledExample& example) {
  const auto check = validate_labels(build_taxonomy(), example.phonemes);
  if (!check.ok) {
    throw ValidationError("example '" + example.id + "': " + check.message);
  }
}

constexpr std::array<TypeId, kNumPhonemeTypes> kAllTypes = [] {
  std::array<TypeId, kNumPhonemeTypes> a{};
  std::iota(a.begin(), a.end(), 1);
  return a;
}();

}  // namespace

template <typename T>
Tensor<T> loss_over_types(const ModelParameters<T>& params,
                          const Tensor<T>& embedding,
                          const LabeledExample& example,
                          std::span<const TypeId> types, Tape<T>* tape,
                          std::span<double> per_type) {
  require_valid_labels(example);
  if (types.empty()) throw UsageError("loss over an empty set of types");
  Tensor<T> total;
  for (TypeId type : types) {
    const auto head = HeadId::phoneme(type);
    Tensor<T> probs = classify(params, embedding, head, tape);
    Tensor<T> term = ops::cross_entropy(example.phonemes[type - 1], probs, tape);
    if (!per_type.empty()) per_type[type - 1] = static_cast<double>(term.item());
    total = total.defined() ? ops::add(total, term, tape) : term;
  }
  return total;
}

template <typename T>
Tensor<T> loss_finetune(const ModelParameters<T>& params,
                        const SkeletonGraph& graph,
                        const LabeledExample& example, TypeId type,
                        Tape<T>* tape) {
  require_valid_labels(example);
  const TypeId types[] = {HeadId::phoneme(type).type()};
  const Tensor<T> z = encode(params, graph, example.pose, tape);
  return loss_over_types(params, z, example, std::span<const TypeId>(types), tape);
}

template <typename T>
Tensor<T> loss_prefix(const ModelParameters<T>& params,
                      const SkeletonGraph& graph, const LabeledExample& example,
                      int k, Tape<T>* tape) {
  if (k < 1 || k > static_cast<int>(kNumPhonemeTypes)) {
    throw RangeError("curriculum prefix length " + std::to_string(k) +
                     " outside [1, 16]");
  }
  require_valid_labels(example);
  const Tensor<T> z = encode(params, graph, example.pose, tape);
  return loss_over_types(params, z, example,
                         std::span<const TypeId>(kAllTypes).first(k), tape);
}

template <typename T>
Tensor<T> loss_multitask(const ModelParameters<T>& params,
                         const SkeletonGraph& graph,
                         const LabeledExample& example, Tape<T>* tape) {
  return loss_prefix(params, graph, example, kNumPhonemeTypes, tape);
}

template <typename T>
Tensor<T> loss_curriculum(const ModelParameters<T>& params,
                          const SkeletonGraph& graph,
                          const LabeledExample& example, int epoch, int interval,
                          Tape<T>* tape) {
  return loss_prefix(params, graph, example, active_type_count(epoch, interval),
                     tape);
}

template <typename T>
Tensor<T> loss_gloss(const ModelParameters<T>& params, const SkeletonGraph& graph,
                     const LabeledExample& example, Tape<T>* tape) {
  const int classes = static_cast<int>(params.config().gloss_classes);
  if (example.gloss < 1 || example.gloss > classes) {
    throw ValidationError("example '" + example.id + "': gloss " +
                          std::to_string(example.gloss) + " outside [1, " +
                          std::to_string(classes) + "]");
  }
  const Tensor<T> z = encode(params, graph, example.pose, tape);
  return ops::cross_entropy(example.gloss,
                            classify(params, z, HeadId::gloss(), tape), tape);
}

#define SIGNPHON_INSTANTIATE_LOSSES(T)                                          \
  template Tensor<T> loss_over_types(const ModelParameters<T>&,                 \
                                     const Tensor<T>&, const LabeledExample&,   \
                                     std::span<const TypeId>, Tape<T>*,         \
                                     std::span<double>);                        \
  template Tensor<T> loss_finetune(const ModelParameters<T>&,                   \
                                   const SkeletonGraph&, const LabeledExample&, \
                                   TypeId, Tape<T>*);                           \
  template Tensor<T> loss_prefix(const ModelParameters<T>&,                     \
                                 const SkeletonGraph&, const LabeledExample&,   \
                                 int, Tape<T>*);                                \
  template Tensor<T> loss_multitask(const ModelParameters<T>&,                  \
                                    const SkeletonGraph&,                       \
                                    const LabeledExample&, Tape<T>*);           \
  template Tensor<T> loss_curriculum(const ModelParameters<T>&,                 \
                                     const SkeletonGraph&,                      \
                                     const LabeledExample&, int, int, Tape<T>*); \
  template Tensor<T> loss_gloss(const ModelParameters<T>&, const SkeletonGraph&, \
                                const LabeledExample&, Tape<T>*);

SIGNPHON_INSTANTIATE_LOSSES(float)
SIGNPHON_INSTANTIATE_LOSSES(double)

#undef SIGNPHON_INSTANTIATE_LOSSES

}  // namespace signphon
