// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_EVALUATE_HPP
#define SIGNPHON_EVALUATE_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "signphon/model.hpp"
#include "signphon/pose.hpp"
#include "signphon/skeleton_graph.hpp"
#include "signphon/taxonomy.hpp"

namespace signphon {

struct TypeScore {
  std::size_t correct = 0;
  std::size_t total = 0;

  double fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
  double percent() const { return 100.0 * fraction(); }

  friend bool operator==(const TypeScore&, const TypeScore&) = default;
};

/// Top-1 scores per phoneme type; a type is absent when it was not scored
/// (e.g. a single fine-tuned checkpoint covers one type).
struct EvaluationResult {
  std::array<std::optional<TypeScore>, kNumPhonemeTypes> types{};

  bool complete() const;
  friend bool operator==(const EvaluationResult&, const EvaluationResult&) = default;
};

/// 1-based index of the largest value; ties go to the lowest index.
template <typename T>
int argmax_class(std::span<const T> scores);

/// Top-1 accuracy of each requested head (all 16 when `types` is empty).
/// Throws UsageError on an empty example list.
template <typename T>
EvaluationResult evaluate(const ModelParameters<T>& params,
                          const SkeletonGraph& graph,
                          std::span<const LabeledExample> examples,
                          std::span<const TypeId> types = {});

template <typename T>
TypeScore evaluate_gloss(const ModelParameters<T>& params,
                         const SkeletonGraph& graph,
                         std::span<const LabeledExample> examples);

/// Fills rows absent from `into` with rows of `from`. Throws
/// ValidationError when both hold a row for the same type.
void merge_results(EvaluationResult& into, const EvaluationResult& from);

/// Accuracy (percent) of always predicting each type's most frequent
/// label in `examples`.
std::array<double, kNumPhonemeTypes> majority_baseline(
    std::span<const LabeledExample> examples);

/// CSV with header "type_id,type_name,correct,total,accuracy"; one row per
/// scored type; accuracy in percent with round-trip precision.
std::string evaluation_to_csv(const EvaluationResult& result,
                              const PhonemeTaxonomy& taxonomy);
/// Throws ValidationError on malformed rows.
EvaluationResult evaluation_from_csv(std::string_view csv,
                                     const PhonemeTaxonomy& taxonomy);

}  // namespace signphon

#endif  // SIGNPHON_EVALUATE_HPP
