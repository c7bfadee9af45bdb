// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_SPLIT_HPP
#define SIGNPHON_SPLIT_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "signphon/pose.hpp"

namespace signphon {

struct SplitProportions {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;

  /// Normalizes non-negative weights, e.g. {2000, 250, 500}.
  static SplitProportions from_weights(double train, double validation,
                                       double test);
};

struct DatasetSplit {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> validation;
  std::vector<LabeledExample> test;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

/// Partition sizes for n examples: validation = floor(p_val * n), then
/// test = floor(p_test * n), train takes the remainder.
SplitIndices split_sizes_only(std::size_t n, const SplitProportions& p);

/// Seeded, gloss-stratified partition. Examples are ordered by id,
/// shuffled, grouped by gloss and dealt round-robin across glosses; the
/// first block becomes validation, the next test, the rest train. Each
/// part is returned in id order. Throws ConfigError unless the proportions
/// are non-negative and sum to 1.
SplitIndices split_indices(std::span<const LabeledExample> examples,
                           const SplitProportions& proportions,
                           std::uint64_t seed);

DatasetSplit split(std::span<const LabeledExample> examples,
                   const SplitProportions& proportions, std::uint64_t seed);

}  // namespace signphon

#endif  // SIGNPHON_SPLIT_HPP
