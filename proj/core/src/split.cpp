// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "signphon/errors.hpp"
#include "signphon/rng.hpp"

namespace signphon {
namespace {

void validate(const SplitProportions& p) {
  for (double v : {p.train, p.validation, p.test}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ConfigError("split proportions must be finite and non-negative");
    }
  }
  if (std::abs(p.train + p.validation + p.test - 1.0) > 1e-9) {
    throw ConfigError("split proportions must sum to 1");
  }
}

std::size_t portion(double p, std::size_t n) {
  // The epsilon absorbs representation error in p (e.g. 250/2750).
  return static_cast<std::size_t>(std::floor(p * static_cast<double>(n) + 1e-9));
}

}  // namespace

SplitProportions SplitProportions::from_weights(double train, double validation,
                                                double test) {
  const double total = train + validation + test;
  if (!(total > 0.0) || train < 0 || validation < 0 || test < 0) {
    throw ConfigError("split weights must be non-negative with a positive sum");
  }
  return {train / total, validation / total, test / total};
}

SplitIndices split_sizes_only(std::size_t n, const SplitProportions& p) {
  validate(p);
  SplitIndices s;
  const std::size_t n_val = std::min(n, portion(p.validation, n));
  const std::size_t n_test = std::min(n - n_val, portion(p.test, n));
  s.validation.resize(n_val);
  s.test.resize(n_test);
  s.train.resize(n - n_val - n_test);
  return s;
}

SplitIndices split_indices(std::span<const LabeledExample> examples,
                           const SplitProportions& proportions,
                           std::uint64_t seed) {
  SplitIndices sizes = split_sizes_only(examples.size(), proportions);

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return examples[a].id < examples[b].id;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (examples[order[i]].id == examples[order[i - 1]].id) {
      throw ConfigError("duplicate example id '" + examples[order[i]].id + "'");
    }
  }
  Rng rng(seed);
  rng.shuffle(std::span(order));

  std::map<int, std::vector<std::size_t>> by_gloss;
  for (std::size_t idx : order) by_gloss[examples[idx].gloss].push_back(idx);
  std::vector<std::size_t> dealt;
  dealt.reserve(order.size());
  for (std::size_t round = 0; dealt.size() < order.size(); ++round) {
    for (const auto& [gloss, members] : by_gloss) {
      if (round < members.size()) dealt.push_back(members[round]);
    }
  }

  SplitIndices out;
  auto take = [&](std::vector<std::size_t>& dst, std::size_t begin, std::size_t n) {
    dst.assign(dealt.begin() + static_cast<std::ptrdiff_t>(begin),
               dealt.begin() + static_cast<std::ptrdiff_t>(begin + n));
    std::sort(dst.begin(), dst.end(), [&](std::size_t a, std::size_t b) {
      return examples[a].id < examples[b].id;
    });
  };
  take(out.validation, 0, sizes.validation.size());
  take(out.test, sizes.validation.size(), sizes.test.size());
  take(out.train, sizes.validation.size() + sizes.test.size(), sizes.train.size());
  return out;
}

DatasetSplit split(std::span<const LabeledExample> examples,
                   const SplitProportions& proportions, std::uint64_t seed) {
  const auto idx = split_indices(examples, proportions, seed);
  DatasetSplit s;
  s.seed = seed;
  for (auto i : idx.train) s.train.push_back(examples[i]);
  for (auto i : idx.validation) s.validation.push_back(examples[i]);
  for (auto i : idx.test) s.test.push_back(examples[i]);
  return s;
}

}  // namespace signphon
