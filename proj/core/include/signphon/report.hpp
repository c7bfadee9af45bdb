// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_REPORT_HPP
#define SIGNPHON_REPORT_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signphon/evaluate.hpp"
#include "signphon/taxonomy.hpp"

namespace signphon {

/// Per-type top-1 accuracy in percent for one learning method.
struct MethodResult {
  std::string name;
  std::array<std::optional<double>, kNumPhonemeTypes> accuracy{};
};

MethodResult method_from_evaluation(std::string name,
                                    const EvaluationResult& result);

struct Report {
  std::vector<std::string> methods;
  /// cells[type - 1][method]
  std::array<std::vector<double>, kNumPhonemeTypes> cells{};
  std::vector<double> method_average;
  std::array<double, kNumPhonemeTypes> type_average{};
  double overall = 0.0;
  /// Published per-type values for the three learning methods, shown next
  /// to measured results when requested.
  std::vector<MethodResult> reference;
};

/// Throws ValidationError when a method lacks a type or a value falls
/// outside [0, 100], and UsageError for an empty method list.
Report build_report(std::span<const MethodResult> methods,
                    const PhonemeTaxonomy& taxonomy);

/// Fine-Tune, Multitask and Curriculum columns of the published results
/// table, keyed to the taxonomy by type name.
std::vector<MethodResult> published_results(const PhonemeTaxonomy& taxonomy);

/// Fixed-width table, one decimal place, 16 rows in taxonomy order plus a
/// "Method Average" row and a "Type Average" column.
std::string render_report_text(const Report& report,
                               const PhonemeTaxonomy& taxonomy);
/// Same layout as CSV with round-trip precision.
std::string render_report_csv(const Report& report,
                              const PhonemeTaxonomy& taxonomy);

}  // namespace signphon

#endif  // SIGNPHON_REPORT_HPP
