// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/evaluate.hpp"

#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

#include "signphon/errors.hpp"
#include "signphon/util.hpp"

namespace signphon {

bool EvaluationResult::complete() const {
  for (const auto& t : types) {
    if (!t) return false;
  }
  return true;
}

template <typename T>
int argmax_class(std::span<const T> scores) {
  if (scores.empty()) throw UsageError("argmax of an empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return static_cast<int>(best) + 1;
}

template <typename T>
EvaluationResult evaluate(const ModelParameters<T>& params,
                          const SkeletonGraph& graph,
                          std::span<const LabeledExample> examples,
                          std::span<const TypeId> types) {
  if (examples.empty()) throw UsageError("evaluate needs at least one example");
  std::vector<TypeId> selected(types.begin(), types.end());
  if (selected.empty()) {
    selected.resize(kNumPhonemeTypes);
    std::iota(selected.begin(), selected.end(), 1);
  }
  EvaluationResult result;
  for (TypeId id : selected) {
    HeadId::phoneme(id);  // range check
    result.types[id - 1] = TypeScore{};
  }
  for (const auto& ex : examples) {
    const Tensor<T> z = encode(params, graph, ex.pose);
    for (TypeId id : selected) {
      // Argmax over logits: softmax is monotone and exact ties stay ties.
      const Tensor<T> logits = head_logits(params, z, HeadId::phoneme(id));
      auto& score = *result.types[id - 1];
      ++score.total;
      if (argmax_class<T>(logits.values()) == ex.phonemes[id - 1]) ++score.correct;
    }
  }
  return result;
}

template <typename T>
TypeScore evaluate_gloss(const ModelParameters<T>& params,
                         const SkeletonGraph& graph,
                         std::span<const LabeledExample> examples) {
  if (examples.empty()) throw UsageError("evaluate needs at least one example");
  TypeScore score;
  for (const auto& ex : examples) {
    const Tensor<T> z = encode(params, graph, ex.pose);
    const Tensor<T> logits = head_logits(params, z, HeadId::gloss());
    ++score.total;
    if (argmax_class<T>(logits.values()) == ex.gloss) ++score.correct;
  }
  return score;
}

void merge_results(EvaluationResult& into, const EvaluationResult& from) {
  for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) {
    if (!from.types[i]) continue;
    if (into.types[i]) {
      throw ValidationError("type " + std::to_string(i + 1) +
                            " scored by more than one checkpoint");
    }
    into.types[i] = from.types[i];
  }
}

std::array<double, kNumPhonemeTypes> majority_baseline(
    std::span<const LabeledExample> examples) {
  std::array<double, kNumPhonemeTypes> out{};
  if (examples.empty()) return out;
  for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) {
    std::map<int, std::size_t> counts;
    std::size_t best = 0;
    for (const auto& ex : examples) best = std::max(best, ++counts[ex.phonemes[i]]);
    out[i] = 100.0 * static_cast<double>(best) / static_cast<double>(examples.size());
  }
  return out;
}

std::string evaluation_to_csv(const EvaluationResult& result,
                              const PhonemeTaxonomy& taxonomy) {
  std::string s = "type_id,type_name,correct,total,accuracy\n";
  for (const auto& t : taxonomy.types()) {
    const auto& score = result.types[t.id - 1];
    if (!score) continue;
    s += std::to_string(t.id) + "," + t.name + "," + std::to_string(score->correct) +
         "," + std::to_string(score->total) + "," + format_real(score->percent()) + "\n";
  }
  return s;
}

EvaluationResult evaluation_from_csv(std::string_view csv,
                                     const PhonemeTaxonomy& taxonomy) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("evaluation CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "type_id,type_name,correct,total,accuracy") {
    throw ValidationError("unexpected evaluation CSV header '" + line + "'");
  }
  EvaluationResult result;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) f.push_back(cell);
    const std::string where = "evaluation CSV line " + std::to_string(line_no);
    if (f.size() != 5) throw ValidationError(where + ": expected 5 fields");
    int id = 0;
    std::size_t correct = 0, total = 0;
    auto parse = [&](const std::string& s, auto& out) {
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      if (ec != std::errc() || p != s.data() + s.size()) {
        throw ValidationError(where + ": bad number '" + s + "'");
      }
    };
    parse(f[0], id);
    parse(f[2], correct);
    parse(f[3], total);
    if (id < 1 || id > static_cast<int>(kNumPhonemeTypes) ||
        taxonomy.type(id).name != f[1]) {
      throw ValidationError(where + ": unknown type '" + f[1] + "'");
    }
    if (correct > total || total == 0) {
      throw ValidationError(where + ": counts out of range");
    }
    result.types[id - 1] = TypeScore{correct, total};
  }
  return result;
}

#define SIGNPHON_INSTANTIATE_EVAL(T)                                         \
  template int argmax_class<T>(std::span<const T>);                          \
  template EvaluationResult evaluate(const ModelParameters<T>&,              \
                                     const SkeletonGraph&,                   \
                                     std::span<const LabeledExample>,        \
                                     std::span<const TypeId>);               \
  template TypeScore evaluate_gloss(const ModelParameters<T>&,               \
                                    const SkeletonGraph&,                    \
                                    std::span<const LabeledExample>);

SIGNPHON_INSTANTIATE_EVAL(float)
SIGNPHON_INSTANTIATE_EVAL(double)

#undef SIGNPHON_INSTANTIATE_EVAL

}  // namespace signphon
