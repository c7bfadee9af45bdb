// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_TRAINER_HPP
#define SIGNPHON_TRAINER_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "signphon/model.hpp"
#include "signphon/skeleton_graph.hpp"
#include "signphon/split.hpp"
#include "signphon/taxonomy.hpp"

namespace signphon {

enum class Strategy { kFinetune, kMultitask, kCurriculum, kGloss };

std::string to_string(Strategy strategy);
/// Accepts "finetune", "multitask", "curriculum", "gloss" (ConfigError).
Strategy parse_strategy(std::string_view name);

struct TrainingPlan {
  Strategy strategy = Strategy::kMultitask;
  TypeId finetune_type = 1;  // used by kFinetune only
  int total_epochs = 48;
  int curriculum_interval = 3;
  int batch_size = 32;
  double lr_max = 1e-3;
  double lr_min = 1e-5;
  std::uint64_t seed = 42;
  std::optional<std::string> pretrained_checkpoint;

  static TrainingPlan finetune(TypeId type, int epochs);
  static TrainingPlan multitask(int epochs);
  static TrainingPlan curriculum(int interval);
  static TrainingPlan gloss(int epochs);

  /// Throws ConfigError (RangeError for a fine-tune type outside 1..16).
  void validate() const;

  /// Phoneme types in the objective at `epoch`; empty for kGloss.
  std::vector<TypeId> active_types(int epoch) const;

  friend bool operator==(const TrainingPlan&, const TrainingPlan&) = default;
};

std::string plan_to_json(const TrainingPlan& plan);
TrainingPlan plan_from_json(std::string_view json);

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  int active_types = 0;
  double mean_loss = 0.0;  // per example, averaged over the epoch
  std::array<std::optional<double>, kNumPhonemeTypes> type_loss{};
  std::array<std::optional<double>, kNumPhonemeTypes> validation_accuracy{};
  std::optional<double> gloss_loss;
  std::optional<double> validation_gloss_accuracy;
};

struct TrainingTrace {
  std::vector<EpochRecord> epochs;

  /// Columns: epoch,lr,k,loss, loss_<identifier> x16, val_acc_<identifier>
  /// x16, gloss_loss, val_gloss_acc. Absent values are left blank.
  std::string to_csv(const PhonemeTaxonomy& taxonomy) const;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Runs the epoch loop of `plan` on `split.train` (validation accuracy on
/// `split.validation` when non-empty) and returns the trained model.
/// Throws NumericError naming the epoch and batch on a non-finite loss and
/// DimensionError when the model geometry disagrees with the data.
ModelParameters<float> train(const ModelParameters<float>& model,
                             const SkeletonGraph& graph,
                             const DatasetSplit& split, const TrainingPlan& plan,
                             TrainingTrace* trace = nullptr,
                             const EpochCallback& on_epoch = {});

/// Gloss-only training of encoder and gloss head. The plan's strategy must
/// be kGloss. Throws ConfigError on an empty training set.
ModelParameters<float> pretrain_gloss(const ModelParameters<float>& model,
                                      const SkeletonGraph& graph,
                                      const DatasetSplit& split,
                                      const TrainingPlan& plan,
                                      TrainingTrace* trace = nullptr,
                                      const EpochCallback& on_epoch = {});

/// Mean loss over `examples` for `plan`'s objective at `epoch` (no update).
double mean_objective(const ModelParameters<float>& model,
                      const SkeletonGraph& graph,
                      std::span<const LabeledExample> examples,
                      const TrainingPlan& plan, int epoch = 0);

}  // namespace signphon

#endif  // SIGNPHON_TRAINER_HPP
