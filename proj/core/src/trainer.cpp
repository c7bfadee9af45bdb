// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/trainer.hpp"

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "signphon/adam.hpp"
#include "signphon/errors.hpp"
#include "signphon/evaluate.hpp"
#include "signphon/losses.hpp"
#include "signphon/ops.hpp"
#include "signphon/rng.hpp"
#include "signphon/schedule.hpp"
#include "signphon/util.hpp"

namespace signphon {
namespace {

using json = nlohmann::ordered_json;


void check_geometry(const ModelConfig& config,
                    std::span<const LabeledExample> examples) {
  for (const auto& ex : examples) {
    if (ex.pose.frames != config.encoder.frames ||
        ex.pose.joints != config.encoder.joints) {
      throw DimensionError("example '" + ex.id + "' has " +
                           std::to_string(ex.pose.frames) + " frames x " +
                           std::to_string(ex.pose.joints) +
                           " joints; the model expects " +
                           std::to_string(config.encoder.frames) + " x " +
                           std::to_string(config.encoder.joints));
    }
  }
}

struct ExampleLoss {
  Tensor<float> loss;
  double gloss = 0.0;
};

ExampleLoss example_objective(const ModelParameters<float>& params,
                              const SkeletonGraph& graph,
                              const LabeledExample& example,
                              const TrainingPlan& plan,
                              std::span<const TypeId> active,
                              std::span<double> per_type, Tape<float>* tape) {
  ExampleLoss out;
  if (plan.strategy == Strategy::kGloss) {
    out.loss = loss_gloss(params, graph, example, tape);
    out.gloss = out.loss.item();
  } else {
    const Tensor<float> z = encode(params, graph, example.pose, tape);
    out.loss = loss_over_types(params, z, example, active, tape, per_type);
  }
  return out;
}

}  // namespace

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kFinetune: return "finetune";
    case Strategy::kMultitask: return "multitask";
    case Strategy::kCurriculum: return "curriculum";
    case Strategy::kGloss: return "gloss";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : {Strategy::kFinetune, Strategy::kMultitask,
                 Strategy::kCurriculum, Strategy::kGloss}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

TrainingPlan TrainingPlan::finetune(TypeId type, int epochs) {
  TrainingPlan p;
  p.strategy = Strategy::kFinetune;
  p.finetune_type = type;
  p.total_epochs = epochs;
  return p;
}

TrainingPlan TrainingPlan::multitask(int epochs) {
  TrainingPlan p;
  p.strategy = Strategy::kMultitask;
  p.total_epochs = epochs;
  return p;
}

TrainingPlan TrainingPlan::curriculum(int interval) {
  TrainingPlan p;
  p.strategy = Strategy::kCurriculum;
  p.curriculum_interval = interval;
  p.total_epochs = static_cast<int>(kNumPhonemeTypes) * interval;
  return p;
}

TrainingPlan TrainingPlan::gloss(int epochs) {
  TrainingPlan p;
  p.strategy = Strategy::kGloss;
  p.total_epochs = epochs;
  return p;
}

void TrainingPlan::validate() const {
  if (total_epochs < 0) throw ConfigError("total_epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(lr_min < lr_max) || !(lr_min >= 0.0)) {
    throw ConfigError("learning rates need 0 <= lr_min < lr_max, got " +
                      format_real(lr_min) + " and " + format_real(lr_max));
  }
  if (strategy == Strategy::kFinetune) HeadId::phoneme(finetune_type);
  if (strategy == Strategy::kCurriculum) {
    if (curriculum_interval < 1) throw ConfigError("curriculum interval must be >= 1");
    if (total_epochs != static_cast<int>(kNumPhonemeTypes) * curriculum_interval) {
      throw ConfigError("curriculum needs total_epochs = 16 * e = " +
                        std::to_string(16 * curriculum_interval) + ", got " +
                        std::to_string(total_epochs));
    }
  }
}

std::vector<TypeId> TrainingPlan::active_types(int epoch) const {
  std::vector<TypeId> types;
  switch (strategy) {
    case Strategy::kGloss:
      break;
    case Strategy::kFinetune:
      types.push_back(finetune_type);
      break;
    case Strategy::kMultitask:
      types.resize(kNumPhonemeTypes);
      std::iota(types.begin(), types.end(), 1);
      break;
    case Strategy::kCurriculum:
      types.resize(static_cast<std::size_t>(
          active_type_count(epoch, curriculum_interval)));
      std::iota(types.begin(), types.end(), 1);
      break;
  }
  return types;
}

std::string plan_to_json(const TrainingPlan& plan) {
  json j;
  j["strategy"] = to_string(plan.strategy);
  if (plan.strategy == Strategy::kFinetune) j["finetune_type"] = plan.finetune_type;
  j["total_epochs"] = plan.total_epochs;
  j["curriculum_interval"] = plan.curriculum_interval;
  j["batch_size"] = plan.batch_size;
  j["lr_max"] = plan.lr_max;
  j["lr_min"] = plan.lr_min;
  j["seed"] = plan.seed;
  j["pretrained_checkpoint"] =
      plan.pretrained_checkpoint ? json(*plan.pretrained_checkpoint) : json(nullptr);
  return j.dump(2);
}

TrainingPlan plan_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    TrainingPlan p;
    p.strategy = parse_strategy(j.at("strategy").get<std::string>());
    if (j.contains("finetune_type")) p.finetune_type = j["finetune_type"].get<int>();
    p.total_epochs = j.at("total_epochs").get<int>();
    p.curriculum_interval = j.at("curriculum_interval").get<int>();
    p.batch_size = j.at("batch_size").get<int>();
    p.lr_max = j.at("lr_max").get<double>();
    p.lr_min = j.at("lr_min").get<double>();
    p.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("pretrained_checkpoint") && !j["pretrained_checkpoint"].is_null()) {
      p.pretrained_checkpoint = j["pretrained_checkpoint"].get<std::string>();
    }
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("training plan: ") + e.what());
  }
}

std::string TrainingTrace::to_csv(const PhonemeTaxonomy& taxonomy) const {
  std::string s = "epoch,lr,k,loss";
  for (const auto& t : taxonomy.types()) s += ",loss_" + t.identifier;
  for (const auto& t : taxonomy.types()) s += ",val_acc_" + t.identifier;
  s += ",gloss_loss,val_gloss_acc\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
  };
  for (const auto& r : epochs) {
    s += std::to_string(r.epoch) + "," + format_real(r.lr) + "," +
         std::to_string(r.active_types) + "," + format_real(r.mean_loss);
    for (const auto& v : r.type_loss) s += "," + opt(v);
    for (const auto& v : r.validation_accuracy) s += "," + opt(v);
    s += "," + opt(r.gloss_loss) + "," + opt(r.validation_gloss_accuracy) + "\n";
  }
  return s;
}

ModelParameters<float> train(const ModelParameters<float>& model,
                             const SkeletonGraph& graph,
                             const DatasetSplit& split, const TrainingPlan& plan,
                             TrainingTrace* trace, const EpochCallback& on_epoch) {
  plan.validate();
  if (graph.joints() != model.config().encoder.joints) {
    throw DimensionError("graph has " + std::to_string(graph.joints()) +
                         " joints; the model expects " +
                         std::to_string(model.config().encoder.joints));
  }
  check_geometry(model.config(), split.train);
  check_geometry(model.config(), split.validation);

  ModelParameters<float> params = model.clone();
  if (trace) trace->epochs.clear();
  if (plan.total_epochs == 0) return params;
  if (split.train.empty()) throw ConfigError("training set is empty");

  Adam<float> adam;
  std::vector<Tensor<float>> tensors = params.tensors();
  const std::size_t n = split.train.size();
  const std::size_t batch = static_cast<std::size_t>(plan.batch_size);
  std::vector<std::size_t> order(n);

  for (int epoch = 0; epoch < plan.total_epochs; ++epoch) {
    const double lr = cosine_lr(epoch, plan.total_epochs, plan.lr_max, plan.lr_min);
    const std::vector<TypeId> active = plan.active_types(epoch);

    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(epoch) + 1));
    rng.shuffle(std::span<std::size_t>(order));

    EpochRecord record;
    record.epoch = epoch;
    record.lr = lr;
    record.active_types = static_cast<int>(active.size());
    std::array<double, kNumPhonemeTypes> type_sum{};
    double loss_sum = 0.0;
    double gloss_sum = 0.0;
    std::array<double, kNumPhonemeTypes> per_type{};

    for (std::size_t start = 0, b = 0; start < n; start += batch, ++b) {
      const std::size_t end = std::min(n, start + batch);
      Tape<float> tape;
      params.zero_grad();
      Tensor<float> total;
      try {
        for (std::size_t i = start; i < end; ++i) {
          const auto& ex = split.train[order[i]];
          per_type.fill(0.0);
          ExampleLoss l = example_objective(params, graph, ex, plan, active,
                                            per_type, &tape);
          for (TypeId t : active) type_sum[t - 1] += per_type[t - 1];
          gloss_sum += l.gloss;
          total = total.defined() ? ops::add(total, l.loss, &tape) : l.loss;
        }
      } catch (const NumericError& e) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(b) + ": " + e.what());
      }
      Tensor<float> loss =
          ops::scale(total, 1.0f / static_cast<float>(end - start), &tape);
      const double value = loss.item();
      if (!std::isfinite(value)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(b));
      }
      loss_sum += static_cast<double>(total.item());
      tape.backward(loss);
      adam.step(std::span<Tensor<float>>(tensors), lr);
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    record.mean_loss = loss_sum * inv_n;
    for (TypeId t : active) record.type_loss[t - 1] = type_sum[t - 1] * inv_n;
    if (plan.strategy == Strategy::kGloss) record.gloss_loss = gloss_sum * inv_n;

    if (!split.validation.empty()) {
      if (plan.strategy == Strategy::kGloss) {
        record.validation_gloss_accuracy =
            evaluate_gloss(params, graph, split.validation).percent();
      } else {
        const auto scores = evaluate(params, graph, split.validation, active);
        for (TypeId t : active) {
          record.validation_accuracy[t - 1] = scores.types[t - 1]->percent();
        }
      }
    }
    if (on_epoch) on_epoch(record);
    if (trace) trace->epochs.push_back(std::move(record));
  }
  return params;
}

ModelParameters<float> pretrain_gloss(const ModelParameters<float>& model,
                                      const SkeletonGraph& graph,
                                      const DatasetSplit& split,
                                      const TrainingPlan& plan,
                                      TrainingTrace* trace,
                                      const EpochCallback& on_epoch) {
  if (plan.strategy != Strategy::kGloss) {
    throw ConfigError("gloss pre-training needs the gloss strategy, got " +
                      to_string(plan.strategy));
  }
  if (split.train.empty()) throw ConfigError("gloss pre-training on an empty dataset");
  return train(model, graph, split, plan, trace, on_epoch);
}

double mean_objective(const ModelParameters<float>& model,
                      const SkeletonGraph& graph,
                      std::span<const LabeledExample> examples,
                      const TrainingPlan& plan, int epoch) {
  if (examples.empty()) throw UsageError("mean objective over no examples");
  const std::vector<TypeId> active = plan.active_types(epoch);
  double sum = 0.0;
  for (const auto& ex : examples) {
    sum += example_objective(model, graph, ex, plan, active, {}, nullptr).loss.item();
  }
  return sum / static_cast<double>(examples.size());
}

}  // namespace signphon
