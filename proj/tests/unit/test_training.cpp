// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "fixtures.hpp"
#include "signphon/checkpoint.hpp"
#include "signphon/errors.hpp"
#include "signphon/evaluate.hpp"
#include "signphon/losses.hpp"
#include "signphon/schedule.hpp"
#include "signphon/skeleton_graph.hpp"
#include "signphon/split.hpp"
#include "signphon/synthesis.hpp"
#include "signphon/trainer.hpp"

using namespace signphon;
using namespace signphon::testing;
using doctest::Approx;

namespace {

// Class counts per type in curriculum order, typed in by hand.
constexpr int kCardinalities[16] = {5, 37, 37, 2, 3, 6, 2, 8, 2, 3, 8, 2, 8, 3, 56, 58};

DatasetSplit tiny_split(std::size_t n = 64, std::size_t glosses = 4) {
  const auto& tax = build_taxonomy();
  auto spec = default_synthesis_spec(tax, 21);
  spec.example_count = n;
  spec.gloss_count = glosses;
  const auto corpus = synthesize(spec, SkeletonGraph::upper_body_27(), tax);
  return split(corpus, SplitProportions::from_weights(6, 1, 1), 3);
}

bool same_parameters(const ModelParameters<float>& a, const ModelParameters<float>& b) {
  const auto ta = a.tensors(), tb = b.tensors();
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (!std::equal(ta[i].values().begin(), ta[i].values().end(), tb[i].values().begin(),
                    tb[i].values().end())) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("zero heads give uniform-prediction losses") {
  const auto& tax = build_taxonomy();
  const auto g = SkeletonGraph::upper_body_27();
  const auto p = ModelParameters<double>::initialize(toy_config(), tax, 4, {.zero_heads = true});
  const auto ex = random_example(12);

  double expected = 0.0;
  for (int k : kCardinalities) expected += std::log(static_cast<double>(k));
  CHECK(expected == Approx(31.015578121515787).epsilon(1e-15));

  CHECK(loss_finetune(p, g, ex, PhonemeTaxonomy::kMajorLocation).item() ==
        Approx(std::log(5.0)).epsilon(1e-12));
  CHECK(loss_multitask(p, g, ex).item() == Approx(expected).epsilon(1e-12));
  CHECK(loss_prefix(p, g, ex, 2).item() == Approx(std::log(5.0) + std::log(37.0)).epsilon(1e-12));
  CHECK(loss_curriculum(p, g, ex, 3, 3).item() ==
        Approx(std::log(5.0) + std::log(37.0)).epsilon(1e-12));
}

TEST_CASE("strategy losses decompose exactly") {
  const auto& tax = build_taxonomy();
  const auto g = SkeletonGraph::upper_body_27();
  const auto p = ModelParameters<double>::initialize(toy_config(), tax, 8);
  for (std::uint64_t s : {1u, 2u, 3u}) {
    const auto ex = random_example(s);
    double sum = 0.0;
    bool first = true;
    for (TypeId t = 1; t <= 16; ++t) {
      const double term = loss_finetune(p, g, ex, t).item();
      sum = first ? term : sum + term;
      first = false;
    }
    const double multi = loss_multitask(p, g, ex).item();
    CHECK(multi == sum);
    CHECK(loss_curriculum(p, g, ex, 0, 3).item() ==
          loss_finetune(p, g, ex, PhonemeTaxonomy::kMajorLocation).item());
    CHECK(loss_curriculum(p, g, ex, 45, 3).item() == multi);
    CHECK(loss_curriculum(p, g, ex, 1000, 3).item() == multi);
  }
  auto bad = random_example(1);
  bad.phonemes[15] = 59;
  CHECK_THROWS_AS(loss_multitask(p, g, bad), ValidationError);
  CHECK_THROWS_AS(loss_finetune(p, g, random_example(1), 0), RangeError);
}

TEST_CASE("curriculum schedule") {
  CHECK(active_type_count(0, 20) == 1);
  CHECK(active_type_count(19, 20) == 1);
  CHECK(active_type_count(20, 20) == 2);
  CHECK(active_type_count(300, 20) == 16);
  CHECK(active_type_count(319, 20) == 16);
  CHECK_THROWS_AS(active_type_count(-1, 20), RangeError);
  CHECK_THROWS_AS(active_type_count(0, 0), RangeError);

  const auto plan = TrainingPlan::curriculum(20);
  CHECK(plan.total_epochs == 320);
  int previous = 0;
  for (int epoch = 0; epoch < plan.total_epochs; ++epoch) {
    const auto active = plan.active_types(epoch);
    CHECK(static_cast<int>(active.size()) >= previous);
    previous = static_cast<int>(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) CHECK(active[i] == static_cast<TypeId>(i + 1));
    if (epoch >= plan.total_epochs - 20) CHECK(active.size() == 16);
  }
  CHECK(TrainingPlan::finetune(7, 3).active_types(0) == std::vector<TypeId>{7});
  CHECK(TrainingPlan::multitask(3).active_types(0).size() == 16);
  CHECK(TrainingPlan::gloss(3).active_types(0).empty());
}

TEST_CASE("cosine learning rate") {
  CHECK(cosine_lr(0, 11, 1e-3, 1e-5) == Approx(1e-3));
  CHECK(cosine_lr(10, 11, 1e-3, 1e-5) == Approx(1e-5));
  CHECK(cosine_lr(5, 11, 1e-3, 1e-5) == Approx((1e-3 + 1e-5) / 2));
  CHECK(cosine_lr(0, 1, 1e-3, 1e-5) == 1e-3);
  for (int e = 1; e < 11; ++e) CHECK(cosine_lr(e, 11, 1e-3, 1e-5) < cosine_lr(e - 1, 11, 1e-3, 1e-5));
  CHECK_THROWS_AS(cosine_lr(11, 11, 1e-3, 1e-5), RangeError);
}

TEST_CASE("plan validation and serialization") {
  auto plan = TrainingPlan::curriculum(2);
  plan.pretrained_checkpoint = "pre.ckpt";
  CHECK(plan_from_json(plan_to_json(plan)) == plan);
  CHECK(parse_strategy("curriculum") == Strategy::kCurriculum);
  CHECK(to_string(Strategy::kFinetune) == "finetune");
  CHECK_THROWS_AS(parse_strategy("mixed"), ConfigError);

  auto bad = plan;
  bad.total_epochs = 31;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = TrainingPlan::multitask(3);
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = TrainingPlan::multitask(3);
  bad.lr_min = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(TrainingPlan::finetune(17, 3).validate(), RangeError);
}

TEST_CASE("zero epochs leaves the model unchanged") {
  const auto& tax = build_taxonomy();
  const auto g = SkeletonGraph::upper_body_27();
  const auto m = ModelParameters<float>::initialize(toy_config(4), tax, 1);
  auto plan = TrainingPlan::multitask(0);
  TrainingTrace trace;
  const auto out = train(m, g, tiny_split(), plan, &trace);
  CHECK(same_parameters(out, m));
  CHECK(trace.epochs.empty());
  CHECK_FALSE(out.blocks()[0].spatial.shares_storage_with(m.blocks()[0].spatial));

  DatasetSplit empty;
  plan.total_epochs = 1;
  CHECK_THROWS_AS(train(m, g, empty, plan), ConfigError);
  CHECK_THROWS_AS(pretrain_gloss(m, g, empty, TrainingPlan::gloss(1)), ConfigError);
  CHECK_THROWS_AS(pretrain_gloss(m, g, tiny_split(), plan), ConfigError);
  CHECK_THROWS_AS(train(m, SkeletonGraph::preset("path_2"), tiny_split(), plan), DimensionError);
}

TEST_CASE("curriculum run records the schedule and is reproducible") {
  const auto& tax = build_taxonomy();
  const auto g = SkeletonGraph::upper_body_27();
  const auto m = ModelParameters<float>::initialize(toy_config(4), tax, 2);
  const auto data = tiny_split(48, 4);
  const auto plan = TrainingPlan::curriculum(1);

  int callbacks = 0;
  TrainingTrace a, b;
  const auto ma = train(m, g, data, plan, &a, [&](const EpochRecord&) { ++callbacks; });
  const auto mb = train(m, g, data, plan, &b);
  CHECK(callbacks == 16);
  REQUIRE(a.epochs.size() == 16);
  for (int e = 0; e < 16; ++e) {
    const auto& r = a.epochs[e];
    CHECK(r.epoch == e);
    CHECK(r.active_types == e + 1);
    CHECK(r.lr == cosine_lr(e, 16, plan.lr_max, plan.lr_min));
    CHECK(r.type_loss[e].has_value());
    if (e < 15) CHECK_FALSE(r.type_loss[e + 1].has_value());
    CHECK(r.validation_accuracy[e].has_value());
    CHECK(std::isfinite(r.mean_loss));
  }
  CHECK(same_parameters(ma, mb));
  CHECK_FALSE(same_parameters(ma, m));
  CHECK(a.to_csv(tax) == b.to_csv(tax));

  const std::string csv = a.to_csv(tax);
  CHECK(csv.starts_with("epoch,lr,k,loss,loss_major_location,"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
}

TEST_CASE("non-finite loss aborts with a diagnostic") {
  const auto& tax = build_taxonomy();
  const auto g = SkeletonGraph::upper_body_27();
  auto m = ModelParameters<float>::initialize(toy_config(4), tax, 2);
  m.head(HeadId::phoneme(1)).bias.values()[0] = std::numeric_limits<float>::quiet_NaN();
  try {
    train(m, g, tiny_split(), TrainingPlan::multitask(2));
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    INFO(std::string(e.what()));
    CHECK(std::string(e.what()).find("epoch 0, batch 0") != std::string::npos);
  }
}

TEST_CASE("gloss pretraining") {
  const auto& tax = build_taxonomy();
  const auto g = SkeletonGraph::upper_body_27();
  const auto m = ModelParameters<float>::initialize(toy_config(4), tax, 5);
  const auto data = tiny_split(96, 4);
  auto plan = TrainingPlan::gloss(1);
  plan.lr_max = 3e-3;
  TrainingTrace trace;
  const double before = mean_objective(m, g, data.train, plan);
  const auto out = pretrain_gloss(m, g, data, plan, &trace);
  const double after = mean_objective(out, g, data.train, plan);
  CHECK(after < before);
  REQUIRE(trace.epochs.size() == 1);
  CHECK(trace.epochs[0].gloss_loss.has_value());
  CHECK(trace.epochs[0].validation_gloss_accuracy.has_value());
  CHECK(trace.epochs[0].active_types == 0);

  // Phoneme heads are untouched by gloss-only training.
  for (TypeId t = 1; t <= 16; ++t) {
    const auto& h0 = m.head(HeadId::phoneme(t)).weight.values();
    const auto& h1 = out.head(HeadId::phoneme(t)).weight.values();
    CHECK(std::equal(h0.begin(), h0.end(), h1.begin()));
  }

  const auto reloaded = deserialize_checkpoint(serialize_checkpoint(out, tax), tax).params;
  const auto s0 = evaluate_gloss(out, g, data.validation);
  const auto s1 = evaluate_gloss(reloaded, g, data.validation);
  CHECK(s0.correct == s1.correct);
  CHECK(s0.total == s1.total);
}
