// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "signphon/checkpoint.hpp"
#include "signphon/dataset_io.hpp"
#include "signphon/errors.hpp"
#include "signphon/evaluate.hpp"
#include "signphon/report.hpp"
#include "signphon/split.hpp"
#include "signphon/synthesis.hpp"
#include "signphon/trainer.hpp"
#include "signphon/util.hpp"

namespace signphon {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kManifestName = "manifest.json";
constexpr const char* kCorpusFormat = "signphon-corpus";

std::string hash_text(std::string_view text) { return to_hex(fnv1a64(text)); }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Corpus on disk

struct Corpus {
  json manifest;
  std::string manifest_hash;
  std::size_t gloss_count = 0;
  std::size_t frames = 0;
  DatasetSplit split;
};

Corpus load_corpus(const fs::path& dir, const PhonemeTaxonomy& taxonomy) {
  Corpus c;
  const std::string text = read_text_file(dir / kManifestName);
  c.manifest_hash = hash_text(text);
  try {
    c.manifest = json::parse(text);
    if (c.manifest.at("format").get<std::string>() != kCorpusFormat) {
      throw ValidationError("'" + (dir / kManifestName).string() +
                            "' is not a signphon corpus manifest");
    }
    const auto hash = c.manifest.at("taxonomy_hash").get<std::string>();
    if (hash != taxonomy.hash()) {
      throw ValidationError("corpus taxonomy hash " + hash +
                            " does not match this build (" + taxonomy.hash() + ")");
    }
    c.gloss_count = c.manifest.at("gloss_count").get<std::size_t>();
    c.frames = c.manifest.at("frames").get<std::size_t>();
    const auto& s = c.manifest.at("split");
    const auto& w = s.at("weights");
    const auto proportions = SplitProportions::from_weights(
        w.at("train").get<double>(), w.at("validation").get<double>(),
        w.at("test").get<double>());
    const auto examples =
        load_dataset(dir / c.manifest.at("poses").get<std::string>(),
                     dir / c.manifest.at("labels").get<std::string>(), taxonomy,
                     c.frames);
    c.split = split(examples, proportions, s.at("seed").get<std::uint64_t>());
  } catch (const json::exception& e) {
    throw ValidationError("corpus manifest: " + std::string(e.what()));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Options shared by the training commands

struct ModelFlags {
  std::vector<std::size_t> channels{16, 32};
  std::size_t kernel = 5;
  std::size_t embedding = 64;
  std::string graph = "upper_body_27";

  void bind(CLI::App* app) {
    app->add_option("--channels", channels, "Encoder block widths")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--kernel", kernel, "Temporal kernel size (odd)")
        ->capture_default_str();
    app->add_option("--embedding", embedding, "Embedding width")
        ->capture_default_str();
    app->add_option("--graph", graph, "Skeleton graph preset")
        ->capture_default_str();
  }

  ModelConfig config(const Corpus& corpus) const {
    ModelConfig m;
    m.encoder.channels = channels;
    m.encoder.temporal_kernel = kernel;
    m.encoder.embedding_dim = embedding;
    m.encoder.frames = corpus.frames;
    m.encoder.joints = SkeletonGraph::preset(graph).joints();
    m.gloss_classes = corpus.gloss_count;
    m.graph = graph;
    m.validate();
    return m;
  }
};

struct RunFlags {
  std::string data;
  std::string out;
  int epochs = 20;
  int batch_size = 32;
  double lr_max = 1e-3;
  double lr_min = 1e-5;
  std::uint64_t seed = 42;
  bool quiet = false;
  ModelFlags model;

  void bind(CLI::App* app, bool with_epochs = true) {
    app->add_option("--data", data, "Corpus directory (from gen-data)")->required();
    app->add_option("--out", out, "Output directory")->required();
    if (with_epochs) {
      app->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
    }
    app->add_option("--batch-size", batch_size, "Minibatch size")->capture_default_str();
    app->add_option("--lr-max", lr_max, "Peak learning rate")->capture_default_str();
    app->add_option("--lr-min", lr_min, "Final learning rate")->capture_default_str();
    app->add_option("--seed", seed, "Initialization and shuffle seed")
        ->capture_default_str();
    app->add_flag("--quiet", quiet, "Suppress per-epoch progress");
    model.bind(app);
  }

  void apply(TrainingPlan& plan) const {
    plan.batch_size = batch_size;
    plan.lr_max = lr_max;
    plan.lr_min = lr_min;
    plan.seed = seed;
  }
};

EpochCallback progress(std::ostream& out, bool quiet, const std::string& label,
                       int total) {
  if (quiet) return {};
  return [&out, label, total](const EpochRecord& r) {
    out << label << " epoch " << (r.epoch + 1) << "/" << total
        << " lr=" << fixed(r.lr, 6) << " k=" << r.active_types
        << " loss=" << fixed(r.mean_loss, 4);
    if (r.validation_gloss_accuracy) {
      out << " val_gloss=" << fixed(*r.validation_gloss_accuracy, 1);
    }
    double sum = 0.0;
    int n = 0;
    for (const auto& a : r.validation_accuracy) {
      if (a) {
        sum += *a;
        ++n;
      }
    }
    if (n > 0) out << " val_mean=" << fixed(sum / n, 1);
    out << "\n" << std::flush;
  };
}

std::string join_types(const std::vector<TypeId>& types) {
  std::string s;
  for (TypeId t : types) s += (s.empty() ? "" : ",") + std::to_string(t);
  return s;
}

std::vector<TypeId> parse_types(const std::string& s) {
  std::vector<TypeId> types;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      types.push_back(HeadId::phoneme(std::stoi(item)).type());
    } catch (const std::logic_error&) {
      throw ValidationError("bad type list '" + s + "' in checkpoint metadata");
    }
  }
  return types;
}

std::vector<TypeId> all_types() {
  std::vector<TypeId> t(kNumPhonemeTypes);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<TypeId>(i + 1);
  return t;
}

/// Writes <stem>.ckpt, <stem>.run.json and <stem>.trace.csv under `dir`.
void write_run(const fs::path& dir, const std::string& stem,
               const ModelParameters<float>& params, const TrainingPlan& plan,
               const TrainingTrace& trace, const std::vector<TypeId>& types,
               const RunFlags& flags, const Corpus& corpus,
               const PhonemeTaxonomy& taxonomy, std::ostream& out) {
  const CheckpointMetadata metadata{
      {"strategy", to_string(plan.strategy)},
      {"types", join_types(types)},
      {"epochs", std::to_string(plan.total_epochs)},
      {"seed", std::to_string(plan.seed)},
  };
  const std::string bytes = serialize_checkpoint(params, taxonomy, metadata);
  const fs::path ckpt = dir / (stem + ".ckpt");
  write_text_file(ckpt, bytes);
  write_text_file(dir / (stem + ".trace.csv"), trace.to_csv(taxonomy));

  json run;
  run["checkpoint"] = ckpt.filename().string();
  run["checkpoint_hash"] = hash_text(bytes);
  run["plan"] = json::parse(plan_to_json(plan));
  run["model"] = json::parse(model_config_to_json(params.config()));
  run["taxonomy_hash"] = taxonomy.hash();
  run["types"] = types;
  run["data"] = {{"dir", flags.data},
                 {"manifest_hash", corpus.manifest_hash},
                 {"train", corpus.split.train.size()},
                 {"validation", corpus.split.validation.size()},
                 {"test", corpus.split.test.size()}};
  run["epochs_completed"] = trace.epochs.size();
  if (!trace.epochs.empty()) run["final_mean_loss"] = trace.epochs.back().mean_loss;
  run["trace"] = stem + ".trace.csv";
  write_text_file(dir / (stem + ".run.json"), run.dump(2) + "\n");
  out << "wrote " << ckpt.string() << "\n";
}

// ---------------------------------------------------------------------------
// Subcommands

struct GenDataFlags {
  std::string out;
  std::uint64_t seed = 42;
  std::size_t examples = 2750;
  std::size_t glosses = 20;
  std::size_t active = 4;
  std::size_t frames = 32;
  double fps = 30.0;
  double noise = 0.01;
  double train = 2000, validation = 250, test = 500;
  std::optional<std::uint64_t> split_seed;
};

void run_gen_data(const GenDataFlags& f, std::ostream& out) {
  const auto& taxonomy = build_taxonomy();
  const auto graph = SkeletonGraph::preset("upper_body_27");
  SynthesisSpec spec = default_synthesis_spec(taxonomy, f.seed, f.active);
  spec.example_count = f.examples;
  spec.gloss_count = f.glosses;
  spec.frames = f.frames;
  spec.fps = f.fps;
  spec.noise = f.noise;
  validate_synthesis_spec(spec, taxonomy);
  const auto proportions = SplitProportions::from_weights(f.train, f.validation, f.test);
  const std::uint64_t split_seed = f.split_seed.value_or(f.seed);

  const auto examples = synthesize(spec, graph, taxonomy);
  const fs::path dir(f.out);
  write_dataset(dir, examples, taxonomy, spec.fps);
  const auto sizes = split_indices(examples, proportions, split_seed);

  json m;
  m["format"] = kCorpusFormat;
  m["format_version"] = 1;
  m["taxonomy_hash"] = taxonomy.hash();
  m["example_count"] = examples.size();
  m["gloss_count"] = spec.gloss_count;
  m["frames"] = spec.frames;
  m["joints"] = graph.joints();
  m["poses"] = "poses";
  m["labels"] = "labels.csv";
  m["split"] = {{"weights", {{"train", f.train}, {"validation", f.validation}, {"test", f.test}}},
                {"seed", split_seed},
                {"sizes", {{"train", sizes.train.size()},
                           {"validation", sizes.validation.size()},
                           {"test", sizes.test.size()}}}};
  m["synthesis"] = json::parse(synthesis_spec_to_json(spec));
  write_text_file(dir / kManifestName, m.dump(2) + "\n");
  out << "wrote " << examples.size() << " examples (" << sizes.train.size() << "/"
      << sizes.validation.size() << "/" << sizes.test.size() << ") to "
      << dir.string() << "\n";
}

void run_pretrain(const RunFlags& f, std::ostream& out) {
  const auto& taxonomy = build_taxonomy();
  const Corpus corpus = load_corpus(f.data, taxonomy);
  const ModelConfig config = f.model.config(corpus);
  const auto graph = SkeletonGraph::preset(config.graph);

  TrainingPlan plan = TrainingPlan::gloss(f.epochs);
  f.apply(plan);
  plan.validate();
  const auto init = ModelParameters<float>::initialize(config, taxonomy, plan.seed);
  TrainingTrace trace;
  const auto model = pretrain_gloss(init, graph, corpus.split, plan, &trace,
                                    progress(out, f.quiet, "pretrain", plan.total_epochs));
  write_run(f.out, "model", model, plan, trace, {}, f, corpus, taxonomy, out);
}

struct TrainFlags {
  RunFlags run;
  std::string strategy;
  std::string type = "all";
  int e = 3;
  std::optional<int> epochs;
  std::string pretrained;
};

void run_train(const TrainFlags& f, std::ostream& out) {
  const auto& taxonomy = build_taxonomy();
  const Strategy strategy = parse_strategy(f.strategy);
  if (strategy == Strategy::kGloss) {
    throw UsageError("use the pretrain command for gloss training");
  }
  std::vector<TypeId> types;
  if (strategy != Strategy::kFinetune || f.type == "all") {
    types = all_types();
  } else {
    int t = 0;
    try {
      std::size_t pos = 0;
      t = std::stoi(f.type, &pos);
      if (pos != f.type.size()) t = 0;
    } catch (const std::logic_error&) {
      t = 0;
    }
    if (t < 1 || t > static_cast<int>(kNumPhonemeTypes)) {
      throw UsageError("--type must be 1..16 or 'all', got '" + f.type + "'");
    }
    types.push_back(t);
  }
  const Corpus corpus = load_corpus(f.run.data, taxonomy);

  // Backbone: a pre-trained checkpoint or a fresh model from the flags.
  std::optional<Checkpoint> pretrained;
  ModelConfig config;
  if (!f.pretrained.empty()) {
    pretrained = load_checkpoint(f.pretrained, taxonomy);
    config = pretrained->params.config();
    if (config.encoder.frames != corpus.frames ||
        config.gloss_classes != corpus.gloss_count) {
      throw ShapeError("pre-trained checkpoint expects " +
                       std::to_string(config.encoder.frames) + " frames and " +
                       std::to_string(config.gloss_classes) +
                       " glosses; the corpus has " + std::to_string(corpus.frames) +
                       " and " + std::to_string(corpus.gloss_count));
    }
  } else {
    config = f.run.model.config(corpus);
  }
  const auto graph = SkeletonGraph::preset(config.graph);

  auto start_model = [&](std::uint64_t seed) {
    auto m = ModelParameters<float>::initialize(config, taxonomy, seed);
    if (pretrained) m.load_backbone(pretrained->params);
    return m;
  };

  auto make_plan = [&](TypeId type) {
    TrainingPlan plan;
    switch (strategy) {
      case Strategy::kFinetune:
        plan = TrainingPlan::finetune(type, f.epochs.value_or(f.run.epochs));
        break;
      case Strategy::kMultitask:
        plan = TrainingPlan::multitask(f.epochs.value_or(f.run.epochs));
        break;
      default:
        plan = TrainingPlan::curriculum(f.e);
        if (f.epochs) plan.total_epochs = *f.epochs;
        break;
    }
    f.run.apply(plan);
    if (pretrained) plan.pretrained_checkpoint = f.pretrained;
    plan.validate();
    return plan;
  };

  if (strategy != Strategy::kFinetune) {
    const TrainingPlan plan = make_plan(1);
    TrainingTrace trace;
    const auto model = train(start_model(plan.seed), graph, corpus.split, plan, &trace,
                             progress(out, f.run.quiet, to_string(strategy),
                                      plan.total_epochs));
    write_run(f.run.out, "model", model, plan, trace, all_types(), f.run, corpus,
              taxonomy, out);
    return;
  }

  for (TypeId t : types) {
    const TrainingPlan plan = make_plan(t);
    TrainingTrace trace;
    const std::string label = "finetune[" + taxonomy.type(t).identifier + "]";
    const auto model = train(start_model(plan.seed), graph, corpus.split, plan, &trace,
                             progress(out, f.run.quiet, label, plan.total_epochs));
    char stem[16];
    std::snprintf(stem, sizeof(stem), "type_%02d", t);
    write_run(f.run.out, stem, model, plan, trace, {t}, f.run, corpus, taxonomy, out);
  }
}

struct EvalFlags {
  std::string data;
  std::vector<std::string> checkpoints;
  std::vector<std::string> runs;
  std::string split = "test";
  std::string out;
};

void run_eval(const EvalFlags& f, std::ostream& out) {
  const auto& taxonomy = build_taxonomy();
  const Corpus corpus = load_corpus(f.data, taxonomy);
  const std::vector<LabeledExample>* examples = nullptr;
  if (f.split == "test") examples = &corpus.split.test;
  else if (f.split == "validation") examples = &corpus.split.validation;
  else if (f.split == "train") examples = &corpus.split.train;
  else throw UsageError("--split must be train, validation or test");

  std::vector<fs::path> paths(f.checkpoints.begin(), f.checkpoints.end());
  for (const auto& dir : f.runs) {
    std::vector<fs::path> found;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      if (entry.path().extension() == ".ckpt") found.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list '" + dir + "': " + ec.message());
    std::sort(found.begin(), found.end());
    if (found.empty()) throw IoError("no checkpoints in '" + dir + "'");
    paths.insert(paths.end(), found.begin(), found.end());
  }
  if (paths.empty()) throw UsageError("eval needs --checkpoint or --run");

  EvaluationResult merged;
  for (const auto& path : paths) {
    const std::string bytes = read_text_file(path);
    const Checkpoint ckpt = deserialize_checkpoint(bytes, taxonomy);
    if (ckpt.taxonomy_hash != corpus.manifest.at("taxonomy_hash").get<std::string>()) {
      throw ValidationError("checkpoint '" + path.string() + "' taxonomy hash " +
                            ckpt.taxonomy_hash + " does not match the corpus");
    }
    const auto graph = SkeletonGraph::preset(ckpt.params.config().graph);
    const auto it = ckpt.metadata.find("types");
    std::vector<TypeId> types =
        it == ckpt.metadata.end() ? std::vector<TypeId>{} : parse_types(it->second);
    if (types.empty()) types = all_types();
    merge_results(merged, evaluate(ckpt.params, graph, *examples, types));
    const auto strategy = ckpt.metadata.find("strategy");
    if (strategy != ckpt.metadata.end() && strategy->second == "gloss") {
      out << "gloss accuracy " << path.filename().string() << ": "
          << fixed(evaluate_gloss(ckpt.params, graph, *examples).percent(), 1) << "\n";
    }
  }
  const std::string csv = evaluation_to_csv(merged, taxonomy);
  if (f.out.empty()) {
    out << csv;
  } else {
    write_text_file(f.out, csv);
    out << "wrote " << f.out << "\n";
  }
}

struct ReportFlags {
  std::vector<std::string> evals;
  std::string out;
  std::string csv;
  bool published = false;
};

void run_report(const ReportFlags& f, std::ostream& out) {
  const auto& taxonomy = build_taxonomy();
  std::vector<MethodResult> methods;
  for (const auto& spec : f.evals) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw UsageError("--eval expects NAME=PATH, got '" + spec + "'");
    }
    const auto result = evaluation_from_csv(read_text_file(spec.substr(eq + 1)), taxonomy);
    methods.push_back(method_from_evaluation(spec.substr(0, eq), result));
  }
  Report report = build_report(methods, taxonomy);
  if (f.published) report.reference = published_results(taxonomy);
  const std::string text = render_report_text(report, taxonomy);
  if (!f.csv.empty()) write_text_file(f.csv, render_report_csv(report, taxonomy));
  if (f.out.empty()) {
    out << text;
  } else {
    write_text_file(f.out, text);
    out << "wrote " << f.out << "\n";
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Phoneme recognition on pose sequences: data, training, evaluation",
               "signphon"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Read options from a key = value file ([command] sections); "
                 "flags on the command line take precedence");
  app.fallthrough();

  GenDataFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic corpus and manifest");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--seed", gen.seed, "Synthesis seed")->capture_default_str();
  gen_cmd->add_option("--examples", gen.examples, "Number of examples")->capture_default_str();
  gen_cmd->add_option("--glosses", gen.glosses, "Number of glosses")->capture_default_str();
  gen_cmd->add_option("--active", gen.active, "Active classes per phoneme type")
      ->capture_default_str();
  gen_cmd->add_option("--frames", gen.frames, "Frames per example")->capture_default_str();
  gen_cmd->add_option("--fps", gen.fps, "Nominal frame rate")->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "Coordinate noise sigma")->capture_default_str();
  gen_cmd->add_option("--train", gen.train, "Train split weight")->capture_default_str();
  gen_cmd->add_option("--validation", gen.validation, "Validation split weight")
      ->capture_default_str();
  gen_cmd->add_option("--test", gen.test, "Test split weight")->capture_default_str();
  gen_cmd->add_option("--split-seed", gen.split_seed, "Split seed (default: --seed)");

  RunFlags pre;
  auto* pre_cmd = app.add_subcommand("pretrain", "Gloss pre-training of encoder and gloss head");
  pre.bind(pre_cmd);

  TrainFlags tr;
  auto* tr_cmd = app.add_subcommand("train", "Phoneme training with one strategy");
  tr.run.bind(tr_cmd, false);
  tr_cmd->add_option("--strategy", tr.strategy, "finetune, multitask or curriculum")
      ->required()
      ->check(CLI::IsMember({"finetune", "multitask", "curriculum"}));
  tr_cmd->add_option("--type", tr.type, "Fine-tune type: 1..16 or all")->capture_default_str();
  tr_cmd->add_option("--e", tr.e, "Curriculum epochs per phoneme type")->capture_default_str();
  tr_cmd->add_option("--epochs", tr.epochs,
                     "Training epochs (default 20; curriculum: 16 * e)");
  tr_cmd->add_option("--pretrained", tr.pretrained, "Gloss pre-trained checkpoint");

  EvalFlags ev;
  auto* ev_cmd = app.add_subcommand("eval", "Per-type top-1 accuracy of checkpoints");
  ev_cmd->add_option("--data", ev.data, "Corpus directory")->required();
  ev_cmd->add_option("--checkpoint", ev.checkpoints, "Checkpoint file (repeatable)");
  ev_cmd->add_option("--run", ev.runs, "Directory whose *.ckpt files are merged (repeatable)");
  ev_cmd->add_option("--split", ev.split, "train, validation or test")->capture_default_str();
  ev_cmd->add_option("--out", ev.out, "Evaluation CSV (default: stdout)");

  ReportFlags rep;
  auto* rep_cmd = app.add_subcommand("report", "Merge evaluation CSVs into one table");
  rep_cmd->add_option("--eval", rep.evals, "NAME=PATH of an evaluation CSV (repeatable)")
      ->required();
  rep_cmd->add_option("--out", rep.out, "Text table (default: stdout)");
  rep_cmd->add_option("--csv", rep.csv, "Also write the table as CSV");
  rep_cmd->add_flag("--published", rep.published, "Add the published reference columns");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: usage: " << msg << "\n";
    const CLI::App* failing = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << failing->help();
    return kExitUsage;
  }

  try {
    if (*gen_cmd) run_gen_data(gen, out);
    else if (*pre_cmd) run_pretrain(pre, out);
    else if (*tr_cmd) run_train(tr, out);
    else if (*ev_cmd) run_eval(ev, out);
    else if (*rep_cmd) run_report(rep, out);
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << to_string(e.kind()) << ": " << msg << "\n";
    return e.kind() == ErrorKind::kUsage ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace signphon
