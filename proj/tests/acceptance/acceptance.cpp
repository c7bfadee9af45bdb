// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fixtures.hpp"
#include "signphon/cli.hpp"
#include "signphon/dataset_io.hpp"
#include "signphon/evaluate.hpp"
#include "signphon/losses.hpp"
#include "signphon/report.hpp"
#include "signphon/schedule.hpp"
#include "signphon/skeleton_graph.hpp"
#include "signphon/split.hpp"
#include "signphon/synthesis.hpp"
#include "signphon/trainer.hpp"
#include "signphon/util.hpp"

namespace fs = std::filesystem;
using namespace signphon;
using namespace signphon::testing;

namespace {

// Class counts per type in curriculum order.
constexpr int kCardinalities[16] = {5, 37, 37, 2, 3, 6, 2, 8, 2, 3, 8, 2, 8, 3, 56, 58};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const fs::path& p) {
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

/// Runs the command-line tool in-process; throws with its stderr on failure.
std::string run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "signphon");
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  if (code != kExitOk) {
    std::string line;
    for (const auto& a : args) line += a + " ";
    throw std::runtime_error(line + "-> exit " + std::to_string(code) + ": " + err.str());
  }
  return out.str();
}

double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

// ---------------------------------------------------------------------------

Outcome gradient_fidelity() {
  const auto& tax = build_taxonomy();
  const auto graph = SkeletonGraph::upper_body_27();
  auto params = ModelParameters<double>::initialize(toy_config(), tax, 7);
  const auto ex = random_example(1);
  const PatternFn pattern = [&](const ModelParameters<double>& m) {
    return relu_pattern(m, graph, ex.pose);
  };
  struct Case {
    const char* name;
    std::function<Tensor<double>(const ModelParameters<double>&, Tape<double>*)> loss;
  };
  const Case cases[] = {
      {"finetune", [&](const ModelParameters<double>& m, Tape<double>* t) {
         return loss_finetune(m, graph, ex, PhonemeTaxonomy::kHandshape, t);
       }},
      {"multitask", [&](const ModelParameters<double>& m, Tape<double>* t) {
         return loss_multitask(m, graph, ex, t);
       }},
      {"curriculum k=2", [&](const ModelParameters<double>& m, Tape<double>* t) {
         return loss_curriculum(m, graph, ex, 3, 3, t);
       }},
  };
  const double start = cpu_seconds();
  Outcome o{true, ""};
  for (const auto& c : cases) {
    const auto r = gradient_check(params, c.loss, 1e-5, 128, 1e-4, pattern);
    const bool ok = r.max_rel_error <= 1e-4 && r.unresolved_kinks == 0;
    o.pass = o.pass && ok;
    o.detail += std::string(c.name) + " max_rel=" + fmt("%.2e", r.max_rel_error) + " (" +
                std::to_string(r.checked) + " entries, " + std::to_string(r.kink_crossings) +
                " kinks refined, " + std::to_string(r.unresolved_kinks) + " unresolved); ";
  }
  const double seconds = cpu_seconds() - start;
  o.pass = o.pass && seconds < 120.0;
  o.detail += "cpu " + fmt("%.1f", seconds) + " s";
  return o;
}

template <typename T>
bool identities_hold(std::string& detail) {
  const auto& tax = build_taxonomy();
  const auto graph = SkeletonGraph::upper_body_27();
  const auto p = ModelParameters<T>::initialize(toy_config(), tax, 3, {.zero_heads = true});
  double sum_ln = 0.0;
  for (int k : kCardinalities) sum_ln += std::log(static_cast<double>(k));
  bool ok = true;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const auto ex = random_example(s);
    const double ft = static_cast<double>(loss_finetune(p, graph, ex, 1).item());
    const T mt = loss_multitask(p, graph, ex).item();
    const T cur = loss_curriculum(p, graph, ex, 15, 1).item();
    ok = ok && std::abs(ft - std::log(5.0)) <= 1e-5;
    ok = ok && std::abs(static_cast<double>(mt) - sum_ln) <= 1e-4;
    ok = ok && std::memcmp(&mt, &cur, sizeof(T)) == 0;
    if (s == 1) {
      detail += std::string(sizeof(T) == 8 ? "f64" : "f32") + " finetune=" + fmt("%.7f", ft) +
                " multitask=" + fmt("%.6f", static_cast<double>(mt)) + "; ";
    }
  }
  return ok;
}

Outcome loss_identities() {
  Outcome o;
  double sum_ln = 0.0;
  for (int k : kCardinalities) sum_ln += std::log(static_cast<double>(k));
  o.detail = "ln 5=" + fmt("%.7f", std::log(5.0)) + " sum ln K=" + fmt("%.6f", sum_ln) + "; ";
  const bool a = identities_hold<float>(o.detail);
  const bool b = identities_hold<double>(o.detail);
  o.pass = a && b;
  o.detail += "curriculum k=16 bitwise equal to multitask";
  return o;
}

Outcome schedule_correctness() {
  const int epochs[] = {0, 19, 20, 300, 319};
  const int expected[] = {1, 1, 2, 16, 16};
  Outcome o{true, "k at 0/19/20/300/319 = "};
  for (int i = 0; i < 5; ++i) {
    const int k = active_type_count(epochs[i], 20);
    o.pass = o.pass && k == expected[i];
    o.detail += std::to_string(k) + (i < 4 ? "," : "");
  }
  const auto plan = TrainingPlan::curriculum(20);
  int previous = 0;
  for (int epoch = 0; epoch < plan.total_epochs; ++epoch) {
    const auto active = plan.active_types(epoch);
    for (std::size_t i = 0; i < active.size(); ++i) {
      o.pass = o.pass && active[i] == static_cast<TypeId>(i + 1);
    }
    o.pass = o.pass && static_cast<int>(active.size()) >= previous;
    previous = static_cast<int>(active.size());
    if (epoch >= plan.total_epochs - 20) o.pass = o.pass && active.size() == kNumPhonemeTypes;
  }
  o.detail += "; prefix property over " + std::to_string(plan.total_epochs) +
              " epochs; final 20 epochs use all 16 types";
  return o;
}

std::vector<LabeledExample> load_test_split(const fs::path& corpus) {
  const auto& tax = build_taxonomy();
  const auto manifest = nlohmann::json::parse(slurp(corpus / "manifest.json"));
  const auto examples = load_dataset(corpus / "poses", corpus / "labels.csv", tax,
                                     manifest.at("frames").get<std::size_t>());
  const auto& w = manifest.at("split").at("weights");
  const auto p = SplitProportions::from_weights(w.at("train"), w.at("validation"), w.at("test"));
  return split(examples, p, manifest.at("split").at("seed").get<std::uint64_t>()).test;
}

Outcome desk_learning(const fs::path& work) {
  const auto& tax = build_taxonomy();
  const std::string conf = SIGNPHON_DESK_CONFIG;
  const fs::path root = fresh_dir(work / "desk");
  const fs::path corpus = root / "corpus";
  const std::vector<std::string> base = {"--config", conf};
  auto with = [&](std::vector<std::string> args) {
    args.insert(args.begin(), base.begin(), base.end());
    return args;
  };

  run_cli(with({"gen-data", "--out", corpus.string()}));
  double t0 = cpu_seconds();
  run_cli(with({"pretrain", "--data", corpus.string(), "--out", (root / "pretrain").string(),
                "--quiet"}));
  const double pretrain_cpu = cpu_seconds() - t0;
  const std::string pretrained = (root / "pretrain" / "model.ckpt").string();

  struct Method {
    const char* name;
    const char* strategy;
    std::vector<std::string> extra;
  };
  const Method methods[] = {
      {"Fine-Tune", "finetune", {"--type", "all", "--epochs", "10"}},
      {"Multitask", "multitask", {"--epochs", "20"}},
      {"Curriculum", "curriculum", {}},
  };
  const auto test = load_test_split(corpus);
  const auto baseline = majority_baseline(test);

  Outcome o{true, "pretrain cpu " + fmt("%.0f", pretrain_cpu) + " s; "};
  std::vector<std::string> report_args = {"report", "--published"};
  for (const auto& m : methods) {
    const fs::path run = root / m.strategy;
    std::vector<std::string> args = {"train", "--data", corpus.string(), "--out", run.string(),
                                     "--strategy", m.strategy, "--pretrained", pretrained,
                                     "--quiet"};
    args.insert(args.end(), m.extra.begin(), m.extra.end());
    t0 = cpu_seconds();
    run_cli(with(args));
    const fs::path csv = root / (std::string(m.strategy) + ".eval.csv");
    run_cli({"eval", "--data", corpus.string(), "--run", run.string(), "--out", csv.string()});
    const double cpu = cpu_seconds() - t0 + pretrain_cpu;

    const auto result = evaluation_from_csv(slurp(csv), tax);
    double mean = 0.0;
    int beats = 0;
    for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) {
      const double acc = result.types[i] ? result.types[i]->percent() : 0.0;
      mean += acc / kNumPhonemeTypes;
      if (acc >= baseline[i] + 20.0) ++beats;
    }
    const bool ok = result.complete() && mean >= 70.0 && beats >= 12 && cpu < 1800.0;
    o.pass = o.pass && ok;
    o.detail += std::string(m.name) + " mean " + fmt("%.1f", mean) + "%, " + std::to_string(beats) +
                "/16 types >= baseline+20, cpu " + fmt("%.0f", cpu) + " s" + (ok ? "" : " [short]") +
                "; ";
    report_args.push_back("--eval");
    report_args.push_back(std::string(m.name) + "=" + csv.string());
  }
  report_args.push_back("--out");
  report_args.push_back((root / "report.txt").string());
  run_cli(report_args);

  std::cout << "\nDesk-scale results (test split, " << test.size() << " examples):\n"
            << slurp(root / "report.txt") << "Majority-class baseline:";
  for (double b : baseline) std::cout << " " << fmt("%.1f", b);
  std::cout << "\n\n";
  return o;
}

Outcome determinism(const fs::path& work) {
  auto pipeline = [&](const fs::path& root) {
    fresh_dir(root);
    const std::string corpus = (root / "corpus").string();
    run_cli({"gen-data", "--out", corpus, "--examples", "240", "--glosses", "8", "--seed", "5"});
    run_cli({"pretrain", "--data", corpus, "--out", (root / "pre").string(), "--epochs", "2",
             "--quiet"});
    const std::string pre = (root / "pre" / "model.ckpt").string();
    for (const char* s : {"multitask", "curriculum"}) {
      std::vector<std::string> args = {"train", "--data", corpus, "--out", (root / s).string(),
                                       "--strategy", s, "--pretrained", pre, "--quiet"};
      if (std::string(s) == "multitask") {
        args.insert(args.end(), {"--epochs", "3"});
      } else {
        args.insert(args.end(), {"--e", "1"});
      }
      run_cli(args);
      run_cli({"eval", "--data", corpus, "--run", (root / s).string(), "--out",
               (root / (std::string(s) + ".eval.csv")).string()});
    }
    run_cli({"report", "--eval", "Multitask=" + (root / "multitask.eval.csv").string(), "--eval",
             "Curriculum=" + (root / "curriculum.eval.csv").string(), "--out",
             (root / "report.txt").string(), "--csv", (root / "report.csv").string()});
  };
  const fs::path a = work / "determinism_a";
  const fs::path b = work / "determinism_b";
  pipeline(a);
  pipeline(b);

  // Run manifests record the data directory, which differs by construction.
  auto normalized = [](const fs::path& p) {
    if (p.string().ends_with(".run.json")) {
      auto j = nlohmann::ordered_json::parse(slurp(p));
      j["data"].erase("dir");
      if (j["plan"]["pretrained_checkpoint"].is_string()) {
        j["plan"]["pretrained_checkpoint"] =
            fs::path(j["plan"]["pretrained_checkpoint"].get<std::string>()).filename().string();
      }
      return j.dump();
    }
    return slurp(p);
  };
  std::size_t files = 0, checkpoints = 0;
  std::vector<std::string> differing;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), a);
    ++files;
    if (rel.extension() == ".ckpt") ++checkpoints;
    if (!fs::exists(b / rel) || normalized(a / rel) != normalized(b / rel)) {
      differing.push_back(rel.string());
    }
  }
  std::size_t files_b = 0;
  for (const auto& entry : fs::recursive_directory_iterator(b)) files_b += entry.is_regular_file();

  Outcome o;
  o.pass = differing.empty() && files == files_b && checkpoints == 3;
  o.detail = std::to_string(files) + " files compared (" + std::to_string(checkpoints) +
             " checkpoints, eval CSVs, reports), " + std::to_string(differing.size()) + " differ";
  if (!differing.empty()) o.detail += ", first: " + differing.front();
  return o;
}

Outcome oracle_equivalence(const fs::path& work) {
  const auto& tax = build_taxonomy();
  const auto graph = SkeletonGraph::upper_body_27();
  Outcome o{true, ""};

  // Brute-force recount over a 20-example fixture.
  const auto params = ModelParameters<float>::initialize(toy_config(), tax, 17);
  std::vector<LabeledExample> fixture;
  for (std::uint64_t s = 1000; s < 1020; ++s) fixture.push_back(random_example(s));
  const auto result = evaluate(params, graph, fixture);
  std::size_t recount_mismatch = 0;
  for (const auto& t : tax.types()) {
    std::size_t hits = 0;
    for (const auto& ex : fixture) {
      const auto probs = classify(params, encode(params, graph, ex.pose), HeadId::phoneme(t.id));
      const auto v = probs.values();
      const auto best = std::max_element(v.begin(), v.end()) - v.begin() + 1;
      hits += best == ex.phonemes[t.id - 1];
    }
    const auto& s = result.types[t.id - 1];
    if (!s || s->correct != hits || s->total != fixture.size()) ++recount_mismatch;
  }
  o.pass = recount_mismatch == 0;
  o.detail = "recount mismatches " + std::to_string(recount_mismatch) + "/16; ";

  // Hierarchy: re-derive dependent labels from the maps of the stored spec.
  const fs::path corpus = work / "desk" / "corpus";
  fs::path dir = corpus;
  if (!fs::exists(corpus / "manifest.json")) {
    dir = fresh_dir(work / "hierarchy") / "corpus";
    run_cli({"--config", SIGNPHON_DESK_CONFIG, "gen-data", "--out", dir.string()});
  }
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  const auto spec = synthesis_spec_from_json(manifest.at("synthesis").dump());
  const auto rows = parse_labels_csv(slurp(dir / "labels.csv"), tax);
  std::size_t mismatches = 0;
  for (const auto& row : rows) {
    const auto& l = row.phonemes;
    const auto major = spec.location_map.find(l[PhonemeTaxonomy::kMinorLocation - 1]);
    if (major == spec.location_map.end() ||
        major->second != l[PhonemeTaxonomy::kMajorLocation - 1]) {
      ++mismatches;
    }
    const auto hs = spec.handshape_map.find(l[PhonemeTaxonomy::kHandshape - 1]);
    if (hs == spec.handshape_map.end()) {
      ++mismatches;
      continue;
    }
    const HandshapeFeatures& f = hs->second;
    const std::pair<TypeId, int> children[] = {
        {PhonemeTaxonomy::kSpread, f.spread},
        {PhonemeTaxonomy::kFlexion, f.flexion},
        {PhonemeTaxonomy::kThumbPosition, f.thumb_position},
        {PhonemeTaxonomy::kSelectedFingers, f.selected_fingers},
        {PhonemeTaxonomy::kSpreadChange, f.spread_change},
    };
    for (auto [type, value] : children) mismatches += l[type - 1] != value;
  }
  o.pass = o.pass && mismatches == 0 && rows.size() == spec.example_count;
  o.detail += "hierarchy mismatches " + std::to_string(mismatches) + " over " +
              std::to_string(rows.size()) + " examples";
  return o;
}

Outcome report_layout() {
  const auto& tax = build_taxonomy();
  const auto report = build_report(published_results(tax), tax);
  const std::string got = fmt("%.1f", report.method_average[0]) + "/" +
                          fmt("%.1f", report.method_average[1]) + "/" +
                          fmt("%.1f", report.method_average[2]) + " overall " +
                          fmt("%.1f", report.overall);
  const std::string text = render_report_text(report, tax);
  Outcome o;
  o.pass = got == "85.8/85.0/86.8 overall 85.9" && text.find("Method Average") != std::string::npos;
  o.detail = "method averages " + got;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signphon acceptance checks"};
  std::string work = "acceptance_runs";
  std::vector<int> only;
  app.add_option("--work-dir", work, "Scratch directory for pipeline runs")->capture_default_str();
  app.add_option("--only", only, "Run only these criteria (repeatable)")
      ->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(work);

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "gradient fidelity", gradient_fidelity},
      {2, "loss identities", loss_identities},
      {3, "schedule correctness", schedule_correctness},
      {4, "desk-scale learning", [&] { return desk_learning(work); }},
      {5, "determinism", [&] { return determinism(work); }},
      {6, "oracle equivalence", [&] { return oracle_equivalence(work); }},
      {7, "report layout", report_layout},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto wall = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall).count();
    failures += !o.pass;
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.name
              << ": " << o.detail << " [" << fmt("%.1f", secs) << " s]\n"
              << std::flush;
  }
  return failures == 0 ? 0 : 1;
}
