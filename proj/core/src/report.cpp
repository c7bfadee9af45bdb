// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/report.hpp"

#include <algorithm>
#include <cstdio>
#include <string_view>

#include "signphon/errors.hpp"
#include "signphon/util.hpp"

namespace signphon {
namespace {

struct PublishedRow {
  std::string_view type;
  double values[3];
};

// Rows as published, which list the handshape children in a different
// order than the taxonomy; lookup is by name.
constexpr PublishedRow kPublished[] = {
    {"Major Location", {87.7, 87.5, 89.1}},
    {"Minor Location", {79.2, 78.1, 80.7}},
    {"Second Minor Location", {78.7, 77.2, 80.9}},
    {"Contact", {89.3, 88.6, 91.1}},
    {"Thumb Contact", {91.7, 91.1, 92.1}},
    {"Sign Type", {88.9, 87.9, 89.4}},
    {"Repeated Movement", {85.5, 85.4, 87.3}},
    {"Path Movement", {75.6, 75.4, 79.6}},
    {"Wrist Twist", {92.4, 92.6, 93.5}},
    {"Selected Fingers", {91.1, 90.2, 90.6}},
    {"Thumb Position", {91.5, 91.5, 91.8}},
    {"Flexion", {81.2, 81.0, 83.2}},
    {"Spread", {88.4, 88.0, 88.8}},
    {"Spread Change", {90.3, 89.5, 90.4}},
    {"Nondominant Handshape", {83.5, 81.7, 83.2}},
    {"Handshape", {77.4, 74.7, 76.9}},
};

constexpr const char* kPublishedMethods[] = {"Fine-Tune", "Multitask", "Curriculum"};

std::string fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

MethodResult method_from_evaluation(std::string name,
                                    const EvaluationResult& result) {
  MethodResult m{std::move(name), {}};
  for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) {
    if (result.types[i]) m.accuracy[i] = result.types[i]->percent();
  }
  return m;
}

Report build_report(std::span<const MethodResult> methods,
                    const PhonemeTaxonomy& taxonomy) {
  if (methods.empty()) throw UsageError("report needs at least one method");
  Report r;
  for (const auto& m : methods) {
    for (const auto& t : taxonomy.types()) {
      const auto& v = m.accuracy[t.id - 1];
      if (!v) {
        throw ValidationError("method '" + m.name + "' has no result for " + t.name);
      }
      if (!(*v >= 0.0 && *v <= 100.0)) {
        throw ValidationError("method '" + m.name + "' reports " + format_real(*v) +
                              "% for " + t.name);
      }
      r.cells[t.id - 1].push_back(*v);
    }
    r.methods.push_back(m.name);
  }
  for (std::size_t j = 0; j < methods.size(); ++j) {
    std::array<double, kNumPhonemeTypes> column{};
    for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) column[i] = r.cells[i][j];
    r.method_average.push_back(mean(column));
  }
  for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) {
    r.type_average[i] = mean(r.cells[i]);
  }
  r.overall = mean(r.method_average);
  return r;
}

std::vector<MethodResult> published_results(const PhonemeTaxonomy& taxonomy) {
  std::vector<MethodResult> out;
  for (std::size_t j = 0; j < 3; ++j) {
    MethodResult m{kPublishedMethods[j], {}};
    for (const auto& row : kPublished) {
      const auto id = taxonomy.find(row.type);
      if (!id) throw ValidationError("published row '" + std::string(row.type) +
                                     "' matches no phoneme type");
      m.accuracy[*id - 1] = row.values[j];
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::string render_report_text(const Report& report,
                               const PhonemeTaxonomy& taxonomy) {
  std::vector<std::string> header{"Phoneme Type"};
  for (const auto& m : report.methods) header.push_back(m);
  header.push_back("Type Average");
  for (const auto& ref : report.reference) header.push_back("published " + ref.name);

  std::vector<std::vector<std::string>> rows;
  for (const auto& t : taxonomy.types()) {
    std::vector<std::string> row{t.name};
    for (double v : report.cells[t.id - 1]) row.push_back(fixed1(v));
    row.push_back(fixed1(report.type_average[t.id - 1]));
    for (const auto& ref : report.reference) {
      const auto& v = ref.accuracy[t.id - 1];
      row.push_back(v ? fixed1(*v) : "-");
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::string> avg{"Method Average"};
  for (double v : report.method_average) avg.push_back(fixed1(v));
  avg.push_back(fixed1(report.overall));
  for (const auto& ref : report.reference) {
    double s = 0.0;
    bool full = true;
    for (const auto& v : ref.accuracy) {
      if (v) s += *v; else full = false;
    }
    avg.push_back(full ? fixed1(s / kNumPhonemeTypes) : "-");
  }

  std::vector<std::size_t> width(header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  };
  widen(header);
  for (const auto& row : rows) widen(row);
  widen(avg);

  auto line = [&](const std::vector<std::string>& row) {
    std::string s;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        s += row[c] + std::string(width[c] - row[c].size(), ' ');
      } else {
        s += "  " + std::string(width[c] - row[c].size(), ' ') + row[c];
      }
    }
    return s + "\n";
  };
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  const std::string rule(total - 2, '-');

  std::string out = line(header) + rule + "\n";
  for (const auto& row : rows) out += line(row);
  out += rule + "\n" + line(avg);
  return out;
}

std::string render_report_csv(const Report& report,
                              const PhonemeTaxonomy& taxonomy) {
  std::string out = "phoneme_type";
  for (const auto& m : report.methods) out += "," + csv_field(m);
  out += ",Type Average\n";
  for (const auto& t : taxonomy.types()) {
    out += csv_field(t.name);
    for (double v : report.cells[t.id - 1]) out += "," + format_real(v);
    out += "," + format_real(report.type_average[t.id - 1]) + "\n";
  }
  out += "Method Average";
  for (double v : report.method_average) out += "," + format_real(v);
  out += "," + format_real(report.overall) + "\n";
  return out;
}

}  // namespace signphon
