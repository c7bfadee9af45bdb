// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/dataset_io.hpp"

#include <charconv>

#include <json.hpp>

#include "signphon/errors.hpp"
#include "signphon/util.hpp"

namespace signphon {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_int(std::string_view s, int& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string pose_file_to_json(const PoseFile& file) {
  const auto& pose = file.pose;
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t t = 0; t < pose.frames; ++t) {
    nlohmann::json frame = nlohmann::json::array();
    for (std::size_t v = 0; v < pose.joints; ++v) {
      frame.push_back({pose.at(t, v, 0), pose.at(t, v, 1), pose.at(t, v, 2)});
    }
    frames.push_back(std::move(frame));
  }
  nlohmann::ordered_json doc;
  doc["id"] = file.id;
  doc["fps"] = file.fps;
  doc["joints"] = pose.joints;
  doc["frames"] = std::move(frames);
  return doc.dump();
}

PoseFile pose_file_from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ValidationError(std::string("pose file is not valid JSON: ") + ex.what());
  }
  try {
    PoseFile file;
    file.id = doc.at("id").get<std::string>();
    file.fps = doc.at("fps").get<double>();
    const auto joints = doc.at("joints").get<std::size_t>();
    const auto& frames = doc.at("frames");
    file.pose = PoseSequence(frames.size(), joints);
    for (std::size_t t = 0; t < frames.size(); ++t) {
      const auto& frame = frames[t];
      if (frame.size() != joints) {
        throw ValidationError("pose '" + file.id + "' frame " + std::to_string(t) +
                              " has " + std::to_string(frame.size()) +
                              " joints, expected " + std::to_string(joints));
      }
      for (std::size_t v = 0; v < joints; ++v) {
        const auto& kp = frame[v];
        if (kp.size() != PoseSequence::kChannels) {
          throw ValidationError("pose '" + file.id + "' keypoint must be [x, y, c]");
        }
        for (std::size_t c = 0; c < PoseSequence::kChannels; ++c) {
          file.pose.at(t, v, c) = kp[c].get<double>();
        }
      }
    }
    if (!file.pose.is_valid()) {
      throw ValidationError("pose '" + file.id +
                            "' has non-finite coordinates or confidence outside [0, 1]");
    }
    return file;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed pose file: ") + ex.what());
  }
}

PoseFile read_pose_file(const std::filesystem::path& path) {
  return pose_file_from_json(read_text_file(path));
}

void write_pose_file(const std::filesystem::path& path, const PoseFile& file) {
  write_text_file(path, pose_file_to_json(file));
}

std::string labels_csv_header(const PhonemeTaxonomy& taxonomy) {
  std::string s = "id,gloss";
  for (const auto& t : taxonomy.types()) s += "," + t.identifier;
  return s;
}

std::string format_labels_csv(std::span<const LabeledExample> examples,
                              const PhonemeTaxonomy& taxonomy) {
  std::string s = labels_csv_header(taxonomy) + "\n";
  for (const auto& ex : examples) {
    s += ex.id + "," + std::to_string(ex.gloss);
    for (int label : ex.phonemes) s += "," + std::to_string(label);
    s += "\n";
  }
  return s;
}

std::vector<LabelRow> parse_labels_csv(std::string_view text,
                                       const PhonemeTaxonomy& taxonomy) {
  std::vector<LabelRow> rows;
  std::vector<std::string> problems;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (!header_seen) {
      header_seen = true;
      if (line != labels_csv_header(taxonomy)) {
        throw ValidationError("labels header must be '" +
                              labels_csv_header(taxonomy) + "', got '" +
                              std::string(line) + "'");
      }
      continue;
    }
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != kNumPhonemeTypes + 2) {
      problems.push_back(where + ": expected 18 fields, got " +
                         std::to_string(fields.size()));
      continue;
    }
    LabelRow row;
    row.line = line_no;
    row.id = std::string(trim(fields[0]));
    if (row.id.empty()) {
      problems.push_back(where + ": empty id");
      continue;
    }
    bool ok = parse_int(fields[1], row.gloss) && row.gloss >= 1;
    if (!ok) {
      problems.push_back(where + ": id " + row.id + ": invalid gloss '" +
                         std::string(trim(fields[1])) + "'");
      continue;
    }
    for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) {
      if (!parse_int(fields[i + 2], row.phonemes[i])) {
        problems.push_back(where + ": id " + row.id + ": " +
                           taxonomy.types()[i].name + " is not an integer");
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const auto check = validate_labels(taxonomy, row.phonemes);
    if (!check.ok) {
      problems.push_back(where + ": id " + row.id + ": " + check.message);
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw ValidationError("labels file is empty (header required)");
  if (!problems.empty()) {
    std::string msg = std::to_string(problems.size()) + " invalid label row(s): ";
    for (std::size_t i = 0; i < problems.size(); ++i) {
      if (i) msg += "; ";
      msg += problems[i];
    }
    throw ValidationError(msg);
  }
  return rows;
}

std::vector<LabeledExample> load_dataset(const std::filesystem::path& pose_dir,
                                         const std::filesystem::path& labels_file,
                                         const PhonemeTaxonomy& taxonomy,
                                         std::size_t frames) {
  const auto rows = parse_labels_csv(read_text_file(labels_file), taxonomy);
  std::vector<LabeledExample> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const auto path = pose_dir / (row.id + ".json");
    if (!std::filesystem::exists(path)) {
      throw IoError("pose file missing for id " + row.id + ": " + path.string());
    }
    PoseFile file = read_pose_file(path);
    if (file.id != row.id) {
      throw ValidationError("pose file " + path.string() + " carries id '" +
                            file.id + "', expected '" + row.id + "'");
    }
    out.push_back({row.id, file.pose.fit_frames(frames), row.gloss, row.phonemes});
  }
  return out;
}

void write_dataset(const std::filesystem::path& dir,
                   std::span<const LabeledExample> examples,
                   const PhonemeTaxonomy& taxonomy, double fps) {
  const auto pose_dir = dir / "poses";
  std::filesystem::create_directories(pose_dir);
  for (const auto& ex : examples) {
    write_pose_file(pose_dir / (ex.id + ".json"), {ex.id, fps, ex.pose});
  }
  write_text_file(dir / "labels.csv", format_labels_csv(examples, taxonomy));
}

}  // namespace signphon
