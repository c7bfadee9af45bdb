// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_DATASET_IO_HPP
#define SIGNPHON_DATASET_IO_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "signphon/pose.hpp"
#include "signphon/taxonomy.hpp"

// On-disk formats.
//
// Pose file (one per example, JSON):
//   {"id": str, "fps": number, "joints": V, "frames": [[[x, y, c] x V] x T]}
//
// Labels file (CSV, header required):
//   id,gloss,<16 taxonomy identifiers in curriculum order>
//   values are 1-based class indices.

namespace signphon {

struct PoseFile {
  std::string id;
  double fps = 30.0;
  PoseSequence pose;
};

std::string pose_file_to_json(const PoseFile& file);
/// Throws ValidationError on malformed content.
PoseFile pose_file_from_json(std::string_view json);
PoseFile read_pose_file(const std::filesystem::path& path);
void write_pose_file(const std::filesystem::path& path, const PoseFile& file);

struct LabelRow {
  std::string id;
  int gloss = 0;
  PhonemeLabels phonemes{};
  std::size_t line = 0;  // 1-based line in the source file
};

std::string labels_csv_header(const PhonemeTaxonomy& taxonomy);
std::string format_labels_csv(std::span<const LabeledExample> examples,
                              const PhonemeTaxonomy& taxonomy);

/// Parses and validates a labels file. Every malformed row and every label
/// outside its type's range is collected; if any exist, one ValidationError
/// lists them all (line number, id, type name).
std::vector<LabelRow> parse_labels_csv(std::string_view text,
                                       const PhonemeTaxonomy& taxonomy);

/// Reads `labels_file` and `<pose_dir>/<id>.json` for every row. Poses are
/// padded (confidence 0) or truncated to `frames`. Throws IoError for
/// missing files and ValidationError for bad content.
std::vector<LabeledExample> load_dataset(const std::filesystem::path& pose_dir,
                                         const std::filesystem::path& labels_file,
                                         const PhonemeTaxonomy& taxonomy,
                                         std::size_t frames);

/// Writes `<dir>/poses/<id>.json` and `<dir>/labels.csv`.
void write_dataset(const std::filesystem::path& dir,
                   std::span<const LabeledExample> examples,
                   const PhonemeTaxonomy& taxonomy, double fps = 30.0);

}  // namespace signphon

#endif  // SIGNPHON_DATASET_IO_HPP
