// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_CHECKPOINT_HPP
#define SIGNPHON_CHECKPOINT_HPP

#include <filesystem>
#include <map>
#include <string>

#include "signphon/model.hpp"
#include "signphon/taxonomy.hpp"

// Checkpoint container, little-endian:
//
//   bytes 0..7   magic "SPHCKPT1"
//   bytes 8..15  uint64 header length H
//   next H bytes UTF-8 JSON header:
//                  {"format_version": 1,
//                   "metadata": {string: string},
//                   "model": {model config},
//                   "taxonomy_hash": "<16 hex digits>",
//                   "tensors": [{"name": str, "shape": [int...]}, ...]}
//   remainder    float32 values of each tensor, in header order
//
// Keys are emitted sorted, so identical models produce identical bytes.

namespace signphon {

using CheckpointMetadata = std::map<std::string, std::string>;

struct Checkpoint {
  ModelParameters<float> params;
  std::string taxonomy_hash;
  CheckpointMetadata metadata;
};

std::string serialize_checkpoint(const ModelParameters<float>& params,
                                 const PhonemeTaxonomy& taxonomy,
                                 const CheckpointMetadata& metadata = {});

/// Parses a checkpoint and validates it: the taxonomy hash must match
/// `taxonomy` (ValidationError) and every tensor must agree with the shapes
/// implied by the stored model config (ShapeError).
Checkpoint deserialize_checkpoint(std::string_view bytes,
                                  const PhonemeTaxonomy& taxonomy);

void save_checkpoint(const std::filesystem::path& path,
                     const ModelParameters<float>& params,
                     const PhonemeTaxonomy& taxonomy,
                     const CheckpointMetadata& metadata = {});

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const PhonemeTaxonomy& taxonomy);

/// Model config as a JSON object string (sorted keys), and back.
std::string model_config_to_json(const ModelConfig& config);
ModelConfig model_config_from_json(std::string_view json);

}  // namespace signphon

#endif  // SIGNPHON_CHECKPOINT_HPP
