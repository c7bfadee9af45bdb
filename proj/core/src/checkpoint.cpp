// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "json_convert.hpp"
#include "signphon/errors.hpp"
#include "signphon/util.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace signphon {
namespace {

constexpr std::string_view kMagic = "SPHCKPT1";
constexpr int kFormatVersion = 1;

}  // namespace

nlohmann::json to_json_value(const ModelConfig& config) {
  const auto& e = config.encoder;
  return {
      {"channels", e.channels},
      {"temporal_kernel", e.temporal_kernel},
      {"embedding_dim", e.embedding_dim},
      {"frames", e.frames},
      {"joints", e.joints},
      {"input_channels", e.input_channels},
      {"gloss_classes", config.gloss_classes},
      {"graph", config.graph},
  };
}

ModelConfig model_config_from_value(const nlohmann::json& v) {
  try {
    ModelConfig c;
    c.encoder.channels = v.at("channels").get<std::vector<std::size_t>>();
    c.encoder.temporal_kernel = v.at("temporal_kernel").get<std::size_t>();
    c.encoder.embedding_dim = v.at("embedding_dim").get<std::size_t>();
    c.encoder.frames = v.at("frames").get<std::size_t>();
    c.encoder.joints = v.at("joints").get<std::size_t>();
    c.encoder.input_channels = v.at("input_channels").get<std::size_t>();
    c.gloss_classes = v.at("gloss_classes").get<std::size_t>();
    c.graph = v.at("graph").get<std::string>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed model config: ") + ex.what());
  }
}

std::string model_config_to_json(const ModelConfig& config) {
  return to_json_value(config).dump();
}

ModelConfig model_config_from_json(std::string_view json) {
  try {
    return model_config_from_value(nlohmann::json::parse(json));
  } catch (const nlohmann::json::parse_error& ex) {
    throw ValidationError(std::string("model config is not JSON: ") + ex.what());
  }
}

std::string serialize_checkpoint(const ModelParameters<float>& params,
                                 const PhonemeTaxonomy& taxonomy,
                                 const CheckpointMetadata& metadata) {
  const auto tensors = params.tensors();
  const auto names = params.tensor_names();
  nlohmann::json header;
  header["format_version"] = kFormatVersion;
  header["metadata"] = metadata;
  header["model"] = to_json_value(params.config());
  header["taxonomy_hash"] = taxonomy.hash();
  auto entries = nlohmann::json::array();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    entries.push_back({{"name", names[i]}, {"shape", tensors[i].shape()}});
  }
  header["tensors"] = std::move(entries);
  const std::string text = header.dump();

  std::string out(kMagic);
  const std::uint64_t len = text.size();
  out.append(reinterpret_cast<const char*>(&len), sizeof(len));
  out += text;
  for (const auto& t : tensors) {
    out.append(reinterpret_cast<const char*>(t.data()), t.numel() * sizeof(float));
  }
  return out;
}

Checkpoint deserialize_checkpoint(std::string_view bytes,
                                  const PhonemeTaxonomy& taxonomy) {
  if (bytes.size() < kMagic.size() + 8 || bytes.substr(0, kMagic.size()) != kMagic) {
    throw ValidationError("not a signphon checkpoint (bad magic)");
  }
  std::uint64_t len = 0;
  std::memcpy(&len, bytes.data() + kMagic.size(), sizeof(len));
  const std::size_t body = kMagic.size() + sizeof(len);
  if (len > bytes.size() - body) throw ValidationError("truncated checkpoint header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(body, len));
  } catch (const nlohmann::json::parse_error& ex) {
    throw ValidationError(std::string("corrupt checkpoint header: ") + ex.what());
  }
  if (header.value("format_version", 0) != kFormatVersion) {
    throw ValidationError("unsupported checkpoint format version");
  }

  Checkpoint ckpt;
  std::size_t offset = body + len;
  try {
    ckpt.taxonomy_hash = header.value("taxonomy_hash", "");
    if (ckpt.taxonomy_hash != taxonomy.hash()) {
      throw ValidationError("taxonomy hash mismatch: checkpoint " +
                            ckpt.taxonomy_hash + ", expected " + taxonomy.hash());
    }
    ckpt.metadata = header.value("metadata", CheckpointMetadata{});
    const ModelConfig config = model_config_from_value(header.at("model"));
    ckpt.params = ModelParameters<float>::initialize(config, taxonomy, 0,
                                                     {.zero_heads = true});

    auto tensors = ckpt.params.tensors();
    const auto names = ckpt.params.tensor_names();
    const auto& entries = header.at("tensors");
    if (entries.size() != tensors.size()) {
      throw ShapeError("checkpoint holds " + std::to_string(entries.size()) +
                       " tensors, model expects " + std::to_string(tensors.size()));
    }
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      const auto name = entries[i].at("name").get<std::string>();
      const auto shape = entries[i].at("shape").get<Shape>();
      if (name != names[i] || shape != tensors[i].shape()) {
        throw ShapeError("checkpoint tensor '" + name + "' " + shape_string(shape) +
                         " does not match model tensor '" + names[i] + "' " +
                         shape_string(tensors[i].shape()));
      }
      const std::size_t n = tensors[i].numel() * sizeof(float);
      if (offset + n > bytes.size()) throw ValidationError("truncated checkpoint data");
      std::memcpy(tensors[i].data(), bytes.data() + offset, n);
      offset += n;
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed checkpoint header: ") + ex.what());
  }
  if (offset != bytes.size()) throw ValidationError("trailing bytes in checkpoint");
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path,
                     const ModelParameters<float>& params,
                     const PhonemeTaxonomy& taxonomy,
                     const CheckpointMetadata& metadata) {
  write_text_file(path, serialize_checkpoint(params, taxonomy, metadata));
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const PhonemeTaxonomy& taxonomy) {
  return deserialize_checkpoint(read_text_file(path), taxonomy);
}

}  // namespace signphon
