// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_MODEL_HPP
#define SIGNPHON_MODEL_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "signphon/pose.hpp"
#include "signphon/skeleton_graph.hpp"
#include "signphon/taxonomy.hpp"
#include "signphon/tensor.hpp"

namespace signphon {

/// Geometry of the spatial-temporal graph encoder.
struct EncoderConfig {
  std::vector<std::size_t> channels{16, 32};  // one entry per block
  std::size_t temporal_kernel = 5;            // odd, <= frames
  std::size_t embedding_dim = 64;
  std::size_t frames = 32;
  std::size_t joints = 27;
  std::size_t input_channels = PoseSequence::kChannels;

  std::size_t blocks() const { return channels.size(); }
  /// Throws ConfigError.
  void validate() const;

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

struct ModelConfig {
  EncoderConfig encoder;
  std::size_t gloss_classes = 20;
  std::string graph = "upper_body_27";

  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Selects one classification head: a phoneme type (1..16) or the gloss head.
class HeadId {
 public:
  static HeadId phoneme(TypeId type);  // RangeError outside 1..16
  static HeadId gloss() { return HeadId(0); }

  bool is_gloss() const { return type_ == 0; }
  TypeId type() const { return type_; }

  friend bool operator==(HeadId, HeadId) = default;

 private:
  explicit HeadId(TypeId type) : type_(type) {}
  TypeId type_;
};

template <typename T>
struct Linear {
  Tensor<T> weight;  // [in, out]
  Tensor<T> bias;    // [out]
};

/// One spatial-temporal block: relu(tconv(A X W) + b), plus X when the
/// channel width is unchanged.
template <typename T>
struct EncoderBlock {
  Tensor<T> spatial;   // [C_in, C_out]
  Tensor<T> temporal;  // [k, C_out], depthwise
  Tensor<T> bias;      // [C_out]
};

struct InitOptions {
  /// Zero phoneme and gloss head weights (biases are always zero). Makes
  /// every head emit a uniform distribution at initialization.
  bool zero_heads = false;
};

/// Encoder weights, the projection to the embedding, 16 phoneme heads and
/// the gloss head.
template <typename T>
class ModelParameters {
 public:
  ModelParameters() = default;

  /// Glorot-uniform weights, zero biases. Each tensor draws from its own
  /// stream derived from (seed, tensor name), so re-initializing a subset
  /// reproduces a fresh model's values for that subset.
  static ModelParameters initialize(const ModelConfig& config,
                                    const PhonemeTaxonomy& taxonomy,
                                    std::uint64_t seed, InitOptions options = {});

  const ModelConfig& config() const { return config_; }

  std::vector<EncoderBlock<T>>& blocks() { return blocks_; }
  const std::vector<EncoderBlock<T>>& blocks() const { return blocks_; }
  Linear<T>& projection() { return projection_; }
  const Linear<T>& projection() const { return projection_; }
  Linear<T>& head(HeadId id);
  const Linear<T>& head(HeadId id) const;

  /// All tensors in canonical order (encoder, projection, heads 1..16,
  /// gloss). Handles share storage with the model.
  std::vector<Tensor<T>> tensors() const;
  std::vector<std::string> tensor_names() const;
  std::size_t parameter_count() const;

  void zero_grad();
  bool all_finite() const;

  /// Deep copy.
  ModelParameters clone() const;

  template <typename U>
  ModelParameters<U> cast() const;

  /// Copies encoder, projection and gloss head values from `source`.
  /// Throws ShapeError on any geometry disagreement.
  void load_backbone(const ModelParameters& source);

  /// Copies every tensor from `source` (ShapeError on disagreement).
  void load_all(const ModelParameters& source);

  /// Redraws the 16 phoneme heads exactly as initialize() would for `seed`.
  void reinitialize_phoneme_heads(std::uint64_t seed);

 private:
  template <typename U>
  friend class ModelParameters;

  ModelConfig config_;
  std::vector<int> head_widths_;  // K_1..K_16
  std::vector<EncoderBlock<T>> blocks_;
  Linear<T> projection_;
  std::array<Linear<T>, kNumPhonemeTypes> heads_;
  Linear<T> gloss_head_;
};

/// Converts a pose to the encoder input [T, V, 3]: coordinates are centred
/// on the image middle (x - 0.5, y - 0.5); confidence is passed through.
template <typename T>
Tensor<T> pose_to_input(const PoseSequence& pose);

/// Pose graph encoder: per block a spatial step (A X W), depthwise temporal
/// convolution, bias, ReLU and a residual connection when the channel width
/// is unchanged; then a mean over frames and joints, a linear projection and
/// ReLU. Returns the embedding [d]. Throws DimensionError on a geometry
/// mismatch.
template <typename T>
Tensor<T> encode(const ModelParameters<T>& params, const SkeletonGraph& graph,
                 const Tensor<T>& input, Tape<T>* tape = nullptr);

template <typename T>
Tensor<T> encode(const ModelParameters<T>& params, const SkeletonGraph& graph,
                 const PoseSequence& pose, Tape<T>* tape = nullptr) {
  return encode(params, graph, pose_to_input<T>(pose), tape);
}

/// Head logits: embedding x W + b.
template <typename T>
Tensor<T> head_logits(const ModelParameters<T>& params,
                      const Tensor<T>& embedding, HeadId head,
                      Tape<T>* tape = nullptr);

/// softmax(head_logits(...)); length K_i, or G for the gloss head.
template <typename T>
Tensor<T> classify(const ModelParameters<T>& params, const Tensor<T>& embedding,
                   HeadId head, Tape<T>* tape = nullptr);

extern template class ModelParameters<float>;
extern template class ModelParameters<double>;

}  // namespace signphon

#endif  // SIGNPHON_MODEL_HPP
