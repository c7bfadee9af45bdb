// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/model.hpp"

#include <cmath>

#include "signphon/errors.hpp"
#include "signphon/ops.hpp"
#include "signphon/rng.hpp"
#include "signphon/util.hpp"

namespace signphon {

void EncoderConfig::validate() const {
  if (channels.empty()) throw ConfigError("encoder needs at least one block");
  for (auto c : channels) {
    if (c == 0) throw ConfigError("encoder channel width must be positive");
  }
  if (temporal_kernel == 0 || temporal_kernel % 2 == 0) {
    throw ConfigError("temporal kernel must be odd, got " +
                      std::to_string(temporal_kernel));
  }
  if (frames == 0 || joints == 0 || input_channels == 0 || embedding_dim == 0) {
    throw ConfigError("encoder geometry must be positive");
  }
  if (temporal_kernel > frames) {
    throw ConfigError("temporal kernel " + std::to_string(temporal_kernel) +
                      " exceeds " + std::to_string(frames) + " frames");
  }
}

void ModelConfig::validate() const {
  encoder.validate();
  if (gloss_classes == 0) throw ConfigError("gloss vocabulary must be non-empty");
}

HeadId HeadId::phoneme(TypeId type) {
  if (type < 1 || type > static_cast<TypeId>(kNumPhonemeTypes)) {
    throw RangeError("head id " + std::to_string(type) + " outside [1, 16]");
  }
  return HeadId(type);
}

namespace {

std::string head_prefix(const PhonemeTaxonomy& taxonomy, std::size_t i) {
  return "head." + taxonomy.types()[i].identifier;
}

template <typename T>
Tensor<T> glorot(const std::string& name, std::uint64_t seed, Shape shape,
                 std::size_t fan_in, std::size_t fan_out) {
  Rng rng(derive_seed(seed, fnv1a64(name)));
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<T> values(shape_numel(shape));
  for (auto& v : values) v = static_cast<T>(rng.uniform(-bound, bound));
  return Tensor<T>(std::move(shape), std::move(values));
}

template <typename T>
Linear<T> make_linear(const std::string& prefix, std::uint64_t seed,
                      std::size_t in, std::size_t out, bool zero_weight) {
  Linear<T> l;
  l.weight = zero_weight ? Tensor<T>(Shape{in, out})
                         : glorot<T>(prefix + ".weight", seed, {in, out}, in, out);
  l.bias = Tensor<T>(Shape{out});
  return l;
}

template <typename T>
void copy_checked(Tensor<T>& dst, const Tensor<T>& src, const std::string& name) {
  if (dst.shape() != src.shape()) {
    throw ShapeError("tensor '" + name + "': expected shape " +
                     shape_string(dst.shape()) + ", got " +
                     shape_string(src.shape()));
  }
  std::copy(src.values().begin(), src.values().end(), dst.values().begin());
}

template <typename U, typename T>
Tensor<U> cast_tensor(const Tensor<T>& t) {
  std::vector<U> values(t.values().begin(), t.values().end());
  return Tensor<U>(t.shape(), std::move(values));
}

}  // namespace

template <typename T>
ModelParameters<T> ModelParameters<T>::initialize(const ModelConfig& config,
                                                  const PhonemeTaxonomy& taxonomy,
                                                  std::uint64_t seed,
                                                  InitOptions options) {
  config.validate();
  ModelParameters p;
  p.config_ = config;
  const auto& enc = config.encoder;
  std::size_t in = enc.input_channels;
  for (std::size_t b = 0; b < enc.blocks(); ++b) {
    const std::size_t out = enc.channels[b];
    const std::string prefix = "block" + std::to_string(b);
    EncoderBlock<T> block;
    block.spatial = glorot<T>(prefix + ".spatial", seed, {in, out}, in, out);
    block.temporal = glorot<T>(prefix + ".temporal", seed,
                               {enc.temporal_kernel, out}, enc.temporal_kernel,
                               enc.temporal_kernel);
    block.bias = Tensor<T>(Shape{out});
    p.blocks_.push_back(std::move(block));
    in = out;
  }
  p.projection_ = make_linear<T>("projection", seed, in, enc.embedding_dim, false);
  for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) {
    const auto k = static_cast<std::size_t>(taxonomy.types()[i].cardinality);
    p.head_widths_.push_back(static_cast<int>(k));
    p.heads_[i] = make_linear<T>(head_prefix(taxonomy, i), seed,
                                 enc.embedding_dim, k, options.zero_heads);
  }
  p.gloss_head_ = make_linear<T>("gloss", seed, enc.embedding_dim,
                                 config.gloss_classes, options.zero_heads);
  return p;
}

template <typename T>
Linear<T>& ModelParameters<T>::head(HeadId id) {
  return id.is_gloss() ? gloss_head_ : heads_[id.type() - 1];
}

template <typename T>
const Linear<T>& ModelParameters<T>::head(HeadId id) const {
  return id.is_gloss() ? gloss_head_ : heads_[id.type() - 1];
}

template <typename T>
std::vector<Tensor<T>> ModelParameters<T>::tensors() const {
  std::vector<Tensor<T>> out;
  for (const auto& b : blocks_) {
    out.push_back(b.spatial);
    out.push_back(b.temporal);
    out.push_back(b.bias);
  }
  out.push_back(projection_.weight);
  out.push_back(projection_.bias);
  for (const auto& h : heads_) {
    out.push_back(h.weight);
    out.push_back(h.bias);
  }
  out.push_back(gloss_head_.weight);
  out.push_back(gloss_head_.bias);
  return out;
}

template <typename T>
std::vector<std::string> ModelParameters<T>::tensor_names() const {
  const auto& taxonomy = build_taxonomy();
  std::vector<std::string> out;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const std::string prefix = "block" + std::to_string(b);
    out.push_back(prefix + ".spatial");
    out.push_back(prefix + ".temporal");
    out.push_back(prefix + ".bias");
  }
  out.push_back("projection.weight");
  out.push_back("projection.bias");
  for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) {
    out.push_back(head_prefix(taxonomy, i) + ".weight");
    out.push_back(head_prefix(taxonomy, i) + ".bias");
  }
  out.push_back("gloss.weight");
  out.push_back("gloss.bias");
  return out;
}

template <typename T>
std::size_t ModelParameters<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors()) n += t.numel();
  return n;
}

template <typename T>
void ModelParameters<T>::zero_grad() {
  for (auto t : tensors()) t.zero_grad();
}

template <typename T>
bool ModelParameters<T>::all_finite() const {
  for (const auto& t : tensors()) {
    for (T v : t.values()) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

template <typename T>
ModelParameters<T> ModelParameters<T>::clone() const {
  return cast<T>();
}

template <typename T>
template <typename U>
ModelParameters<U> ModelParameters<T>::cast() const {
  ModelParameters<U> p;
  p.config_ = config_;
  p.head_widths_ = head_widths_;
  for (const auto& b : blocks_) {
    p.blocks_.push_back({cast_tensor<U>(b.spatial), cast_tensor<U>(b.temporal),
                         cast_tensor<U>(b.bias)});
  }
  p.projection_ = {cast_tensor<U>(projection_.weight),
                   cast_tensor<U>(projection_.bias)};
  for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) {
    p.heads_[i] = {cast_tensor<U>(heads_[i].weight),
                   cast_tensor<U>(heads_[i].bias)};
  }
  p.gloss_head_ = {cast_tensor<U>(gloss_head_.weight),
                   cast_tensor<U>(gloss_head_.bias)};
  return p;
}

template <typename T>
void ModelParameters<T>::load_backbone(const ModelParameters& source) {
  if (source.blocks_.size() != blocks_.size()) {
    throw ShapeError("encoder has " + std::to_string(blocks_.size()) +
                     " blocks, source has " +
                     std::to_string(source.blocks_.size()));
  }
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const std::string prefix = "block" + std::to_string(b);
    copy_checked(blocks_[b].spatial, source.blocks_[b].spatial, prefix + ".spatial");
    copy_checked(blocks_[b].temporal, source.blocks_[b].temporal, prefix + ".temporal");
    copy_checked(blocks_[b].bias, source.blocks_[b].bias, prefix + ".bias");
  }
  copy_checked(projection_.weight, source.projection_.weight, "projection.weight");
  copy_checked(projection_.bias, source.projection_.bias, "projection.bias");
  copy_checked(gloss_head_.weight, source.gloss_head_.weight, "gloss.weight");
  copy_checked(gloss_head_.bias, source.gloss_head_.bias, "gloss.bias");
}

template <typename T>
void ModelParameters<T>::load_all(const ModelParameters& source) {
  load_backbone(source);
  const auto names = tensor_names();
  const std::size_t first_head = 3 * blocks_.size() + 2;
  for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) {
    copy_checked(heads_[i].weight, source.heads_[i].weight,
                 names[first_head + 2 * i]);
    copy_checked(heads_[i].bias, source.heads_[i].bias,
                 names[first_head + 2 * i + 1]);
  }
}

template <typename T>
void ModelParameters<T>::reinitialize_phoneme_heads(std::uint64_t seed) {
  const auto& taxonomy = build_taxonomy();
  for (std::size_t i = 0; i < kNumPhonemeTypes; ++i) {
    heads_[i] = make_linear<T>(head_prefix(taxonomy, i), seed,
                               config_.encoder.embedding_dim,
                               static_cast<std::size_t>(head_widths_[i]), false);
  }
}

template <typename T>
Tensor<T> pose_to_input(const PoseSequence& pose) {
  std::vector<T> values(pose.values.size());
  for (std::size_t i = 0; i < values.size(); i += PoseSequence::kChannels) {
    values[i] = static_cast<T>(pose.values[i] - 0.5);
    values[i + 1] = static_cast<T>(pose.values[i + 1] - 0.5);
    values[i + 2] = static_cast<T>(pose.values[i + 2]);
  }
  return Tensor<T>(Shape{pose.frames, pose.joints, PoseSequence::kChannels},
                   std::move(values));
}

template <typename T>
Tensor<T> encode(const ModelParameters<T>& params, const SkeletonGraph& graph,
                 const Tensor<T>& input, Tape<T>* tape) {
  const auto& enc = params.config().encoder;
  const Shape expected{enc.frames, enc.joints, enc.input_channels};
  if (input.shape() != expected) {
    throw DimensionError("encode: input shape " + shape_string(input.shape()) +
                         " does not match model geometry " +
                         shape_string(expected));
  }
  if (graph.joints() != enc.joints) {
    throw DimensionError("encode: graph has " + std::to_string(graph.joints()) +
                         " joints, model expects " + std::to_string(enc.joints));
  }
  Tensor<T> x = input;
  for (const auto& block : params.blocks()) {
    Tensor<T> h = ops::graph_propagate(graph.sparse_adjacency(), x, tape);
    h = ops::matmul(h, block.spatial, tape);
    h = ops::conv1d_temporal(h, block.temporal, tape);
    h = ops::add_bias(h, block.bias, tape);
    h = ops::relu(h, tape);
    if (h.shape() == x.shape()) h = ops::add(h, x, tape);
    x = h;
  }
  Tensor<T> pooled = ops::mean_pool(x, tape);
  Tensor<T> z = ops::matmul(pooled, params.projection().weight, tape);
  z = ops::add_bias(z, params.projection().bias, tape);
  return ops::relu(z, tape);
}

template <typename T>
Tensor<T> head_logits(const ModelParameters<T>& params,
                      const Tensor<T>& embedding, HeadId head, Tape<T>* tape) {
  const auto& layer = params.head(head);
  if (embedding.rank() != 1 || embedding.numel() != layer.weight.dim(0)) {
    throw DimensionError("classify: embedding shape " +
                         shape_string(embedding.shape()) + " vs head input " +
                         std::to_string(layer.weight.dim(0)));
  }
  return ops::add_bias(ops::matmul(embedding, layer.weight, tape), layer.bias,
                       tape);
}

template <typename T>
Tensor<T> classify(const ModelParameters<T>& params, const Tensor<T>& embedding,
                   HeadId head, Tape<T>* tape) {
  return ops::softmax(head_logits(params, embedding, head, tape), 0, tape);
}

template class ModelParameters<float>;
template class ModelParameters<double>;
template ModelParameters<double> ModelParameters<float>::cast<double>() const;
template ModelParameters<float> ModelParameters<double>::cast<float>() const;

#define SIGNPHON_INSTANTIATE_MODEL(T)                                        \
  template Tensor<T> pose_to_input<T>(const PoseSequence&);                  \
  template Tensor<T> encode(const ModelParameters<T>&, const SkeletonGraph&, \
                            const Tensor<T>&, Tape<T>*);                     \
  template Tensor<T> head_logits(const ModelParameters<T>&, const Tensor<T>&, \
                                 HeadId, Tape<T>*);                          \
  template Tensor<T> classify(const ModelParameters<T>&, const Tensor<T>&,   \
                              HeadId, Tape<T>*);

SIGNPHON_INSTANTIATE_MODEL(float)
SIGNPHON_INSTANTIATE_MODEL(double)

#undef SIGNPHON_INSTANTIATE_MODEL

}  // namespace signphon
