// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_POSE_HPP
#define SIGNPHON_POSE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "signphon/taxonomy.hpp"

namespace signphon {

/// T x V x 3 keypoints: (x, y) in normalized image coordinates and a
/// detection confidence in [0, 1].
struct PoseSequence {
  static constexpr std::size_t kChannels = 3;

  std::size_t frames = 0;
  std::size_t joints = 0;
  std::vector<double> values;  // row-major [frame][joint][channel]

  PoseSequence() = default;
  PoseSequence(std::size_t frames, std::size_t joints)
      : frames(frames), joints(joints), values(frames * joints * kChannels) {}

  double& at(std::size_t t, std::size_t v, std::size_t c) {
    return values[(t * joints + v) * kChannels + c];
  }
  double at(std::size_t t, std::size_t v, std::size_t c) const {
    return values[(t * joints + v) * kChannels + c];
  }

  /// Finite coordinates, confidences in [0, 1], consistent size.
  bool is_valid() const;

  /// Pads with zero rows (confidence 0) or truncates to `target` frames.
  PoseSequence fit_frames(std::size_t target) const;

  friend bool operator==(const PoseSequence&, const PoseSequence&) = default;
};

struct LabeledExample {
  std::string id;
  PoseSequence pose;
  int gloss = 0;  // 1-based
  PhonemeLabels phonemes{};

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

}  // namespace signphon

#endif  // SIGNPHON_POSE_HPP
