// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/pose.hpp"

#include <algorithm>
#include <cmath>

namespace signphon {

bool PoseSequence::is_valid() const {
  if (values.size() != frames * joints * kChannels) return false;
  for (std::size_t i = 0; i < values.size(); i += kChannels) {
    if (!std::isfinite(values[i]) || !std::isfinite(values[i + 1])) return false;
    const double c = values[i + 2];
    if (!(c >= 0.0 && c <= 1.0)) return false;
  }
  return true;
}

PoseSequence PoseSequence::fit_frames(std::size_t target) const {
  PoseSequence out(target, joints);
  const std::size_t keep = std::min(frames, target) * joints * kChannels;
  std::copy_n(values.begin(), keep, out.values.begin());
  return out;
}

}  // namespace signphon
