// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "signphon/errors.hpp"
#include "signphon/taxonomy.hpp"

namespace signphon {

int active_type_count(int epoch, int interval) {
  if (epoch < 0 || interval < 1) {
    throw RangeError("active_type_count needs epoch >= 0 and interval >= 1 (got " +
                     std::to_string(epoch) + ", " + std::to_string(interval) + ")");
  }
  return std::min(static_cast<int>(kNumPhonemeTypes), epoch / interval + 1);
}

double cosine_lr(int epoch, int total_epochs, double lr_max, double lr_min) {
  if (epoch < 0 || epoch >= total_epochs) {
    throw RangeError("epoch " + std::to_string(epoch) + " outside [0, " +
                     std::to_string(total_epochs) + ")");
  }
  if (total_epochs == 1) return lr_max;
  const double progress =
      static_cast<double>(epoch) / static_cast<double>(total_epochs - 1);
  return lr_min + 0.5 * (lr_max - lr_min) * (1.0 + std::cos(std::numbers::pi * progress));
}

}  // namespace signphon
