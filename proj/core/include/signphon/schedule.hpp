// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_SCHEDULE_HPP
#define SIGNPHON_SCHEDULE_HPP

namespace signphon {

/// Number of phoneme types in the cumulative objective at a 0-based epoch:
/// min(16, floor(epoch / interval) + 1). A new type enters every
/// `interval` epochs. Throws RangeError for epoch < 0 or interval < 1.
int active_type_count(int epoch, int interval);

/// Cosine-annealed learning rate:
///   lr_min + 0.5 (lr_max - lr_min) (1 + cos(pi * epoch / (total - 1)))
/// so epoch 0 gives lr_max and the last epoch gives lr_min. A single-epoch
/// run uses lr_max. Throws RangeError unless 0 <= epoch < total.
double cosine_lr(int epoch, int total_epochs, double lr_max, double lr_min);

}  // namespace signphon

#endif  // SIGNPHON_SCHEDULE_HPP
