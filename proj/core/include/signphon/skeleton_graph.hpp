// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_SKELETON_GRAPH_HPP
#define SIGNPHON_SKELETON_GRAPH_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "signphon/ops.hpp"

namespace signphon {

/// Joint indices (0-based) of the default 27-joint upper-body + hands
/// layout: 7 body joints followed by 10 joints for the dominant (right) hand
/// and 10 for the nondominant (left) hand.
namespace joint {
inline constexpr int kNose = 0;
inline constexpr int kNeck = 1;
inline constexpr int kChest = 2;
inline constexpr int kRightShoulder = 3;
inline constexpr int kRightElbow = 4;
inline constexpr int kLeftShoulder = 5;
inline constexpr int kLeftElbow = 6;
inline constexpr int kDominantHand = 7;
inline constexpr int kNondominantHand = 17;

// Offsets within a hand block.
inline constexpr int kWrist = 0;
inline constexpr int kThumbBase = 1;
inline constexpr int kThumbTip = 2;
inline constexpr int kIndexBase = 3;
inline constexpr int kIndexTip = 4;
inline constexpr int kMiddleBase = 5;
inline constexpr int kMiddleTip = 6;
inline constexpr int kRingBase = 7;
inline constexpr int kRingTip = 8;
inline constexpr int kPinkyTip = 9;
inline constexpr int kPerHand = 10;

inline constexpr int kCount = 27;
}  // namespace joint

/// Undirected joint graph with its symmetric normalized adjacency
/// D^-1/2 (A + I) D^-1/2.
class SkeletonGraph {
 public:
  using Edge = std::pair<int, int>;  // 1-based endpoints

  /// Throws RangeError for endpoints outside [1, joints] or self-loops.
  static SkeletonGraph from_edges(std::size_t joints, std::vector<Edge> edges,
                                  std::string name = "custom");

  /// "upper_body_27" (the default) or "path_2". Throws RangeError otherwise.
  static SkeletonGraph preset(std::string_view name);
  static SkeletonGraph upper_body_27() { return preset("upper_body_27"); }

  const std::string& name() const { return name_; }
  std::size_t joints() const { return joints_; }
  std::span<const Edge> edges() const { return edges_; }

  /// Row-major V x V normalized adjacency.
  std::span<const double> normalized_adjacency() const { return dense_; }
  double adjacency(std::size_t row, std::size_t col) const {
    return dense_[row * joints_ + col];
  }
  const SparseMatrix& sparse_adjacency() const { return sparse_; }

 private:
  std::string name_;
  std::size_t joints_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> dense_;
  SparseMatrix sparse_;
};

/// Edge list of the 27-joint preset (1-based endpoints).
std::vector<SkeletonGraph::Edge> upper_body_27_edges();

}  // namespace signphon

#endif  // SIGNPHON_SKELETON_GRAPH_HPP
