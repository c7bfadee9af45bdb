// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/skeleton_graph.hpp"

#include <cmath>

#include "signphon/errors.hpp"

namespace signphon {

SkeletonGraph SkeletonGraph::from_edges(std::size_t joints,
                                        std::vector<Edge> edges,
                                        std::string name) {
  if (joints == 0) throw RangeError("skeleton graph needs at least one joint");
  const int v = static_cast<int>(joints);
  std::vector<double> a(joints * joints, 0.0);
  for (std::size_t i = 0; i < joints; ++i) a[i * joints + i] = 1.0;
  for (const auto& [p, q] : edges) {
    if (p < 1 || p > v || q < 1 || q > v) {
      throw RangeError("edge (" + std::to_string(p) + ", " + std::to_string(q) +
                       ") outside joints [1, " + std::to_string(v) + "]");
    }
    if (p == q) {
      throw RangeError("self-loop on joint " + std::to_string(p) +
                       " in edge list");
    }
    a[(p - 1) * joints + (q - 1)] = 1.0;
    a[(q - 1) * joints + (p - 1)] = 1.0;
  }
  std::vector<double> inv_sqrt_degree(joints);
  for (std::size_t i = 0; i < joints; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < joints; ++j) degree += a[i * joints + j];
    inv_sqrt_degree[i] = 1.0 / std::sqrt(degree);
  }
  for (std::size_t i = 0; i < joints; ++i) {
    for (std::size_t j = 0; j < joints; ++j) {
      a[i * joints + j] *= inv_sqrt_degree[i] * inv_sqrt_degree[j];
    }
  }

  SkeletonGraph g;
  g.name_ = std::move(name);
  g.joints_ = joints;
  g.edges_ = std::move(edges);
  g.sparse_ = SparseMatrix::from_dense(joints, joints, a);
  g.dense_ = std::move(a);
  return g;
}

std::vector<SkeletonGraph::Edge> upper_body_27_edges() {
  using namespace joint;
  std::vector<SkeletonGraph::Edge> edges;
  auto link = [&](int a, int b) { edges.emplace_back(a + 1, b + 1); };
  link(kNose, kNeck);
  link(kNeck, kChest);
  link(kNeck, kRightShoulder);
  link(kRightShoulder, kRightElbow);
  link(kNeck, kLeftShoulder);
  link(kLeftShoulder, kLeftElbow);
  link(kRightElbow, kDominantHand + kWrist);
  link(kLeftElbow, kNondominantHand + kWrist);
  for (int base : {kDominantHand, kNondominantHand}) {
    link(base + kWrist, base + kThumbBase);
    link(base + kThumbBase, base + kThumbTip);
    link(base + kWrist, base + kIndexBase);
    link(base + kIndexBase, base + kIndexTip);
    link(base + kWrist, base + kMiddleBase);
    link(base + kMiddleBase, base + kMiddleTip);
    link(base + kWrist, base + kRingBase);
    link(base + kRingBase, base + kRingTip);
    link(base + kRingBase, base + kPinkyTip);
    link(base + kIndexBase, base + kMiddleBase);
    link(base + kMiddleBase, base + kRingBase);
  }
  return edges;
}

SkeletonGraph SkeletonGraph::preset(std::string_view name) {
  if (name == "upper_body_27") {
    return from_edges(joint::kCount, upper_body_27_edges(), "upper_body_27");
  }
  if (name == "path_2") return from_edges(2, {{1, 2}}, "path_2");
  throw RangeError("unknown skeleton preset '" + std::string(name) + "'");
}

}  // namespace signphon
