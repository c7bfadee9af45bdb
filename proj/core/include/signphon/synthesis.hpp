// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_SYNTHESIS_HPP
#define SIGNPHON_SYNTHESIS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "signphon/pose.hpp"
#include "signphon/skeleton_graph.hpp"
#include "signphon/taxonomy.hpp"

namespace signphon {

/// Child-type values implied by one Handshape class.
struct HandshapeFeatures {
  int spread = 1;
  int flexion = 1;
  int thumb_position = 1;
  int selected_fingers = 1;
  int spread_change = 1;

  friend bool operator==(const HandshapeFeatures&, const HandshapeFeatures&) = default;
};

/// Everything needed to regenerate a synthetic corpus.
///
/// A corpus holds `gloss_count` glosses. Each gloss is one tuple of class
/// choices drawn from the active subsets; Major Location is then read from
/// `location_map[Minor Location]` and the five Handshape children from
/// `handshape_map[Handshape]`, never sampled independently. Examples cycle
/// through the glosses (example i has gloss i mod G + 1).
struct SynthesisSpec {
  std::uint64_t seed = 42;
  std::size_t gloss_count = 20;
  std::size_t example_count = 2750;
  std::size_t frames = 32;
  double fps = 30.0;
  double noise = 0.01;  // Gaussian coordinate noise sigma
  std::array<std::vector<int>, kNumPhonemeTypes> active_classes;
  std::map<int, HandshapeFeatures> handshape_map;  // Handshape -> children
  std::map<int, int> location_map;                 // Minor -> Major Location

  friend bool operator==(const SynthesisSpec&, const SynthesisSpec&) = default;
};

/// Active subsets of size min(K_i, active_per_type) drawn from `seed`, with
/// balanced Handshape and Minor Location maps over them.
SynthesisSpec default_synthesis_spec(const PhonemeTaxonomy& taxonomy,
                                     std::uint64_t seed,
                                     std::size_t active_per_type = 4);

/// Throws ValidationError when `spec` is inconsistent with the taxonomy:
/// out-of-range or duplicate classes, maps that are not total over the
/// active Handshape / Minor Location classes, or map values outside the
/// target type's active subset.
void validate_synthesis_spec(const SynthesisSpec& spec,
                             const PhonemeTaxonomy& taxonomy);

/// The `gloss_count` distinct label tuples (index g-1 holds gloss g).
std::vector<PhonemeLabels> gloss_inventory(const SynthesisSpec& spec,
                                           const PhonemeTaxonomy& taxonomy);

/// Deterministic corpus for `spec`. Requires the 27-joint preset layout.
///
/// Rendering per example (64-bit arithmetic, per-example random stream):
/// the dominant wrist sits at a Major Location region centre shifted by a
/// Minor Location offset, drifts toward a Second Minor Location offset and
/// traces one of 8 Path Movement templates (traced out and back when the
/// movement repeats). Contact shifts the trajectory so its closest approach
/// to the location point is zero; no contact holds it away. Wrist Twist
/// rotates the hand about the wrist. Finger joints come from the Handshape
/// child features (selected fingers, flexion, spread, spread change, thumb
/// position) plus a per-handshape perturbation; Thumb Contact moves the
/// thumb tip onto a fingertip. Sign Type drives the nondominant hand
/// (resting, mirrored, alternating, static base or independent), shaped by
/// the Nondominant Handshape or the dominant one. Signer scale/offset
/// jitter and Gaussian noise are applied last; values are rounded to 1e-5.
std::vector<LabeledExample> synthesize(const SynthesisSpec& spec,
                                       const SkeletonGraph& graph,
                                       const PhonemeTaxonomy& taxonomy);

std::string synthesis_spec_to_json(const SynthesisSpec& spec);
/// Throws ValidationError on malformed input.
SynthesisSpec synthesis_spec_from_json(std::string_view json);

}  // namespace signphon

#endif  // SIGNPHON_SYNTHESIS_HPP
