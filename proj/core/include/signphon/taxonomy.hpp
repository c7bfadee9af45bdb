// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_TAXONOMY_HPP
#define SIGNPHON_TAXONOMY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace signphon {

inline constexpr std::size_t kNumPhonemeTypes = 16;

/// 1-based position of a phoneme type in curriculum order.
using TypeId = int;

/// One class index (1-based) per phoneme type, in curriculum order.
using PhonemeLabels = std::array<int, kNumPhonemeTypes>;

struct PhonemeType {
  TypeId id = 0;
  std::string name;        // display name, e.g. "Major Location"
  std::string identifier;  // column key, e.g. "major_location"
  int cardinality = 0;
  std::optional<TypeId> parent;
};

/// The sixteen phoneme types of ASL-LEX 2.0 in curriculum order (Major
/// Location first, Handshape last) with their class counts.
///
/// Immutable after construction.
class PhonemeTaxonomy {
 public:
  /// Curriculum ids used throughout the library.
  enum : TypeId {
    kMajorLocation = 1,
    kMinorLocation,
    kSecondMinorLocation,
    kContact,
    kThumbContact,
    kSignType,
    kRepeatedMovement,
    kPathMovement,
    kWristTwist,
    kSpread,
    kFlexion,
    kThumbPosition,
    kSelectedFingers,
    kSpreadChange,
    kNondominantHandshape,
    kHandshape,
  };

  explicit PhonemeTaxonomy(std::vector<PhonemeType> types);

  std::span<const PhonemeType> types() const { return types_; }
  std::size_t size() const { return types_.size(); }
  int total_classes() const { return total_classes_; }

  /// Lookup by 1-based curriculum id; throws RangeError.
  const PhonemeType& type(TypeId id) const;
  int cardinality(TypeId id) const { return type(id).cardinality; }

  /// Lookup by display name or identifier; nullopt if unknown.
  std::optional<TypeId> find(std::string_view name_or_identifier) const;

  /// Ids whose parent is `parent`, ascending.
  std::vector<TypeId> children(TypeId parent) const;

  /// Canonical JSON export: ordered array of
  /// {"id", "name", "identifier", "cardinality", "parent"} with fixed key
  /// order and no trailing whitespace.
  std::string to_json() const;

  /// FNV-1a 64 of to_json(), as 16 lowercase hex digits.
  std::string hash() const;

 private:
  std::vector<PhonemeType> types_;
  int total_classes_ = 0;
};

/// Canonical 16-entry taxonomy. Hierarchy: Spread, Flexion, Thumb
/// Position, Selected Fingers and Spread Change are children of Handshape;
/// Minor and Second Minor Location are children of Major Location; every
/// other type is a root.
const PhonemeTaxonomy& build_taxonomy();

/// First `k` types in curriculum order, 1 <= k <= 16; throws RangeError.
std::vector<PhonemeType> curriculum_prefix(const PhonemeTaxonomy& taxonomy,
                                           int k);

struct LabelValidation {
  bool ok = true;
  std::optional<TypeId> failing_type;  // first violating type
  std::string message;
};

/// Checks label i lies in [1, K_i] for every type. Violations are reported
/// in the result rather than thrown.
LabelValidation validate_labels(const PhonemeTaxonomy& taxonomy,
                                std::span<const int> labels);

}  // namespace signphon

#endif  // SIGNPHON_TAXONOMY_HPP
