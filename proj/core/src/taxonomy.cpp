// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/taxonomy.hpp"

#include <cstdio>
#include <set>

#include <json.hpp>

#include "signphon/errors.hpp"
#include "signphon/util.hpp"

namespace signphon {

PhonemeTaxonomy::PhonemeTaxonomy(std::vector<PhonemeType> types)
    : types_(std::move(types)) {
  if (types_.size() != kNumPhonemeTypes) {
    throw ValidationError("taxonomy must have exactly 16 types, got " +
                          std::to_string(types_.size()));
  }
  for (std::size_t i = 0; i < types_.size(); ++i) {
    const auto& t = types_[i];
    if (t.id != static_cast<TypeId>(i + 1)) {
      throw ValidationError("taxonomy ids must be 1..16 in order; position " +
                            std::to_string(i + 1) + " has id " +
                            std::to_string(t.id));
    }
    if (t.cardinality <= 0) {
      throw ValidationError("type '" + t.name + "' has non-positive cardinality");
    }
    if (t.parent && (*t.parent < 1 || *t.parent > 16 || *t.parent == t.id)) {
      throw ValidationError("type '" + t.name + "' has invalid parent");
    }
    total_classes_ += t.cardinality;
  }
  // Parent chains must terminate.
  for (const auto& t : types_) {
    std::set<TypeId> seen{t.id};
    auto cur = t.parent;
    while (cur) {
      if (!seen.insert(*cur).second) {
        throw ValidationError("taxonomy hierarchy has a cycle through '" +
                              t.name + "'");
      }
      cur = types_[*cur - 1].parent;
    }
  }
}

const PhonemeType& PhonemeTaxonomy::type(TypeId id) const {
  if (id < 1 || id > static_cast<TypeId>(types_.size())) {
    throw RangeError("phoneme type id " + std::to_string(id) +
                     " outside [1, 16]");
  }
  return types_[id - 1];
}

std::optional<TypeId> PhonemeTaxonomy::find(std::string_view key) const {
  for (const auto& t : types_) {
    if (t.name == key || t.identifier == key) return t.id;
  }
  return std::nullopt;
}

std::vector<TypeId> PhonemeTaxonomy::children(TypeId parent) const {
  std::vector<TypeId> out;
  for (const auto& t : types_) {
    if (t.parent == parent) out.push_back(t.id);
  }
  return out;
}

std::string PhonemeTaxonomy::to_json() const {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& t : types_) {
    nlohmann::ordered_json row;
    row["id"] = t.id;
    row["name"] = t.name;
    row["identifier"] = t.identifier;
    row["cardinality"] = t.cardinality;
    row["parent"] = t.parent ? nlohmann::ordered_json(*t.parent) : nullptr;
    doc.push_back(std::move(row));
  }
  return doc.dump();
}

std::string PhonemeTaxonomy::hash() const {
  return to_hex(fnv1a64(to_json()));
}

const PhonemeTaxonomy& build_taxonomy() {
  static const PhonemeTaxonomy taxonomy = [] {
    using T = PhonemeTaxonomy;
    auto row = [](TypeId id, const char* name, const char* ident, int k,
                  std::optional<TypeId> parent = std::nullopt) {
      return PhonemeType{id, name, ident, k, parent};
    };
    return PhonemeTaxonomy({
        row(T::kMajorLocation, "Major Location", "major_location", 5),
        row(T::kMinorLocation, "Minor Location", "minor_location", 37,
            T::kMajorLocation),
        row(T::kSecondMinorLocation, "Second Minor Location",
            "second_minor_location", 37, T::kMajorLocation),
        row(T::kContact, "Contact", "contact", 2),
        row(T::kThumbContact, "Thumb Contact", "thumb_contact", 3),
        row(T::kSignType, "Sign Type", "sign_type", 6),
        row(T::kRepeatedMovement, "Repeated Movement", "repeated_movement", 2),
        row(T::kPathMovement, "Path Movement", "path_movement", 8),
        row(T::kWristTwist, "Wrist Twist", "wrist_twist", 2),
        row(T::kSpread, "Spread", "spread", 3, T::kHandshape),
        row(T::kFlexion, "Flexion", "flexion", 8, T::kHandshape),
        row(T::kThumbPosition, "Thumb Position", "thumb_position", 2,
            T::kHandshape),
        row(T::kSelectedFingers, "Selected Fingers", "selected_fingers", 8,
            T::kHandshape),
        row(T::kSpreadChange, "Spread Change", "spread_change", 3,
            T::kHandshape),
        row(T::kNondominantHandshape, "Nondominant Handshape",
            "nondominant_handshape", 56),
        row(T::kHandshape, "Handshape", "handshape", 58),
    });
  }();
  return taxonomy;
}

std::vector<PhonemeType> curriculum_prefix(const PhonemeTaxonomy& taxonomy,
                                           int k) {
  if (k < 1 || k > static_cast<int>(taxonomy.size())) {
    throw RangeError("curriculum prefix length " + std::to_string(k) +
                     " outside [1, 16]");
  }
  auto all = taxonomy.types();
  return {all.begin(), all.begin() + k};
}

LabelValidation validate_labels(const PhonemeTaxonomy& taxonomy,
                                std::span<const int> labels) {
  if (labels.size() != taxonomy.size()) {
    return {false, std::nullopt,
            "expected 16 labels, got " + std::to_string(labels.size())};
  }
  for (const auto& t : taxonomy.types()) {
    const int label = labels[t.id - 1];
    if (label < 1 || label > t.cardinality) {
      return {false, t.id,
              t.name + " label " + std::to_string(label) + " outside [1, " +
                  std::to_string(t.cardinality) + "]"};
    }
  }
  return {};
}

}  // namespace signphon
