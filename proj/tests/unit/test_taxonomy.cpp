// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "signphon/errors.hpp"
#include "signphon/taxonomy.hpp"
#include "signphon/util.hpp"

using namespace signphon;

namespace {

// Canonical names and class counts, in curriculum order.
const std::array<std::pair<const char*, int>, 16> kTable1 = {{
    {"Major Location", 5},
    {"Minor Location", 37},
    {"Second Minor Location", 37},
    {"Contact", 2},
    {"Thumb Contact", 3},
    {"Sign Type", 6},
    {"Repeated Movement", 2},
    {"Path Movement", 8},
    {"Wrist Twist", 2},
    {"Spread", 3},
    {"Flexion", 8},
    {"Thumb Position", 2},
    {"Selected Fingers", 8},
    {"Spread Change", 3},
    {"Nondominant Handshape", 56},
    {"Handshape", 58},
}};

}  // namespace

TEST_CASE("taxonomy follows the published type table") {
  const auto& tax = build_taxonomy();
  REQUIRE(tax.size() == 16);
  int total = 0;
  for (std::size_t i = 0; i < kTable1.size(); ++i) {
    const auto& t = tax.types()[i];
    CHECK(t.id == static_cast<TypeId>(i + 1));
    CHECK(t.name == kTable1[i].first);
    CHECK(t.cardinality == kTable1[i].second);
    total += kTable1[i].second;
  }
  CHECK(tax.total_classes() == total);
  CHECK(total == 240);
  CHECK(tax.type(1).name == "Major Location");
  CHECK(tax.cardinality(PhonemeTaxonomy::kHandshape) == 58);
}

TEST_CASE("type lookup range and names") {
  const auto& tax = build_taxonomy();
  CHECK_THROWS_AS(tax.type(0), RangeError);
  CHECK_THROWS_AS(tax.type(17), RangeError);
  CHECK(tax.find("Path Movement") == 8);
  CHECK(tax.find("path_movement") == 8);
  CHECK_FALSE(tax.find("Orientation").has_value());
  for (const auto& t : tax.types()) {
    CHECK(tax.find(t.identifier) == t.id);
    CHECK(t.identifier.find(' ') == std::string::npos);
  }
}

TEST_CASE("hierarchy edges") {
  const auto& tax = build_taxonomy();
  using T = PhonemeTaxonomy;
  CHECK(tax.children(T::kHandshape) ==
        std::vector<TypeId>{T::kSpread, T::kFlexion, T::kThumbPosition,
                            T::kSelectedFingers, T::kSpreadChange});
  CHECK(tax.children(T::kMajorLocation) ==
        std::vector<TypeId>{T::kMinorLocation, T::kSecondMinorLocation});
  CHECK(tax.children(T::kContact).empty());
  int roots = 0;
  for (const auto& t : tax.types()) {
    if (!t.parent) ++roots;
    // Handshape children precede their parent in curriculum order.
    if (t.parent == T::kHandshape) CHECK(t.id < *t.parent);
  }
  CHECK(roots == 9);
}

TEST_CASE("curriculum prefix") {
  const auto& tax = build_taxonomy();
  CHECK(curriculum_prefix(tax, 1).front().name == "Major Location");
  const auto two = curriculum_prefix(tax, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[1].name == "Minor Location");
  CHECK(curriculum_prefix(tax, 16).back().name == "Handshape");
  CHECK_THROWS_AS(curriculum_prefix(tax, 0), RangeError);
  CHECK_THROWS_AS(curriculum_prefix(tax, 17), RangeError);
}

TEST_CASE("label validation reports the first failing type") {
  const auto& tax = build_taxonomy();
  std::array<int, 16> labels{};
  labels.fill(1);
  CHECK(validate_labels(tax, labels).ok);
  labels[15] = 58;
  CHECK(validate_labels(tax, labels).ok);
  labels[15] = 59;
  auto r = validate_labels(tax, labels);
  CHECK_FALSE(r.ok);
  CHECK(r.failing_type == 16);
  CHECK(r.message.find("Handshape") != std::string::npos);
  labels[3] = 0;
  r = validate_labels(tax, labels);
  CHECK(r.failing_type == 4);
  const std::vector<int> short_list(15, 1);
  CHECK_FALSE(validate_labels(tax, short_list).ok);
}

TEST_CASE("canonical json and hash") {
  const auto& tax = build_taxonomy();
  const auto j = nlohmann::json::parse(tax.to_json());
  REQUIRE(j.size() == 16);
  CHECK(j[15]["name"] == "Handshape");
  CHECK(j[15]["cardinality"] == 58);
  CHECK(j[9]["parent"] == 16);
  CHECK(j[0]["parent"].is_null());
  CHECK(tax.hash().size() == 16);
  CHECK(tax.hash() == to_hex(fnv1a64(tax.to_json())));
  CHECK(tax.hash() == build_taxonomy().hash());
}

TEST_CASE("constructor validation") {
  std::vector<PhonemeType> types;
  for (const auto& t : build_taxonomy().types()) types.push_back(t);
  SUBCASE("accepts the canonical list") { CHECK_NOTHROW(PhonemeTaxonomy{types}); }
  SUBCASE("rejects zero cardinality") {
    types[4].cardinality = 0;
    CHECK_THROWS_AS(PhonemeTaxonomy{types}, ValidationError);
  }
  SUBCASE("rejects a dangling parent") {
    types[4].parent = 40;
    CHECK_THROWS_AS(PhonemeTaxonomy{types}, ValidationError);
  }
  SUBCASE("rejects a cycle") {
    types[15].parent = PhonemeTaxonomy::kSpread;
    CHECK_THROWS_AS(PhonemeTaxonomy{types}, ValidationError);
  }
  SUBCASE("rejects out-of-order ids") {
    std::swap(types[0], types[1]);
    CHECK_THROWS_AS(PhonemeTaxonomy{types}, ValidationError);
  }
  SUBCASE("different cardinality changes the hash") {
    types[0].cardinality = 6;
    CHECK(PhonemeTaxonomy{types}.hash() != build_taxonomy().hash());
  }
}
