// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include <json.hpp>

#include "signphon/errors.hpp"
#include "signphon/rng.hpp"

namespace signphon {
namespace {

using Tax = PhonemeTaxonomy;
constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double frac(double v) { return v - std::floor(v); }

// Deterministic value in [0, 1) keyed by integers; used for per-class
// geometry so the same class always looks the same.
double keyed_unit(std::uint64_t a, std::uint64_t b) {
  return static_cast<double>(splitmix64(a * 0x9e3779b97f4a7c15ULL + b) >> 11) *
         0x1.0p-53;
}

// Anchors of the five Major Location regions (head, body, arm, hand,
// neutral space) in image coordinates.
constexpr std::array<Vec2, 5> kMajorAnchors{{
    {0.46, 0.17}, {0.47, 0.50}, {0.62, 0.50}, {0.56, 0.66}, {0.36, 0.66}}};

Vec2 minor_offset(int c) {
  const double phi = 2.0 * kPi * frac(c * 0.6180339887498949);
  const double r = 0.025 + 0.035 * frac(c * 0.7548776662466927);
  return {r * std::cos(phi), r * std::sin(phi)};
}

Vec2 second_minor_drift(int c) {
  const double phi = 2.0 * kPi * frac(c * 0.5698402909980532 + 0.25);
  const double r = 0.03 + 0.04 * frac(c * 0.3247179572447460);
  return {r * std::cos(phi), r * std::sin(phi)};
}

double triangle(double u) { return 1.0 - 4.0 * std::abs(frac(u) - 0.5); }

// Path Movement templates on s in [0, 1], amplitude `a`.
Vec2 path_point(int path, double s, double a) {
  switch (path) {
    case 1: return {0.0, 0.0};                                   // hold
    case 2: return {a * (2 * s - 1), 0.0};                       // horizontal
    case 3: return {0.0, a * (2 * s - 1)};                       // vertical
    case 4: return {a * std::cos(kPi * (1 - s)), -0.8 * a * std::sin(kPi * s)};
    case 5: return {a * std::cos(2 * kPi * s), a * std::sin(2 * kPi * s)};
    case 6: return {a * (2 * s - 1), 0.5 * a * triangle(3 * s)};  // zigzag
    case 7: {                                                     // cross
      if (s < 0.5) {
        const double u = 2 * s;
        return {a * (2 * u - 1), a * (2 * u - 1)};
      }
      const double u = 2 * s - 1;
      return {a * (1 - 2 * u), a * (2 * u - 1)};
    }
    default: return {a * (2 * s - 1), 0.6 * a * std::sin(2 * kPi * s)};  // S
  }
}

struct HandConfig {
  int selected = 1;
  int flexion = 1;
  int spread = 1;
  int spread_change = 1;
  int thumb_position = 1;
  int thumb_contact = 1;
  std::uint64_t jitter_key = 0;
};

// Extended-finger masks over (index, middle, ring, pinky) per Selected
// Fingers class.
constexpr std::array<std::array<bool, 4>, 8> kSelectedMasks{{
    {true, false, false, false},
    {true, true, false, false},
    {true, true, true, false},
    {true, true, true, true},
    {false, true, false, false},
    {false, false, false, true},
    {true, false, false, true},
    {false, false, false, false},
}};

// Writes the 10 joints of one hand. `mirror` flips the local x axis (left
// hand). `progress` in [0, 1] animates spread change.
void place_hand(std::array<Vec2, joint::kPerHand>& out, Vec2 wrist,
                double angle, const HandConfig& hc, double progress,
                bool mirror) {
  constexpr double kScale = 0.05;
  const double sx = mirror ? -1.0 : 1.0;
  auto to_image = [&](Vec2 local) {
    return wrist + rotate({local.x * sx * kScale, local.y * kScale}, angle);
  };

  static constexpr std::array<Vec2, 4> kBases{
      {{-0.25, -0.9}, {0.0, -0.95}, {0.22, -0.9}, {0.40, -0.80}}};
  static constexpr std::array<double, 4> kLengths{0.9, 1.0, 0.9, 0.75};

  double spread = std::array{0.05, 0.2, 0.4}[hc.spread - 1];
  if (hc.spread_change == 2) spread += 0.3 * progress;
  if (hc.spread_change == 3) spread *= 1.0 - 0.8 * progress;
  const double bend = (hc.flexion - 1) / 7.0;
  const auto& mask = kSelectedMasks[hc.selected - 1];

  std::array<Vec2, 4> tips{};
  for (int f = 0; f < 4; ++f) {
    Vec2 tip;
    if (mask[f]) {
      const double fan = (f - 1.5) * spread;
      const double len = kLengths[f] * (1.0 - 0.6 * bend);
      tip = kBases[f] + Vec2{std::sin(fan), -std::cos(fan)} * len +
            Vec2{0.0, 0.3 * bend};
    } else {
      tip = kBases[f] + Vec2{0.0, 0.25};
    }
    const double jx = keyed_unit(hc.jitter_key, 2 * f) - 0.5;
    const double jy = keyed_unit(hc.jitter_key, 2 * f + 1) - 0.5;
    tips[f] = tip + Vec2{0.24 * jx, 0.24 * jy};
  }

  const Vec2 thumb_base{-0.35, -0.35};
  Vec2 thumb_tip = hc.thumb_position == 1 ? thumb_base + Vec2{-0.55, -0.2}
                                          : thumb_base + Vec2{0.45, -0.25};
  if (hc.thumb_contact == 2) thumb_tip = tips[0];
  if (hc.thumb_contact == 3) thumb_tip = tips[1];

  using namespace joint;
  out[kWrist] = wrist;
  out[kThumbBase] = to_image(thumb_base);
  out[kThumbTip] = to_image(thumb_tip);
  out[kIndexBase] = to_image(kBases[0]);
  out[kIndexTip] = to_image(tips[0]);
  out[kMiddleBase] = to_image(kBases[1]);
  out[kMiddleTip] = to_image(tips[1]);
  out[kRingBase] = to_image(kBases[2]);
  out[kRingTip] = to_image(tips[2]);
  out[kPinkyTip] = to_image(tips[3]);
}

// Nondominant handshape classes have no child annotations; their geometry
// is derived from the class index.
HandConfig nondominant_hand_config(int handshape) {
  const int n = handshape - 1;
  HandConfig hc;
  hc.selected = n % 8 + 1;
  hc.flexion = (n / 8) % 8 + 1;
  hc.spread = n % 3 + 1;
  hc.thumb_position = (n / 3) % 2 + 1;
  hc.jitter_key = 1000 + static_cast<std::uint64_t>(handshape);
  return hc;
}

PoseSequence render(const SynthesisSpec& spec, const PhonemeLabels& y, Rng& rng) {
  const std::size_t frames = spec.frames;
  const auto label = [&](TypeId id) { return y[id - 1]; };

  // Signer and performance variation.
  const Vec2 shift{rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02)};
  const double body_scale = rng.uniform(0.95, 1.05);
  const double amplitude = 0.07 * rng.uniform(0.85, 1.15);
  const double onset = rng.uniform(0.0, 3.0);
  const double duration = (static_cast<double>(frames) - 1.0 - onset) *
                          rng.uniform(0.85, 1.0);

  const bool repeated = label(Tax::kRepeatedMovement) == 2;
  std::vector<double> progress(frames), phase(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double r = std::clamp((t - onset) / duration, 0.0, 1.0);
    progress[t] = r;
    phase[t] = 0.5 * (1.0 - std::cos((repeated ? 3.0 : 1.0) * kPi * r));
  }

  // Dominant wrist trajectory relative to the location point.
  const Vec2 location = kMajorAnchors[label(Tax::kMajorLocation) - 1] +
                        minor_offset(label(Tax::kMinorLocation));
  const Vec2 drift = second_minor_drift(label(Tax::kSecondMinorLocation));
  std::vector<Vec2> rel(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    rel[t] = drift * progress[t] +
             path_point(label(Tax::kPathMovement), phase[t], amplitude);
  }
  Vec2 contact_shift{-0.06, 0.03};
  if (label(Tax::kContact) == 2) {
    std::size_t closest = 0;
    for (std::size_t t = 1; t < frames; ++t) {
      if (rel[t].norm() < rel[closest].norm()) closest = t;
    }
    contact_shift = rel[closest] * -1.0;
  }
  std::vector<Vec2> wrist(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    wrist[t] = location + rel[t] + contact_shift;
  }

  HandConfig dominant;
  dominant.selected = label(Tax::kSelectedFingers);
  dominant.flexion = label(Tax::kFlexion);
  dominant.spread = label(Tax::kSpread);
  dominant.spread_change = label(Tax::kSpreadChange);
  dominant.thumb_position = label(Tax::kThumbPosition);
  dominant.thumb_contact = label(Tax::kThumbContact);
  dominant.jitter_key = static_cast<std::uint64_t>(label(Tax::kHandshape));
  const HandConfig nondominant =
      nondominant_hand_config(label(Tax::kNondominantHandshape));

  const int sign_type = label(Tax::kSignType);
  const bool twist = label(Tax::kWristTwist) == 2;

  PoseSequence pose(frames, joint::kCount);
  std::array<Vec2, joint::kCount> pts{};
  std::array<Vec2, joint::kPerHand> hand{};
  for (std::size_t t = 0; t < frames; ++t) {
    using namespace joint;
    pts[kNose] = {0.50, 0.16};
    pts[kNeck] = {0.50, 0.30};
    pts[kChest] = {0.50, 0.52};
    pts[kRightShoulder] = {0.38, 0.32};
    pts[kLeftShoulder] = {0.62, 0.32};

    const double angle = twist ? 0.5 * std::sin(4.0 * kPi * progress[t]) : 0.0;
    place_hand(hand, wrist[t], angle, dominant, progress[t], false);
    std::copy(hand.begin(), hand.end(), pts.begin() + kDominantHand);

    Vec2 nd_wrist;
    const HandConfig* nd_shape = &nondominant;
    switch (sign_type) {
      case 1: nd_wrist = {0.64, 0.86}; break;
      case 2:
        nd_wrist = {1.0 - wrist[t].x, wrist[t].y};
        nd_shape = &dominant;
        break;
      case 3: {
        const Vec2 w = wrist[(t + frames / 2) % frames];
        nd_wrist = {1.0 - w.x, w.y};
        nd_shape = &dominant;
        break;
      }
      case 4:
        nd_wrist = {0.57, 0.66};
        nd_shape = &dominant;
        break;
      case 5: nd_wrist = {0.57, 0.66}; break;
      default: nd_wrist = Vec2{0.60, 0.70} + Vec2{0.0, -0.06 * progress[t]}; break;
    }
    place_hand(hand, nd_wrist, sign_type == 2 ? -angle : 0.0, *nd_shape,
               progress[t], true);
    std::copy(hand.begin(), hand.end(), pts.begin() + kNondominantHand);

    pts[kRightElbow] = (pts[kRightShoulder] + wrist[t]) * 0.5 + Vec2{-0.05, 0.06};
    pts[kLeftElbow] = (pts[kLeftShoulder] + nd_wrist) * 0.5 + Vec2{0.05, 0.06};

    for (int v = 0; v < kCount; ++v) {
      const Vec2 centred = (pts[v] - Vec2{0.5, 0.5}) * body_scale;
      const Vec2 p = Vec2{0.5, 0.5} + centred + shift;
      const double conf_drop = v < kDominantHand ? 0.05 : 0.15;
      const double x = p.x + spec.noise * rng.normal();
      const double yv = p.y + spec.noise * rng.normal();
      const double conf = 1.0 - conf_drop * rng.uniform();
      auto quantize = [](double value) {
        return std::round(std::clamp(value, 0.0, 1.0) * 1e5) / 1e5;
      };
      pose.at(t, v, 0) = quantize(x);
      pose.at(t, v, 1) = quantize(yv);
      pose.at(t, v, 2) = quantize(conf);
    }
  }
  return pose;
}

std::vector<TypeId> derived_types(const PhonemeTaxonomy& taxonomy) {
  auto out = taxonomy.children(Tax::kHandshape);
  out.push_back(Tax::kMajorLocation);
  return out;
}

int child_value(const HandshapeFeatures& f, TypeId child) {
  switch (child) {
    case Tax::kSpread: return f.spread;
    case Tax::kFlexion: return f.flexion;
    case Tax::kThumbPosition: return f.thumb_position;
    case Tax::kSelectedFingers: return f.selected_fingers;
    case Tax::kSpreadChange: return f.spread_change;
    default: throw RangeError("type " + std::to_string(child) + " is not a Handshape child");
  }
}

int& child_value(HandshapeFeatures& f, TypeId child) {
  switch (child) {
    case Tax::kSpread: return f.spread;
    case Tax::kFlexion: return f.flexion;
    case Tax::kThumbPosition: return f.thumb_position;
    case Tax::kSelectedFingers: return f.selected_fingers;
    case Tax::kSpreadChange: return f.spread_change;
    default: throw RangeError("type " + std::to_string(child) + " is not a Handshape child");
  }
}

// `count` entries cycling through `values`, shuffled.
std::vector<int> balanced_column(const std::vector<int>& values,
                                 std::size_t count, Rng& rng) {
  std::vector<int> order = values;
  rng.shuffle(std::span(order));
  std::vector<int> col(count);
  for (std::size_t i = 0; i < count; ++i) col[i] = order[i % order.size()];
  rng.shuffle(std::span(col));
  return col;
}

}  // namespace

SynthesisSpec default_synthesis_spec(const PhonemeTaxonomy& taxonomy,
                                     std::uint64_t seed,
                                     std::size_t active_per_type) {
  if (active_per_type == 0) throw ConfigError("active_per_type must be >= 1");
  SynthesisSpec spec;
  spec.seed = seed;
  Rng rng(derive_seed(seed, 0x5eed));
  for (const auto& t : taxonomy.types()) {
    std::vector<int> all(static_cast<std::size_t>(t.cardinality));
    for (int c = 0; c < t.cardinality; ++c) all[c] = c + 1;
    rng.shuffle(std::span(all));
    all.resize(std::min(all.size(), active_per_type));
    std::sort(all.begin(), all.end());
    spec.active_classes[t.id - 1] = std::move(all);
  }

  const auto& minors = spec.active_classes[Tax::kMinorLocation - 1];
  const auto majors = balanced_column(spec.active_classes[Tax::kMajorLocation - 1],
                                      minors.size(), rng);
  for (std::size_t i = 0; i < minors.size(); ++i) {
    spec.location_map[minors[i]] = majors[i];
  }

  const auto& handshapes = spec.active_classes[Tax::kHandshape - 1];
  for (int hs : handshapes) spec.handshape_map[hs] = {};
  for (TypeId child : taxonomy.children(Tax::kHandshape)) {
    const auto col = balanced_column(spec.active_classes[child - 1],
                                     handshapes.size(), rng);
    for (std::size_t i = 0; i < handshapes.size(); ++i) {
      child_value(spec.handshape_map[handshapes[i]], child) = col[i];
    }
  }

  // Derived types are active exactly where the maps point.
  auto image = [](auto&& values) {
    std::set<int> s(values.begin(), values.end());
    return std::vector<int>(s.begin(), s.end());
  };
  std::vector<int> major_image;
  for (const auto& [minor, major] : spec.location_map) major_image.push_back(major);
  spec.active_classes[Tax::kMajorLocation - 1] = image(major_image);
  for (TypeId child : taxonomy.children(Tax::kHandshape)) {
    std::vector<int> values;
    for (const auto& [hs, f] : spec.handshape_map) values.push_back(child_value(f, child));
    spec.active_classes[child - 1] = image(values);
  }
  return spec;
}

void validate_synthesis_spec(const SynthesisSpec& spec,
                             const PhonemeTaxonomy& taxonomy) {
  if (spec.gloss_count == 0) throw ValidationError("gloss_count must be >= 1");
  if (spec.frames == 0) throw ValidationError("frames must be >= 1");
  if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) {
    throw ValidationError("noise must be a finite non-negative number");
  }
  for (const auto& t : taxonomy.types()) {
    const auto& active = spec.active_classes[t.id - 1];
    if (active.empty() || active.size() > static_cast<std::size_t>(t.cardinality)) {
      throw ValidationError(t.name + ": active subset size " +
                            std::to_string(active.size()) + " outside [1, " +
                            std::to_string(t.cardinality) + "]");
    }
    std::set<int> seen;
    for (int c : active) {
      if (c < 1 || c > t.cardinality || !seen.insert(c).second) {
        throw ValidationError(t.name + ": invalid or duplicate active class " +
                              std::to_string(c));
      }
    }
  }
  auto is_active = [&](TypeId id, int c) {
    const auto& a = spec.active_classes[id - 1];
    return std::find(a.begin(), a.end(), c) != a.end();
  };

  const auto& handshapes = spec.active_classes[Tax::kHandshape - 1];
  if (spec.handshape_map.size() != handshapes.size()) {
    throw ValidationError("handshape_map must cover exactly the active Handshape classes");
  }
  for (int hs : handshapes) {
    const auto it = spec.handshape_map.find(hs);
    if (it == spec.handshape_map.end()) {
      throw ValidationError("handshape_map has no entry for Handshape " + std::to_string(hs));
    }
    for (TypeId child : taxonomy.children(Tax::kHandshape)) {
      const int v = child_value(it->second, child);
      if (!is_active(child, v)) {
        throw ValidationError("handshape_map[" + std::to_string(hs) + "]: " +
                              taxonomy.type(child).name + " value " +
                              std::to_string(v) + " is not an active class");
      }
    }
  }
  const auto& minors = spec.active_classes[Tax::kMinorLocation - 1];
  if (spec.location_map.size() != minors.size()) {
    throw ValidationError("location_map must cover exactly the active Minor Location classes");
  }
  for (int minor : minors) {
    const auto it = spec.location_map.find(minor);
    if (it == spec.location_map.end()) {
      throw ValidationError("location_map has no entry for Minor Location " +
                            std::to_string(minor));
    }
    if (!is_active(Tax::kMajorLocation, it->second)) {
      throw ValidationError("location_map[" + std::to_string(minor) +
                            "] = " + std::to_string(it->second) +
                            " is not an active Major Location class");
    }
  }
}

std::vector<PhonemeLabels> gloss_inventory(const SynthesisSpec& spec,
                                           const PhonemeTaxonomy& taxonomy) {
  validate_synthesis_spec(spec, taxonomy);
  const auto derived = derived_types(taxonomy);
  std::vector<TypeId> free;
  for (const auto& t : taxonomy.types()) {
    if (std::find(derived.begin(), derived.end(), t.id) == derived.end()) {
      free.push_back(t.id);
    }
  }
  const std::size_t g = spec.gloss_count;
  Rng rng(derive_seed(spec.seed, 0x610557));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<PhonemeLabels> glosses(g);
    for (TypeId id : free) {
      const auto col = balanced_column(spec.active_classes[id - 1], g, rng);
      for (std::size_t i = 0; i < g; ++i) glosses[i][id - 1] = col[i];
    }
    for (auto& y : glosses) {
      y[Tax::kMajorLocation - 1] = spec.location_map.at(y[Tax::kMinorLocation - 1]);
      const auto& f = spec.handshape_map.at(y[Tax::kHandshape - 1]);
      for (TypeId child : taxonomy.children(Tax::kHandshape)) {
        y[child - 1] = child_value(f, child);
      }
    }
    std::set<PhonemeLabels> distinct(glosses.begin(), glosses.end());
    if (distinct.size() == g) return glosses;
  }
  throw ValidationError("cannot draw " + std::to_string(g) +
                        " distinct glosses from the active class subsets");
}

std::vector<LabeledExample> synthesize(const SynthesisSpec& spec,
                                       const SkeletonGraph& graph,
                                       const PhonemeTaxonomy& taxonomy) {
  if (graph.joints() != static_cast<std::size_t>(joint::kCount)) {
    throw ValidationError("synthesis requires the 27-joint layout, graph has " +
                          std::to_string(graph.joints()) + " joints");
  }
  const auto glosses = gloss_inventory(spec, taxonomy);
  std::vector<LabeledExample> out;
  out.reserve(spec.example_count);
  for (std::size_t i = 0; i < spec.example_count; ++i) {
    const std::size_t g = i % spec.gloss_count;
    Rng rng(derive_seed(spec.seed, i + 1));
    char id[32];
    std::snprintf(id, sizeof(id), "syn%05zu", i);
    out.push_back({id, render(spec, glosses[g], rng), static_cast<int>(g + 1),
                   glosses[g]});
  }
  return out;
}

std::string synthesis_spec_to_json(const SynthesisSpec& spec) {
  const auto& taxonomy = build_taxonomy();
  nlohmann::ordered_json doc;
  doc["seed"] = spec.seed;
  doc["gloss_count"] = spec.gloss_count;
  doc["example_count"] = spec.example_count;
  doc["frames"] = spec.frames;
  doc["fps"] = spec.fps;
  doc["noise"] = spec.noise;
  nlohmann::ordered_json active;
  for (const auto& t : taxonomy.types()) {
    active[t.identifier] = spec.active_classes[t.id - 1];
  }
  doc["active_classes"] = std::move(active);
  nlohmann::ordered_json hs = nlohmann::ordered_json::object();
  for (const auto& [k, f] : spec.handshape_map) {
    hs[std::to_string(k)] = {{"spread", f.spread},
                             {"flexion", f.flexion},
                             {"thumb_position", f.thumb_position},
                             {"selected_fingers", f.selected_fingers},
                             {"spread_change", f.spread_change}};
  }
  doc["handshape_map"] = std::move(hs);
  nlohmann::ordered_json loc = nlohmann::ordered_json::object();
  for (const auto& [minor, major] : spec.location_map) {
    loc[std::to_string(minor)] = major;
  }
  doc["location_map"] = std::move(loc);
  return doc.dump(2);
}

SynthesisSpec synthesis_spec_from_json(std::string_view json) {
  const auto& taxonomy = build_taxonomy();
  try {
    const auto doc = nlohmann::json::parse(json);
    SynthesisSpec spec;
    spec.seed = doc.at("seed").get<std::uint64_t>();
    spec.gloss_count = doc.at("gloss_count").get<std::size_t>();
    spec.example_count = doc.at("example_count").get<std::size_t>();
    spec.frames = doc.at("frames").get<std::size_t>();
    spec.fps = doc.at("fps").get<double>();
    spec.noise = doc.at("noise").get<double>();
    const auto& active = doc.at("active_classes");
    for (const auto& t : taxonomy.types()) {
      spec.active_classes[t.id - 1] = active.at(t.identifier).get<std::vector<int>>();
    }
    for (const auto& [k, f] : doc.at("handshape_map").items()) {
      spec.handshape_map[std::stoi(k)] = {
          f.at("spread").get<int>(), f.at("flexion").get<int>(),
          f.at("thumb_position").get<int>(), f.at("selected_fingers").get<int>(),
          f.at("spread_change").get<int>()};
    }
    for (const auto& [k, v] : doc.at("location_map").items()) {
      spec.location_map[std::stoi(k)] = v.get<int>();
    }
    return spec;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed synthesis spec: ") + ex.what());
  } catch (const std::invalid_argument&) {
    throw ValidationError("malformed synthesis spec: non-integer map key");
  }
}

}  // namespace signphon
