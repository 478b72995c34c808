// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hmrs/image.hpp"
#include "hmrs/rng.hpp"

namespace hmrs {

enum class TransformKind { Rotation, Translation, Scale, Shear, Blur, Contrast };

inline constexpr std::array<TransformKind, 6> kTransformKinds = {
    TransformKind::Rotation, TransformKind::Translation, TransformKind::Scale,
    TransformKind::Shear,    TransformKind::Blur,        TransformKind::Contrast};

/// Rotation and Contrast take one parameter, the others two.
constexpr std::size_t param_count(TransformKind kind) noexcept {
  return kind == TransformKind::Rotation || kind == TransformKind::Contrast ? 1 : 2;
}

std::string_view kind_name(TransformKind kind) noexcept;
std::optional<TransformKind> parse_kind(std::string_view name) noexcept;

/// One elementary relation. Unused second parameter is kept at 0. An
/// inactive (nullified) spec is the identity.
struct TransformSpec {
  TransformKind kind = TransformKind::Rotation;
  std::array<double, 2> params{0.0, 0.0};
  bool active = true;

  friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

/// Parameters that make `kind` the identity.
TransformSpec identity_spec(TransformKind kind);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Per-kind parameter ranges. Defaults: rotation [-10,10] degrees,
/// translation [-2,2]^2 pixels, scale [0.9,1.1]^2, shear [-0.1,0.1]^2,
/// blur sigma [0,1.5]^2, contrast [1,2].
class BoundsTable {
 public:
  BoundsTable();

  static const BoundsTable& defaults();

  const Interval& get(TransformKind kind, std::size_t param) const;
  /// Throws InvalidArgument when lo > hi or the value is not finite.
  void set(TransformKind kind, std::size_t param, Interval range);

  /// Throws OutOfBounds naming the offending parameter.
  void check(const TransformSpec& spec) const;
  bool contains(const TransformSpec& spec) const noexcept;

  friend bool operator==(const BoundsTable&, const BoundsTable&) = default;

 private:
  std::array<std::array<Interval, 2>, kTransformKinds.size()> ranges_;
};

/// A high-order relation: nodes applied left to right.
struct HmrChain {
  std::vector<TransformSpec> nodes;

  /// True when every node is nullified.
  bool is_identity() const noexcept;
  friend bool operator==(const HmrChain&, const HmrChain&) = default;
};

/// Stable text key, exact in every parameter bit; used for caching.
std::string chain_key(const HmrChain& chain);
std::string describe(const TransformSpec& spec);
std::string describe(const HmrChain& chain);

/// Applies one relation. Geometric kinds use inverse mapping about the image
/// centre with bilinear sampling and a zero border; translation rounds to
/// whole pixels; blur is a separable Gaussian truncated at ceil(3 sigma) with
/// zero padding; contrast scales intensities. The result is clamped to [0,1].
Image apply(const TransformSpec& spec, const Image& image,
            const BoundsTable& bounds = BoundsTable::defaults());

Image apply_chain(const HmrChain& chain, const Image& image,
                  const BoundsTable& bounds = BoundsTable::defaults());

/// Uniform over kinds (unless `kind` is given) and over each interval.
TransformSpec sample_spec(std::optional<TransformKind> kind, const BoundsTable& bounds, Rng& rng);

}  // namespace hmrs
