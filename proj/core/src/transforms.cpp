// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/transforms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "hmrs/error.hpp"

namespace hmrs {

namespace {

constexpr std::size_t index_of(TransformKind kind) noexcept { return static_cast<std::size_t>(kind); }

// src = centre + m * (dst - centre)
struct InverseAffine {
  double m00, m01, m10, m11;
};

double pixel_or_zero(const Image& img, long y, long x, std::size_t c) {
  if (y < 0 || x < 0 || y >= static_cast<long>(img.height) || x >= static_cast<long>(img.width)) {
    return 0.0;
  }
  return img.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x), c);
}

Image warp(const Image& src, const InverseAffine& m) {
  Image out(src.height, src.width, src.channels);
  const double cy = (static_cast<double>(src.height) - 1.0) / 2.0;
  const double cx = (static_cast<double>(src.width) - 1.0) / 2.0;
  for (std::size_t y = 0; y < src.height; ++y) {
    for (std::size_t x = 0; x < src.width; ++x) {
      const double dy = static_cast<double>(y) - cy;
      const double dx = static_cast<double>(x) - cx;
      const double sx = cx + (m.m00 * dx + m.m01 * dy);
      const double sy = cy + (m.m10 * dx + m.m11 * dy);
      const double fx = std::floor(sx), fy = std::floor(sy);
      const long x0 = static_cast<long>(fx), y0 = static_cast<long>(fy);
      const double tx = sx - fx, ty = sy - fy;
      for (std::size_t c = 0; c < src.channels; ++c) {
        const double top = (1.0 - tx) * pixel_or_zero(src, y0, x0, c) + tx * pixel_or_zero(src, y0, x0 + 1, c);
        const double bottom =
            (1.0 - tx) * pixel_or_zero(src, y0 + 1, x0, c) + tx * pixel_or_zero(src, y0 + 1, x0 + 1, c);
        out.at(y, x, c) = (1.0 - ty) * top + ty * bottom;
      }
    }
  }
  return out;
}

Image translate(const Image& src, double dx_param, double dy_param) {
  const long dx = std::lround(dx_param);
  const long dy = std::lround(dy_param);
  Image out(src.height, src.width, src.channels);
  for (std::size_t y = 0; y < src.height; ++y) {
    for (std::size_t x = 0; x < src.width; ++x) {
      for (std::size_t c = 0; c < src.channels; ++c) {
        out.at(y, x, c) = pixel_or_zero(src, static_cast<long>(y) - dy, static_cast<long>(x) - dx, c);
      }
    }
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  const long radius = static_cast<long>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (long i = -radius; i <= radius; ++i) {
    const double v = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

// Convolves along x (horizontal = true) or y with zero padding.
Image blur_axis(const Image& src, double sigma, bool horizontal) {
  if (sigma <= 0.0) return src;
  const auto kernel = gaussian_kernel(sigma);
  const long radius = static_cast<long>(kernel.size() / 2);
  Image out(src.height, src.width, src.channels);
  for (std::size_t y = 0; y < src.height; ++y) {
    for (std::size_t x = 0; x < src.width; ++x) {
      for (std::size_t c = 0; c < src.channels; ++c) {
        double acc = 0.0;
        for (long k = -radius; k <= radius; ++k) {
          const long sy = static_cast<long>(y) + (horizontal ? 0 : k);
          const long sx = static_cast<long>(x) + (horizontal ? k : 0);
          acc += kernel[static_cast<std::size_t>(k + radius)] * pixel_or_zero(src, sy, sx, c);
        }
        out.at(y, x, c) = acc;
      }
    }
  }
  return out;
}

std::string hex_bits(double v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
  return buf;
}

}  // namespace

std::string_view kind_name(TransformKind kind) noexcept {
  switch (kind) {
    case TransformKind::Rotation: return "rotation";
    case TransformKind::Translation: return "translation";
    case TransformKind::Scale: return "scale";
    case TransformKind::Shear: return "shear";
    case TransformKind::Blur: return "blur";
    case TransformKind::Contrast: return "contrast";
  }
  return "unknown";
}

std::optional<TransformKind> parse_kind(std::string_view name) noexcept {
  for (TransformKind kind : kTransformKinds) {
    if (kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

TransformSpec identity_spec(TransformKind kind) {
  switch (kind) {
    case TransformKind::Scale: return {kind, {1.0, 1.0}, true};
    case TransformKind::Contrast: return {kind, {1.0, 0.0}, true};
    default: return {kind, {0.0, 0.0}, true};
  }
}

BoundsTable::BoundsTable() {
  ranges_[index_of(TransformKind::Rotation)] = {Interval{-10.0, 10.0}, Interval{}};
  ranges_[index_of(TransformKind::Translation)] = {Interval{-2.0, 2.0}, Interval{-2.0, 2.0}};
  ranges_[index_of(TransformKind::Scale)] = {Interval{0.9, 1.1}, Interval{0.9, 1.1}};
  ranges_[index_of(TransformKind::Shear)] = {Interval{-0.1, 0.1}, Interval{-0.1, 0.1}};
  ranges_[index_of(TransformKind::Blur)] = {Interval{0.0, 1.5}, Interval{0.0, 1.5}};
  ranges_[index_of(TransformKind::Contrast)] = {Interval{1.0, 2.0}, Interval{}};
}

const BoundsTable& BoundsTable::defaults() {
  static const BoundsTable table;
  return table;
}

const Interval& BoundsTable::get(TransformKind kind, std::size_t param) const {
  require(param < param_count(kind), Errc::InvalidArgument,
          std::string(kind_name(kind)) + " has no parameter " + std::to_string(param));
  return ranges_[index_of(kind)][param];
}

void BoundsTable::set(TransformKind kind, std::size_t param, Interval range) {
  require(param < param_count(kind), Errc::InvalidArgument,
          std::string(kind_name(kind)) + " has no parameter " + std::to_string(param));
  require(std::isfinite(range.lo) && std::isfinite(range.hi) && range.lo <= range.hi,
          Errc::InvalidArgument, std::string(kind_name(kind)) + " bounds must satisfy lo <= hi");
  if (kind == TransformKind::Blur) {
    require(range.lo >= 0.0, Errc::InvalidArgument, "blur sigma cannot be negative");
  }
  if (kind == TransformKind::Scale) {
    require(range.lo > 0.0, Errc::InvalidArgument, "scale factors must be positive");
  }
  ranges_[index_of(kind)][param] = range;
}

bool BoundsTable::contains(const TransformSpec& spec) const noexcept {
  for (std::size_t p = 0; p < param_count(spec.kind); ++p) {
    if (!ranges_[index_of(spec.kind)][p].contains(spec.params[p])) return false;
  }
  return true;
}

void BoundsTable::check(const TransformSpec& spec) const {
  for (std::size_t p = 0; p < param_count(spec.kind); ++p) {
    const Interval& r = ranges_[index_of(spec.kind)][p];
    if (!r.contains(spec.params[p])) {
      std::ostringstream msg;
      msg << kind_name(spec.kind) << " param " << p << " = " << spec.params[p] << " outside ["
          << r.lo << ", " << r.hi << "]";
      throw Error(Errc::OutOfBounds, msg.str());
    }
  }
}

bool HmrChain::is_identity() const noexcept {
  for (const TransformSpec& n : nodes) {
    if (n.active) return false;
  }
  return true;
}

std::string chain_key(const HmrChain& chain) {
  std::string key;
  for (const TransformSpec& n : chain.nodes) {
    key += kind_name(n.kind);
    key += n.active ? '+' : '-';
    key += hex_bits(n.params[0]);
    key += ':';
    key += hex_bits(n.params[1]);
    key += ';';
  }
  return key;
}

std::string describe(const TransformSpec& spec) {
  std::ostringstream out;
  out << kind_name(spec.kind) << '(' << spec.params[0];
  if (param_count(spec.kind) == 2) out << ", " << spec.params[1];
  out << ')';
  if (!spec.active) out << "[off]";
  return out.str();
}

std::string describe(const HmrChain& chain) {
  std::string out = "[";
  for (std::size_t i = 0; i < chain.nodes.size(); ++i) {
    if (i) out += " -> ";
    out += describe(chain.nodes[i]);
  }
  return out + "]";
}

Image apply(const TransformSpec& spec, const Image& image, const BoundsTable& bounds) {
  image.validate();
  if (!spec.active) return image;
  bounds.check(spec);
  const auto [a, b] = spec.params;
  Image out;
  switch (spec.kind) {
    case TransformKind::Rotation: {
      const double theta = a * std::numbers::pi / 180.0;
      const double c = std::cos(theta), s = std::sin(theta);
      out = warp(image, {c, s, -s, c});
      break;
    }
    case TransformKind::Translation:
      out = translate(image, a, b);
      break;
    case TransformKind::Scale:
      require(a > 0.0 && b > 0.0, Errc::InvalidArgument, "scale factors must be positive");
      out = warp(image, {1.0 / a, 0.0, 0.0, 1.0 / b});
      break;
    case TransformKind::Shear: {
      const double det = 1.0 - a * b;
      require(std::abs(det) > 1e-9, Errc::InvalidArgument, "shear matrix is singular");
      out = warp(image, {1.0 / det, -a / det, -b / det, 1.0 / det});
      break;
    }
    case TransformKind::Blur:
      require(a >= 0.0 && b >= 0.0, Errc::InvalidArgument, "blur sigma cannot be negative");
      out = blur_axis(blur_axis(image, a, true), b, false);
      break;
    case TransformKind::Contrast:
      out = image;
      for (double& v : out.data) v *= a;
      break;
  }
  out.clamp();
  return out;
}

Image apply_chain(const HmrChain& chain, const Image& image, const BoundsTable& bounds) {
  require(!chain.nodes.empty(), Errc::InvalidArgument, "chain must hold at least one relation");
  Image current = image;
  for (const TransformSpec& node : chain.nodes) {
    if (node.active) current = apply(node, current, bounds);
  }
  return current;
}

TransformSpec sample_spec(std::optional<TransformKind> kind, const BoundsTable& bounds, Rng& rng) {
  TransformSpec spec;
  spec.kind = kind ? *kind : kTransformKinds[rng.below(kTransformKinds.size())];
  spec.active = true;
  spec.params = {0.0, 0.0};
  for (std::size_t p = 0; p < param_count(spec.kind); ++p) {
    const Interval& r = bounds.get(spec.kind, p);
    spec.params[p] = std::clamp(rng.uniform(r.lo, r.hi), r.lo, r.hi);
  }
  return spec;
}

}  // namespace hmrs
