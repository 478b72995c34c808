// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/digits.hpp"

#include <array>
#include <cmath>
#include <string_view>

#include "hmrs/rng.hpp"

namespace hmrs {

namespace {

using Glyph = std::array<std::string_view, kDigitSide>;

constexpr std::array<Glyph, 10> kGlyphs = {{
    {"........", "..####..", ".#....#.", ".#....#.", ".#....#.", ".#....#.", "..####..", "........"},
    {"........", "...##...", "..###...", "...##...", "...##...", "...##...", "..####..", "........"},
    {"........", "..####..", ".#....#.", ".....#..", "....#...", "...#....", ".######.", "........"},
    {"........", ".#####..", "......#.", "..####..", "......#.", "......#.", ".#####..", "........"},
    {"........", "....##..", "...#.#..", "..#..#..", ".######.", ".....#..", ".....#..", "........"},
    {"........", ".######.", ".#......", ".#####..", "......#.", "......#.", ".#####..", "........"},
    {"........", "..####..", ".#......", ".#####..", ".#....#.", ".#....#.", "..####..", "........"},
    {"........", ".######.", "......#.", ".....#..", "....#...", "...#....", "...#....", "........"},
    {"........", "..####..", ".#....#.", "..####..", ".#....#.", ".#....#.", "..####..", "........"},
    {"........", "..####..", ".#....#.", ".#....#.", "..#####.", "......#.", "..####..", "........"},
}};

double glyph_at(const Glyph& g, long y, long x) {
  const long n = static_cast<long>(kDigitSide);
  if (y < 0 || x < 0 || y >= n || x >= n) return 0.0;
  return g[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == '#' ? 1.0 : 0.0;
}

double sample_bilinear(const Glyph& g, double y, double x) {
  const double fy = std::floor(y), fx = std::floor(x);
  const long y0 = static_cast<long>(fy), x0 = static_cast<long>(fx);
  const double ty = y - fy, tx = x - fx;
  return (1 - ty) * ((1 - tx) * glyph_at(g, y0, x0) + tx * glyph_at(g, y0, x0 + 1)) +
         ty * ((1 - tx) * glyph_at(g, y0 + 1, x0) + tx * glyph_at(g, y0 + 1, x0 + 1));
}

}  // namespace

Dataset synthetic_digits(std::size_t n, std::uint64_t seed) {
  Dataset data;
  data.num_classes = kGlyphs.size();
  data.images.reserve(n);
  data.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, {i}));
    const std::size_t label = i % kGlyphs.size();
    const Glyph& glyph = kGlyphs[label];
    const double gain = rng.uniform(0.6, 1.0);
    const double dy = rng.uniform(-1.0, 1.0);
    const double dx = rng.uniform(-1.0, 1.0);
    const double angle = rng.uniform(-0.15, 0.15);
    const double zoom = rng.uniform(0.9, 1.1);
    const double thickness = rng.uniform(0.0, 0.35);
    const double ca = std::cos(angle) / zoom, sa = std::sin(angle) / zoom;
    const double centre = (static_cast<double>(kDigitSide) - 1.0) / 2.0;

    Image img(kDigitSide, kDigitSide, 1);
    for (std::size_t y = 0; y < kDigitSide; ++y) {
      for (std::size_t x = 0; x < kDigitSide; ++x) {
        // Inverse map from output pixel to glyph coordinates.
        const double oy = static_cast<double>(y) - centre - dy;
        const double ox = static_cast<double>(x) - centre - dx;
        const double sy = centre + ca * oy - sa * ox;
        const double sx = centre + sa * oy + ca * ox;
        double v = sample_bilinear(glyph, sy, sx);
        // Cheap stroke thickening: blend in the 4-neighbourhood maximum.
        double neighbour = 0.0;
        neighbour = std::max(neighbour, sample_bilinear(glyph, sy - 1, sx));
        neighbour = std::max(neighbour, sample_bilinear(glyph, sy + 1, sx));
        neighbour = std::max(neighbour, sample_bilinear(glyph, sy, sx - 1));
        neighbour = std::max(neighbour, sample_bilinear(glyph, sy, sx + 1));
        v = std::max(v, thickness * neighbour);
        img.at(y, x) = gain * v + 0.04 * rng.normal();
      }
    }
    img.clamp();
    data.images.push_back(std::move(img));
    data.labels.push_back(label);
  }
  return data;
}

}  // namespace hmrs
