// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "hmrs/image.hpp"

namespace hmrs {

inline constexpr std::size_t kDigitSide = 8;

/// Synthetic 8x8 grayscale digits (10 classes). Each sample is a glyph
/// template with random stroke gain, a sub-pixel jitter, a mild blur and
/// additive noise. Labels cycle so every class is equally represented.
Dataset synthetic_digits(std::size_t n, std::uint64_t seed);

}  // namespace hmrs
