// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "hmrs/transforms.hpp"

namespace hmrs {

/// Coverage and kill ratio are maximised, similarity minimised. `feasible`
/// is the uncertainty-profile validity verdict.
struct ObjectiveVector {
  double coverage = 0.0;
  double similarity = 0.0;
  double kill_ratio = 0.0;
  bool feasible = false;

  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

/// A candidate set of relations: a rooted tree whose root-to-leaf paths are
/// the chains.
struct Individual {
  std::vector<HmrChain> chains;
  std::optional<ObjectiveVector> objectives;

  bool is_identity() const noexcept {
    for (const auto& c : chains) {
      if (!c.is_identity()) return false;
    }
    return true;
  }

  friend bool operator==(const Individual&, const Individual&) = default;
};

}  // namespace hmrs
