// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hmrs {

enum class Errc {
  InvalidArgument,
  DimensionMismatch,
  EmptyDataset,
  MalformedFile,
  ShapeMismatch,
  CountMismatch,
  OutOfBounds,
  EmptyTraceSet,
  MissingClassBank,
  LengthMismatch,
  EmptySubset,
  GridMismatch,
  SubsetLargerThanDataset,
  EmptySample,
  Io,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace hmrs
