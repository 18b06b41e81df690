// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace obliv {

// IEEE-754 binary16 stored as its raw bit pattern.
struct Half {
  std::uint16_t bits = 0;

  friend constexpr bool operator==(Half, Half) = default;
};

inline constexpr double kHalfMax = 65504.0;

// Round-to-nearest-even conversion from binary64. Magnitudes beyond the
// largest finite half saturate to +-65504; NaN maps to the canonical quiet
// NaN 0x7e00 (callers reject NaN leaves before getting here).
Half half_from_double(double value);

// Exact widening; every binary16 value is representable in binary32.
float half_to_float(Half h);

inline double half_to_double(Half h) { return half_to_float(h); }

}  // namespace obliv
