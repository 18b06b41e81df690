// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/half.hpp"

#include <bit>
#include <cmath>

namespace obliv {

Half half_from_double(double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  const auto sign = static_cast<std::uint16_t>((bits >> 48) & 0x8000u);
  if (std::isnan(value)) return Half{0x7e00};

  const double magnitude = std::fabs(value);
  if (magnitude > kHalfMax) return Half{static_cast<std::uint16_t>(sign | 0x7bffu)};

  // Subnormal range: the value in units of 2^-24 rounded to an integer.
  // Scaling by a power of two is exact, and nearbyint honours the default
  // round-to-nearest-even mode. A result of 1024 is the smallest normal.
  if (magnitude < 0x1p-14) {
    const auto units = static_cast<std::uint16_t>(std::nearbyint(magnitude * 0x1p24));
    return Half{static_cast<std::uint16_t>(sign | units)};
  }

  const int exponent = static_cast<int>((bits >> 52) & 0x7ffu) - 1023;
  const std::uint64_t mantissa = bits & ((std::uint64_t{1} << 52) - 1);
  constexpr int kDrop = 52 - 10;
  constexpr std::uint64_t kHalfway = std::uint64_t{1} << (kDrop - 1);
  std::uint32_t kept = static_cast<std::uint32_t>(mantissa >> kDrop);
  const std::uint64_t rest = mantissa & ((std::uint64_t{1} << kDrop) - 1);
  if (rest > kHalfway || (rest == kHalfway && (kept & 1u))) ++kept;
  // A mantissa carry rolls into the exponent field.
  const std::uint32_t encoded = (static_cast<std::uint32_t>(exponent + 15) << 10) + kept;
  return Half{static_cast<std::uint16_t>(sign | encoded)};
}

float half_to_float(Half h) {
  const std::uint32_t sign = static_cast<std::uint32_t>(h.bits & 0x8000u) << 16;
  const std::uint32_t exponent = (h.bits >> 10) & 0x1fu;
  std::uint32_t mantissa = h.bits & 0x3ffu;

  if (exponent == 0x1f) {
    return std::bit_cast<float>(sign | 0x7f800000u | (mantissa << 13));
  }
  if (exponent == 0) {
    if (mantissa == 0) return std::bit_cast<float>(sign);
    // Normalize the subnormal.
    int shift = 0;
    while ((mantissa & 0x400u) == 0) {
      mantissa <<= 1;
      ++shift;
    }
    mantissa &= 0x3ffu;
    const std::uint32_t e32 = static_cast<std::uint32_t>(127 - 15 + 1 - shift);
    return std::bit_cast<float>(sign | (e32 << 23) | (mantissa << 13));
  }
  return std::bit_cast<float>(sign | ((exponent + 127 - 15) << 23) | (mantissa << 13));
}

}  // namespace obliv
