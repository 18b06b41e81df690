// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "kernels/kernels.hpp"

namespace obliv::kernels {
namespace {

void quantize(const float* values, const float* borders, std::size_t n_borders,
              std::uint8_t* out) {
  std::uint32_t count = 0;
  for (std::size_t b = 0; b < n_borders; ++b) count += values[0] > borders[b];
  *out = static_cast<std::uint8_t>(count);
}

void leaf_indices(const std::uint8_t* const* rows, const std::uint8_t* ordinals, int depth,
                  std::size_t n, std::uint8_t* out) {
  for (std::size_t o = 0; o < n; ++o) {
    unsigned index = 0;
    for (int d = 0; d < depth; ++d) {
      index |= static_cast<unsigned>(rows[d][o] > ordinals[d]) << d;
    }
    out[o] = static_cast<std::uint8_t>(index);
  }
}

void condition_bits(const std::uint8_t* row, std::uint8_t ordinal, std::size_t n,
                    std::uint8_t* out) {
  for (std::size_t o = 0; o < n; ++o) out[o] = row[o] > ordinal;
}

void naive64(const std::uint8_t* indices, const double* leaves, std::size_t n, double* acc) {
  for (std::size_t o = 0; o < n; ++o) acc[o] += leaves[indices[o]];
}

void naive16(const std::uint8_t* indices, const Half* leaves, std::size_t n, float* acc) {
  for (std::size_t o = 0; o < n; ++o) acc[o] += half_to_float(leaves[indices[o]]);
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet kSet{
      .width = VectorWidth::Scalar,
      .quantize_group = 1,
      .index_group = 1,
      .naive64_group = 1,
      .naive16_group = 1,
      .gather64_group = 0,
      .permute64_group = 0,
      .permute16_group = 0,
      .quantize = quantize,
      .leaf_indices = leaf_indices,
      .condition_bits = condition_bits,
      .naive64 = naive64,
      .naive16 = naive16,
      .gather64 = nullptr,
      .permute64 = nullptr,
      .permute16 = nullptr,
  };
  return kSet;
}

const KernelSet& kernel_table(VectorWidth width) {
  switch (width) {
    case VectorWidth::W128:
      return sse_kernels();
    case VectorWidth::W256:
      return avx2_kernels();
    case VectorWidth::W512:
      return avx512_kernels();
    case VectorWidth::Scalar:
      break;
  }
  return scalar_kernels();
}

const KernelSet& kernels_for(VectorWidth width) {
  if (!host_supports(width)) {
    throw ConfigError(std::string("vector width ") + std::string(to_string(width)) +
                      " is not supported on this host");
  }
  return kernel_table(width);
}

}  // namespace obliv::kernels
