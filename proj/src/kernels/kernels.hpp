// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

// Per-width kernel tables. Each wide table lives in its own translation
// unit compiled for its instruction set; the dispatcher only hands out a
// table after host_supports() said yes.

#pragma once

#include <cstddef>
#include <cstdint>

#include "obliv/common.hpp"
#include "obliv/half.hpp"

namespace obliv::kernels {

// Buffers passed to the group kernels are cache-line aligned (block rows,
// index vectors, accumulators, leaf tables) unless noted otherwise. Every
// kernel processes n_groups whole groups starting at element 0.
struct KernelSet {
  VectorWidth width;

  // Objects per group for each kernel family.
  std::size_t quantize_group;
  std::size_t index_group;
  std::size_t naive64_group;
  std::size_t naive16_group;
  std::size_t gather64_group;   // 0 when not provided
  std::size_t permute64_group;  // 0 when not provided
  std::size_t permute16_group;  // 0 when not provided

  // values: quantize_group contiguous floats, not necessarily aligned.
  void (*quantize)(const float* values, const float* borders, std::size_t n_borders,
                   std::uint8_t* out);
  // rows[d] / ordinals[d]: quantile row and border ordinal of split d.
  void (*leaf_indices)(const std::uint8_t* const* rows, const std::uint8_t* ordinals,
                       int depth, std::size_t n_groups, std::uint8_t* out);
  // out may be unaligned.
  void (*condition_bits)(const std::uint8_t* row, std::uint8_t ordinal, std::size_t n_groups,
                         std::uint8_t* out);
  void (*naive64)(const std::uint8_t* indices, const double* leaves, std::size_t n_groups,
                  double* acc);
  void (*naive16)(const std::uint8_t* indices, const Half* leaves, std::size_t n_groups,
                  float* acc);
  void (*gather64)(const std::uint8_t* indices, const double* leaves, std::size_t n_groups,
                   double* acc);
  void (*permute64)(const std::uint8_t* indices, const double* leaves, int depth,
                    std::size_t n_groups, double* acc);
  void (*permute16)(const std::uint8_t* indices, const Half* leaves, int depth,
                    std::size_t n_groups, float* acc);
};

const KernelSet& scalar_kernels();
const KernelSet& sse_kernels();
const KernelSet& avx2_kernels();
const KernelSet& avx512_kernels();

// Throws ConfigError when the host cannot run the width.
const KernelSet& kernels_for(VectorWidth width);

// The table without the host check, for its group sizes only; its function
// pointers must not be called unless host_supports(width).
const KernelSet& kernel_table(VectorWidth width);

}  // namespace obliv::kernels
