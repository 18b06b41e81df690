// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "obliv/common.hpp"
#include "obliv/model.hpp"
#include "obliv/quantizer.hpp"

namespace obliv {

// One leaf index byte per object slot of a block; padding slots are 0.
class LeafIndexVector {
 public:
  explicit LeafIndexVector(std::size_t block_size);

  std::size_t block_size() const { return indices_.size(); }
  std::size_t live_count() const { return live_; }
  void set_live_count(std::size_t live) { live_ = live; }
  const std::uint8_t* data() const { return indices_.data(); }
  std::uint8_t* data() { return indices_.data(); }
  std::uint8_t operator[](std::size_t o) const { return indices_[o]; }
  std::span<const std::uint8_t> view() const { return indices_; }

 private:
  AlignedVector<std::uint8_t> indices_;
  std::size_t live_ = 0;
};

// Split of a tree flattened for the kernels. Trees are validated before
// they get here, so ordinals fit a byte.
struct TreeSplits {
  int depth = 0;
  std::uint32_t features[kMaxTreeDepth] = {};
  std::uint8_t ordinals[kMaxTreeDepth] = {};

  static TreeSplits from(const ObliviousTree& tree);
};

// index(o) = sum over d of [quantile(split_d.feature, o) > split_d.border] << d,
// root condition in bit 0. Live objects are those of block.live_count().
void compute_leaf_indices(const QuantizedBlock& block, const TreeSplits& tree,
                          VectorWidth width, LeafIndexVector& out,
                          TailPolicy tail = TailPolicy::ScalarTail);

void compute_leaf_indices(const QuantizedBlock& block, const ObliviousTree& tree,
                          VectorWidth width, LeafIndexVector& out,
                          TailPolicy tail = TailPolicy::ScalarTail);

// bit(o) = 1 iff quantile(split.feature, o) > split.border_ordinal, for
// every slot of the block (padding quantiles are 0, so padding bits are 0).
// out must hold block.block_size() bytes.
void condition_bits(const QuantizedBlock& block, const SplitCondition& split,
                    VectorWidth width, std::span<std::uint8_t> out);

}  // namespace obliv
