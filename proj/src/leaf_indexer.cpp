// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/leaf_indexer.hpp"

#include <cstring>

#include "kernels/kernels.hpp"
#include "obliv/blocks.hpp"

namespace obliv {

LeafIndexVector::LeafIndexVector(std::size_t block_size) : indices_(block_size, 0) {}

TreeSplits TreeSplits::from(const ObliviousTree& tree) {
  TreeSplits flat;
  flat.depth = tree.depth;
  for (int d = 0; d < tree.depth; ++d) {
    flat.features[d] = tree.splits[static_cast<std::size_t>(d)].feature_index;
    flat.ordinals[d] =
        static_cast<std::uint8_t>(tree.splits[static_cast<std::size_t>(d)].border_ordinal);
  }
  return flat;
}

void compute_leaf_indices(const QuantizedBlock& block, const TreeSplits& tree,
                          VectorWidth width, LeafIndexVector& out, TailPolicy tail) {
  if (out.block_size() != block.block_size()) {
    throw DimensionError("index vector and quantized block sizes differ");
  }
  const auto& ks = kernels::kernels_for(width);
  const std::uint8_t* rows[kMaxTreeDepth];
  for (int d = 0; d < tree.depth; ++d) rows[d] = block.row(tree.features[d]);

  const std::size_t live = block.live_count();
  const TailPlan plan = apply_tail_policy(tail, ks.index_group, live);
  const std::size_t vector_end = plan.vector_groups * ks.index_group;
  ks.leaf_indices(rows, tree.ordinals, tree.depth, plan.vector_groups, out.data());

  if (plan.scalar_objects > 0) {
    const std::uint8_t* tail_rows[kMaxTreeDepth];
    for (int d = 0; d < tree.depth; ++d) tail_rows[d] = rows[d] + vector_end;
    kernels::scalar_kernels().leaf_indices(tail_rows, tree.ordinals, tree.depth,
                                           plan.scalar_objects, out.data() + vector_end);
  }
  const std::size_t covered = vector_end + plan.scalar_objects;
  if (covered < out.block_size()) {
    std::memset(out.data() + covered, 0, out.block_size() - covered);
  }
  out.set_live_count(live);
}

void compute_leaf_indices(const QuantizedBlock& block, const ObliviousTree& tree,
                          VectorWidth width, LeafIndexVector& out, TailPolicy tail) {
  compute_leaf_indices(block, TreeSplits::from(tree), width, out, tail);
}

void condition_bits(const QuantizedBlock& block, const SplitCondition& split,
                    VectorWidth width, std::span<std::uint8_t> out) {
  if (out.size() < block.block_size()) {
    throw DimensionError("condition bit buffer smaller than the block");
  }
  if (split.feature_index >= block.n_features()) {
    throw DimensionError("split feature outside the quantized block");
  }
  const auto& ks = kernels::kernels_for(width);
  const auto ordinal = static_cast<std::uint8_t>(split.border_ordinal);
  const std::uint8_t* row = block.row(split.feature_index);
  const std::size_t groups = block.block_size() / ks.index_group;
  ks.condition_bits(row, ordinal, groups, out.data());
}

}  // namespace obliv
