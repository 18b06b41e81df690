// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/blocks.hpp"

#include <algorithm>

namespace obliv {

bool is_valid_block_size(std::size_t block_size) {
  return std::find(std::begin(kBlockSizes), std::end(kBlockSizes), block_size) !=
         std::end(kBlockSizes);
}

std::vector<ObjectRange> plan_blocks(std::size_t n_objects, std::size_t block_size) {
  if (!is_valid_block_size(block_size)) {
    throw ConfigError("block size must be one of 64, 128, 256, 512");
  }
  std::vector<ObjectRange> blocks;
  blocks.reserve((n_objects + block_size - 1) / block_size);
  for (std::size_t begin = 0; begin < n_objects; begin += block_size) {
    blocks.push_back({begin, std::min(begin + block_size, n_objects)});
  }
  return blocks;
}

TailPlan apply_tail_policy(TailPolicy policy, std::size_t group_size, std::size_t live_count) {
  if (group_size <= 1) return {live_count, 0, 0};
  const std::size_t full = live_count / group_size;
  const std::size_t rest = live_count % group_size;
  if (policy == TailPolicy::ScalarTail) return {full, rest, 0};
  if (rest == 0) return {full, 0, 0};
  return {full + 1, 0, group_size - rest};
}

}  // namespace obliv
