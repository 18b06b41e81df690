// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "obliv/common.hpp"
#include "obliv/quantizer.hpp"

namespace obliv {

inline constexpr std::size_t kBlockSizes[] = {64, 128, 256, 512};

bool is_valid_block_size(std::size_t block_size);

// Consecutive, disjoint ranges covering [0, n_objects); all full-size
// except possibly the last. Throws ConfigError on an invalid block size.
std::vector<ObjectRange> plan_blocks(std::size_t n_objects, std::size_t block_size);

// How a kernel with the given group size covers live objects.
//   ScalarTail:  floor(live / group) vector groups + live % group scalar objects
//   PaddedGroup: ceil(live / group) vector groups, the last one possibly
//                holding discarded lanes
struct TailPlan {
  std::size_t vector_groups = 0;
  std::size_t scalar_objects = 0;
  std::size_t discarded_lanes = 0;

  friend bool operator==(const TailPlan&, const TailPlan&) = default;
};

TailPlan apply_tail_policy(TailPolicy policy, std::size_t group_size, std::size_t live_count);

}  // namespace obliv
