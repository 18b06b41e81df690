// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/leaf_accumulator.hpp"

#include <algorithm>
#include <string>

#include "kernels/kernels.hpp"
#include "obliv/blocks.hpp"

namespace obliv {
namespace {

void check_inputs(LeafStrategy strategy, const LeafIndexVector& indices, const LeafBank& bank,
                  std::size_t tree, VectorWidth width, const Accumulator& acc) {
  if (!strategy_accepts_width(strategy, width)) {
    throw ConfigError(std::string(to_string(strategy)) + " does not run at width " +
                      std::string(to_string(width)));
  }
  const LeafPrecision precision = required_precision(strategy);
  if (bank.precision() != precision || acc.precision() != precision) {
    throw ConfigError(std::string(to_string(strategy)) + " needs a " +
                      std::string(to_string(precision)) + " bank and accumulator");
  }
  if (tree >= bank.tree_count()) throw DimensionError("tree outside the leaf bank");
  if (acc.block_size() != indices.block_size()) {
    throw DimensionError("accumulator and index vector sizes differ");
  }
}

// Runs the vector kernel over the planned groups and the scalar kernel over
// any remainder. Padded groups read index 0 in their spare lanes and write
// accumulator slots that are never finalized.
template <typename Leaf, typename Sum, typename VectorFn, typename ScalarFn>
void run_planned(std::size_t group, TailPolicy tail, const LeafIndexVector& indices,
                 const Leaf* leaves, Sum* sums, VectorFn&& vector_kernel,
                 ScalarFn scalar_kernel) {
  const TailPlan plan = apply_tail_policy(tail, group, indices.live_count());
  vector_kernel(indices.data(), leaves, plan.vector_groups, sums);
  const std::size_t done = plan.vector_groups * group;
  if (plan.scalar_objects > 0) {
    scalar_kernel(indices.data() + done, leaves, plan.scalar_objects, sums + done);
  }
}

}  // namespace

std::string_view to_string(LeafStrategy s) {
  switch (s) {
    case LeafStrategy::Naive:
      return "naive";
    case LeafStrategy::Gather:
      return "gather";
    case LeafStrategy::Permute64:
      return "permute64";
    case LeafStrategy::Permute16:
      return "permute16";
    case LeafStrategy::Naive16:
      return "naive16";
  }
  return "?";
}

LeafStrategy parse_strategy(std::string_view text) {
  for (auto s : kAllStrategies) {
    if (text == to_string(s)) return s;
  }
  throw ConfigError("unknown leaf strategy \"" + std::string(text) + "\"");
}

LeafPrecision required_precision(LeafStrategy s) {
  return (s == LeafStrategy::Permute16 || s == LeafStrategy::Naive16) ? LeafPrecision::Binary16
                                                                       : LeafPrecision::Binary64;
}

bool strategy_accepts_width(LeafStrategy s, VectorWidth w) {
  switch (s) {
    case LeafStrategy::Naive:
    case LeafStrategy::Naive16:
      return true;
    case LeafStrategy::Gather:
      return w == VectorWidth::W256 || w == VectorWidth::W512;
    case LeafStrategy::Permute64:
    case LeafStrategy::Permute16:
      return w == VectorWidth::W512;
  }
  return false;
}

std::size_t accumulator_group_size(LeafStrategy s, VectorWidth w) {
  if (!strategy_accepts_width(s, w)) {
    throw ConfigError(std::string(to_string(s)) + " does not run at width " +
                      std::string(to_string(w)));
  }
  const auto& ks = kernels::kernel_table(w);
  switch (s) {
    case LeafStrategy::Naive:
      return ks.naive64_group;
    case LeafStrategy::Naive16:
      return ks.naive16_group;
    case LeafStrategy::Gather:
      return ks.gather64_group;
    case LeafStrategy::Permute64:
      return ks.permute64_group;
    case LeafStrategy::Permute16:
      return ks.permute16_group;
  }
  return 1;
}

std::size_t permute_register_count(int depth, std::size_t lanes) {
  return std::max<std::size_t>(1, (std::size_t{1} << depth) / lanes);
}

Accumulator::Accumulator(std::size_t block_size, LeafPrecision precision)
    : block_size_(block_size), precision_(precision) {
  if (precision == LeafPrecision::Binary64) {
    sums64_.assign(block_size, 0.0);
  } else {
    sums32_.assign(block_size, 0.0f);
  }
}

void Accumulator::reset() {
  std::fill(sums64_.begin(), sums64_.end(), 0.0);
  std::fill(sums32_.begin(), sums32_.end(), 0.0f);
}

void accumulate_naive(const LeafIndexVector& indices, const LeafBank& bank, std::size_t tree,
                      VectorWidth width, TailPolicy tail, Accumulator& acc) {
  check_inputs(LeafStrategy::Naive, indices, bank, tree, width, acc);
  const auto& ks = kernels::kernels_for(width);
  run_planned(ks.naive64_group, tail, indices, bank.table64(tree).data(), acc.sums64(),
              ks.naive64, kernels::scalar_kernels().naive64);
}

void accumulate_gather(const LeafIndexVector& indices, const LeafBank& bank, std::size_t tree,
                       VectorWidth width, TailPolicy tail, Accumulator& acc) {
  check_inputs(LeafStrategy::Gather, indices, bank, tree, width, acc);
  const auto& ks = kernels::kernels_for(width);
  run_planned(ks.gather64_group, tail, indices, bank.table64(tree).data(), acc.sums64(),
              ks.gather64, kernels::scalar_kernels().naive64);
}

void accumulate_permute64(const LeafIndexVector& indices, const LeafBank& bank,
                          std::size_t tree, TailPolicy tail, Accumulator& acc) {
  check_inputs(LeafStrategy::Permute64, indices, bank, tree, VectorWidth::W512, acc);
  const auto& ks = kernels::kernels_for(VectorWidth::W512);
  const int depth = bank.depth(tree);
  run_planned(
      ks.permute64_group, tail, indices, bank.table64(tree).data(), acc.sums64(),
      [&](const std::uint8_t* idx, const double* leaves, std::size_t groups, double* sums) {
        ks.permute64(idx, leaves, depth, groups, sums);
      },
      kernels::scalar_kernels().naive64);
}

void accumulate_permute16(const LeafIndexVector& indices, const LeafBank& bank,
                          std::size_t tree, TailPolicy tail, Accumulator& acc) {
  check_inputs(LeafStrategy::Permute16, indices, bank, tree, VectorWidth::W512, acc);
  const auto& ks = kernels::kernels_for(VectorWidth::W512);
  const int depth = bank.depth(tree);
  run_planned(
      ks.permute16_group, tail, indices, bank.table16(tree).data(), acc.sums32(),
      [&](const std::uint8_t* idx, const Half* leaves, std::size_t groups, float* sums) {
        ks.permute16(idx, leaves, depth, groups, sums);
      },
      kernels::scalar_kernels().naive16);
}

void accumulate_naive16(const LeafIndexVector& indices, const LeafBank& bank,
                        std::size_t tree, VectorWidth width, TailPolicy tail,
                        Accumulator& acc) {
  check_inputs(LeafStrategy::Naive16, indices, bank, tree, width, acc);
  const auto& ks = kernels::kernels_for(width);
  run_planned(ks.naive16_group, tail, indices, bank.table16(tree).data(), acc.sums32(),
              ks.naive16, kernels::scalar_kernels().naive16);
}

void accumulate(LeafStrategy strategy, const LeafIndexVector& indices, const LeafBank& bank,
                std::size_t tree, VectorWidth width, TailPolicy tail, Accumulator& acc) {
  switch (strategy) {
    case LeafStrategy::Naive:
      return accumulate_naive(indices, bank, tree, width, tail, acc);
    case LeafStrategy::Gather:
      return accumulate_gather(indices, bank, tree, width, tail, acc);
    case LeafStrategy::Permute64:
      if (width != VectorWidth::W512) break;
      return accumulate_permute64(indices, bank, tree, tail, acc);
    case LeafStrategy::Permute16:
      if (width != VectorWidth::W512) break;
      return accumulate_permute16(indices, bank, tree, tail, acc);
    case LeafStrategy::Naive16:
      return accumulate_naive16(indices, bank, tree, width, tail, acc);
  }
  throw ConfigError(std::string(to_string(strategy)) + " does not run at width " +
                    std::string(to_string(width)));
}

}  // namespace obliv
