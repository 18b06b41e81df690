// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "obliv/common.hpp"
#include "obliv/leaf_indexer.hpp"
#include "obliv/model.hpp"

namespace obliv {

// How leaf values are fetched for a vector of indices.
//   Naive      scalar indexed loads, vector adds (binary64 bank)
//   Gather     hardware gathers (binary64, 256/512-bit)
//   Permute64  whole table held in registers, masked permutes (binary64, 512-bit)
//   Permute16  same with 32 binary16 lanes per register (512-bit)
//   Naive16    scalar loads from the binary16 bank, widened and added
enum class LeafStrategy : std::uint8_t { Naive, Gather, Permute64, Permute16, Naive16 };

inline constexpr LeafStrategy kAllStrategies[] = {
    LeafStrategy::Naive, LeafStrategy::Gather, LeafStrategy::Permute64,
    LeafStrategy::Permute16, LeafStrategy::Naive16};

std::string_view to_string(LeafStrategy s);
LeafStrategy parse_strategy(std::string_view text);

LeafPrecision required_precision(LeafStrategy s);

// Strategy/width compatibility, independent of the host.
bool strategy_accepts_width(LeafStrategy s, VectorWidth w);

// Objects per vector group of the strategy's kernel at this width
// (1 for the scalar width).
std::size_t accumulator_group_size(LeafStrategy s, VectorWidth w);

// Per-object running sums for one block. Binary64 strategies sum in
// binary64; binary16 strategies sum widened leaves in binary32.
class Accumulator {
 public:
  Accumulator(std::size_t block_size, LeafPrecision precision);

  LeafPrecision precision() const { return precision_; }
  std::size_t block_size() const { return block_size_; }

  void reset();
  // Sum of object o converted to binary64.
  double total(std::size_t o) const {
    return precision_ == LeafPrecision::Binary64 ? sums64_[o]
                                                 : static_cast<double>(sums32_[o]);
  }

  double* sums64() { return sums64_.data(); }
  float* sums32() { return sums32_.data(); }
  std::span<const double> sums64() const { return sums64_; }
  std::span<const float> sums32() const { return sums32_; }

 private:
  std::size_t block_size_;
  LeafPrecision precision_;
  AlignedVector<double> sums64_;
  AlignedVector<float> sums32_;
};

// acc(o) += leaf[index(o)] for every live object of indices. With
// PaddedGroup the slots between the live count and the end of the last group
// also receive leaf[0]; they are never finalized. Each strategy requires the
// matching bank precision and a width it accepts; violations throw
// ConfigError.
void accumulate_naive(const LeafIndexVector& indices, const LeafBank& bank, std::size_t tree,
                      VectorWidth width, TailPolicy tail, Accumulator& acc);
void accumulate_gather(const LeafIndexVector& indices, const LeafBank& bank, std::size_t tree,
                       VectorWidth width, TailPolicy tail, Accumulator& acc);
void accumulate_permute64(const LeafIndexVector& indices, const LeafBank& bank,
                          std::size_t tree, TailPolicy tail, Accumulator& acc);
void accumulate_permute16(const LeafIndexVector& indices, const LeafBank& bank,
                          std::size_t tree, TailPolicy tail, Accumulator& acc);
void accumulate_naive16(const LeafIndexVector& indices, const LeafBank& bank,
                        std::size_t tree, VectorWidth width, TailPolicy tail,
                        Accumulator& acc);

// Dispatches to one of the above.
void accumulate(LeafStrategy strategy, const LeafIndexVector& indices, const LeafBank& bank,
                std::size_t tree, VectorWidth width, TailPolicy tail, Accumulator& acc);

// Number of source registers a permute strategy needs for a tree of this
// depth: max(1, 2^depth / lanes) with 8 lanes for binary64 and 32 for
// binary16.
std::size_t permute_register_count(int depth, std::size_t lanes);

}  // namespace obliv
