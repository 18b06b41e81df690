// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "obliv/common.hpp"
#include "obliv/model.hpp"

namespace obliv {

// Non-owning view of a batch of binary32 feature values.
//   ObjectMajor:  (o, f) at o * n_features + f
//   FeatureMajor: (o, f) at f * n_objects + o
struct FeatureMatrix {
  Layout layout = Layout::ObjectMajor;
  std::size_t n_objects = 0;
  std::size_t n_features = 0;
  std::span<const float> values;

  // Throws DimensionError when values.size() != n_objects * n_features.
  FeatureMatrix(Layout layout, std::size_t n_objects, std::size_t n_features,
                std::span<const float> values);

  float at(std::size_t object, std::size_t feature) const {
    return layout == Layout::ObjectMajor ? values[object * n_features + feature]
                                         : values[feature * n_objects + object];
  }
};

// Half-open object range [begin, end).
struct ObjectRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const ObjectRange&, const ObjectRange&) = default;
};

// One-byte quantiles of one block, feature-major: (f, o) at
// f * block_size + o. Rows are cache-line aligned and zero beyond the live
// object count.
class QuantizedBlock {
 public:
  // block_size must be a positive multiple of 64.
  QuantizedBlock(std::size_t block_size, std::size_t n_features);

  std::size_t block_size() const { return block_size_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t live_count() const { return live_; }
  void set_live_count(std::size_t live) { live_ = live; }

  const std::uint8_t* row(std::size_t feature) const {
    return bytes_.data() + feature * block_size_;
  }
  std::uint8_t* row(std::size_t feature) { return bytes_.data() + feature * block_size_; }
  std::uint8_t at(std::size_t feature, std::size_t object) const {
    return row(feature)[object];
  }
  std::span<const std::uint8_t> bytes() const { return bytes_; }

 private:
  std::size_t block_size_;
  std::size_t n_features_;
  std::size_t live_ = 0;
  AlignedVector<std::uint8_t> bytes_;
};

// Number of borders strictly below value. NaN crosses nothing.
std::uint8_t quantize_value(float value, std::span<const float> borders);

// Quantizes matrix objects [range.begin, range.end) into out. Loop order is
// features outer, object lane groups inner, borders innermost. With
// ScalarTail the objects after the last full lane group go through the
// scalar kernel; with PaddedGroup they are processed as one vector group
// whose missing lanes are NaN (quantile 0).
//
// Throws DimensionError / ConfigError if the range, feature count or width
// do not fit; the per-group hot path itself has no error branches.
void quantize_block(const FeatureMatrix& matrix, ObjectRange range,
                    std::span<const FloatFeatureBorders> features, VectorWidth width,
                    QuantizedBlock& out, TailPolicy tail = TailPolicy::ScalarTail);

// Objects per vector group of the quantizer at the given width.
std::size_t quantizer_group_size(VectorWidth width);

}  // namespace obliv
