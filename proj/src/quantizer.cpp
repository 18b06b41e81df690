// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/quantizer.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <string>

#include "kernels/kernels.hpp"
#include "obliv/blocks.hpp"

namespace obliv {

FeatureMatrix::FeatureMatrix(Layout layout, std::size_t n_objects, std::size_t n_features,
                             std::span<const float> values)
    : layout(layout), n_objects(n_objects), n_features(n_features), values(values) {
  if (values.size() != n_objects * n_features) {
    throw DimensionError("feature matrix holds " + std::to_string(values.size()) +
                         " values, expected " + std::to_string(n_objects) + " x " +
                         std::to_string(n_features));
  }
}

QuantizedBlock::QuantizedBlock(std::size_t block_size, std::size_t n_features)
    : block_size_(block_size), n_features_(n_features) {
  if (block_size == 0 || block_size % kCacheLine != 0) {
    throw ConfigError("quantized block size must be a positive multiple of 64");
  }
  bytes_.assign(block_size * n_features, 0);
}

std::uint8_t quantize_value(float value, std::span<const float> borders) {
  std::uint32_t crossed = 0;
  for (float border : borders) crossed += value > border;
  return static_cast<std::uint8_t>(crossed);
}

std::size_t quantizer_group_size(VectorWidth width) {
  return kernels::kernel_table(width).quantize_group;
}

void quantize_block(const FeatureMatrix& matrix, ObjectRange range,
                    std::span<const FloatFeatureBorders> features, VectorWidth width,
                    QuantizedBlock& out, TailPolicy tail) {
  if (features.size() != matrix.n_features || out.n_features() != matrix.n_features) {
    throw DimensionError("feature count mismatch: model " + std::to_string(features.size()) +
                         ", matrix " + std::to_string(matrix.n_features) + ", block " +
                         std::to_string(out.n_features()));
  }
  if (range.begin > range.end || range.end > matrix.n_objects) {
    throw DimensionError("object range outside the matrix");
  }
  const std::size_t live = range.size();
  if (live > out.block_size()) {
    throw DimensionError("object range larger than the block");
  }

  const auto& ks = kernels::kernels_for(width);
  const std::size_t group = ks.quantize_group;
  const TailPlan plan = apply_tail_policy(tail, group, live);
  const std::size_t vector_end = std::min(plan.vector_groups * group, live);
  const std::size_t covered = plan.vector_groups * group + plan.scalar_objects;

  alignas(kCacheLine) float staging[64];

  for (std::size_t f = 0; f < matrix.n_features; ++f) {
    const auto& borders = features[f].borders;
    std::uint8_t* row = out.row(f);

    if (group > 1) {
      for (std::size_t g = 0; g < plan.vector_groups; ++g) {
        const std::size_t first = g * group;
        const std::size_t lanes = std::min(group, live - first);
        const float* values;
        if (matrix.layout == Layout::FeatureMajor && lanes == group) {
          values = matrix.values.data() + f * matrix.n_objects + range.begin + first;
        } else {
          for (std::size_t i = 0; i < lanes; ++i) {
            staging[i] = matrix.at(range.begin + first + i, f);
          }
          std::fill(staging + lanes, staging + group, std::numeric_limits<float>::quiet_NaN());
          values = staging;
        }
        ks.quantize(values, borders.data(), borders.size(), row + first);
      }
    }
    for (std::size_t o = (group > 1 ? vector_end : 0); o < live; ++o) {
      row[o] = quantize_value(matrix.at(range.begin + o, f), borders);
    }
    if (covered < out.block_size()) {
      std::memset(row + covered, 0, out.block_size() - covered);
    }
  }
  out.set_live_count(live);
}

}  // namespace obliv
