// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/dataset.hpp"

#include <limits>

#include "obliv/random.hpp"

namespace obliv {

std::vector<float> generate_batch(const ObliviousModel& model, const BatchSpec& spec) {
  const std::size_t n_features = model.feature_count();
  Xoshiro256 rng(spec.seed ^ 0xba7c4ull);
  std::vector<float> values(spec.n_objects * n_features);
  for (std::size_t o = 0; o < spec.n_objects; ++o) {
    for (std::size_t f = 0; f < n_features; ++f) {
      float v = static_cast<float>(rng.uniform(-3.5, 3.5));
      if (rng.uniform() < spec.special_fraction) {
        const auto& borders = model.float_features[f].borders;
        switch (rng.below(4)) {
          case 0:
            v = std::numeric_limits<float>::quiet_NaN();
            break;
          case 1:
            v = rng.below(2) ? std::numeric_limits<float>::infinity()
                             : -std::numeric_limits<float>::infinity();
            break;
          default:
            if (!borders.empty()) v = borders[rng.below(borders.size())];
            break;
        }
      }
      values[o * n_features + f] = v;
    }
  }
  return values;
}

std::vector<float> transpose(const std::vector<float>& values, std::size_t rows,
                             std::size_t cols) {
  std::vector<float> out(values.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[c * rows + r] = values[r * cols + c];
  }
  return out;
}

}  // namespace obliv
