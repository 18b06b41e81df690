// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "obliv/model.hpp"

namespace obliv {

struct BatchSpec {
  std::size_t n_objects = 0;
  std::uint64_t seed = 0;
  // Probability that a value is replaced by NaN, +-inf or an exact border.
  double special_fraction = 0.05;
};

// Deterministic object-major batch for a model: uniform values on
// [-3.5, 3.5) (slightly wider than the generated borders) mixed with
// special values.
std::vector<float> generate_batch(const ObliviousModel& model, const BatchSpec& spec);

// Object-major (n_objects x n_features) to feature-major and back.
std::vector<float> transpose(const std::vector<float>& values, std::size_t rows,
                             std::size_t cols);

}  // namespace obliv
