// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

#include "obliv/evaluator.hpp"
#include "obliv/model.hpp"
#include "obliv/quantizer.hpp"

namespace obliv {

// Reference evaluation by direct per-object traversal. Conditions are
// evaluated on raw values (value > border, NaN fails), never through the
// quantizer. Binary64 sums leaves in binary64; Binary16 sums the rounded
// binary16 leaves widened to binary32, as the fp16 strategies do. Trees are
// summed in model order, then scale * sum + bias.
PredictionVector evaluate_scalar(const ObliviousModel& model, const FeatureMatrix& matrix,
                                 LeafPrecision precision);

struct DeviationMetrics {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  // Lower middle element for even lengths.
  double median_abs = 0.0;
  double rms = 0.0;
};

// Statistics of |a_i - b_i|. Throws DimensionError on length mismatch or
// empty input.
DeviationMetrics deviation_metrics(std::span<const double> a, std::span<const double> b);

// Objects where sign(a_i - threshold) != sign(b_i - threshold), with sign in
// {-1, 0, +1}.
std::size_t classification_flip_count(std::span<const double> a, std::span<const double> b,
                                      double threshold);

// True when |a_i - b_i| <= rel * max(|a_i|, |b_i|) for every i.
bool within_relative(std::span<const double> a, std::span<const double> b, double rel);
double max_relative_error(std::span<const double> a, std::span<const double> b);

}  // namespace obliv
