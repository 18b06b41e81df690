// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace obliv {
namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("vector lengths differ: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

PredictionVector evaluate_scalar(const ObliviousModel& model, const FeatureMatrix& matrix,
                                 LeafPrecision precision) {
  require_valid(model);
  if (matrix.n_features != model.feature_count()) {
    throw DimensionError("matrix has " + std::to_string(matrix.n_features) +
                         " features, model expects " + std::to_string(model.feature_count()));
  }

  // Rounded leaves, only for the binary16 path.
  std::vector<std::vector<Half>> halves;
  if (precision == LeafPrecision::Binary16) {
    for (const auto& tree : model.trees) {
      auto& rounded = halves.emplace_back();
      for (double v : tree.leaf_values) rounded.push_back(half_from_double(v));
    }
  }

  PredictionVector out(matrix.n_objects);
  for (std::size_t o = 0; o < matrix.n_objects; ++o) {
    double sum64 = 0.0;
    float sum32 = 0.0f;
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
      const auto& tree = model.trees[t];
      std::size_t leaf = 0;
      for (std::size_t d = 0; d < tree.splits.size(); ++d) {
        const auto& split = tree.splits[d];
        const float value = matrix.at(o, split.feature_index);
        const float border = model.float_features[split.feature_index].borders[split.border_ordinal];
        if (value > border) leaf |= std::size_t{1} << d;
      }
      if (precision == LeafPrecision::Binary64) {
        sum64 += tree.leaf_values[leaf];
      } else {
        sum32 += half_to_float(halves[t][leaf]);
      }
    }
    const double sum = precision == LeafPrecision::Binary64 ? sum64 : static_cast<double>(sum32);
    out[o] = model.scale * sum + model.bias;
  }
  return out;
}

DeviationMetrics deviation_metrics(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  if (a.empty()) throw DimensionError("deviation metrics need at least one element");

  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = std::fabs(a[i] - b[i]);

  DeviationMetrics m;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double d : diff) {
    m.max_abs = std::max(m.max_abs, d);
    sum += d;
    sum_sq += d * d;
  }
  const auto n = static_cast<double>(diff.size());
  m.mean_abs = sum / n;
  m.rms = std::sqrt(sum_sq / n);
  const std::size_t mid = (diff.size() - 1) / 2;
  std::nth_element(diff.begin(), diff.begin() + static_cast<std::ptrdiff_t>(mid), diff.end());
  m.median_abs = diff[mid];
  // Summation rounding can push mean/rms an ulp past the maximum.
  m.mean_abs = std::min(m.mean_abs, m.max_abs);
  m.rms = std::min(m.rms, m.max_abs);
  return m;
}

std::size_t classification_flip_count(std::span<const double> a, std::span<const double> b,
                                      double threshold) {
  require_same_length(a, b);
  std::size_t flips = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    flips += sign(a[i] - threshold) != sign(b[i] - threshold);
  }
  return flips;
}

bool within_relative(std::span<const double> a, std::span<const double> b, double rel) {
  require_same_length(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max(std::fabs(a[i]), std::fabs(b[i]));
    if (!(std::fabs(a[i] - b[i]) <= rel * scale)) return false;
  }
  return true;
}

double max_relative_error(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::fabs(a[i] - b[i]);
    if (diff == 0.0) continue;
    worst = std::max(worst, diff / std::max(std::fabs(a[i]), std::fabs(b[i])));
  }
  return worst;
}

}  // namespace obliv
