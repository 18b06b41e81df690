// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "obliv/blocks.hpp"
#include "obliv/common.hpp"
#include "obliv/leaf_accumulator.hpp"
#include "obliv/leaf_indexer.hpp"
#include "obliv/model.hpp"
#include "obliv/quantizer.hpp"

namespace obliv {

struct EvalConfig {
  std::size_t block_size = 128;
  VectorWidth width = VectorWidth::Scalar;
  LeafStrategy strategy = LeafStrategy::Naive;
  TailPolicy tail = TailPolicy::ScalarTail;

  // Block 128, widest width the host runs, naive leaf loads.
  static EvalConfig defaults();

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

// e.g. "naive/512/b128/scalar-tail".
std::string describe(const EvalConfig& config);

// Throws ConfigError unless the block size is allowed, the strategy accepts
// the width, and the host can run it.
void validate_config(const EvalConfig& config);

// Configurations that are valid on this host, in a fixed order: strategy,
// then width, then block size, then tail policy.
std::vector<EvalConfig> valid_configs();

using PredictionVector = std::vector<double>;

// Blockwise three-stage evaluation: quantize a block, then for each tree
// compute leaf indices and accumulate leaf values, then finalize
// scale * sum + bias. The evaluator copies what it needs from the model and
// is immutable afterwards; predict() may run concurrently on distinct
// batches.
class Evaluator {
 public:
  Evaluator(const ObliviousModel& model, const EvalConfig& config);

  const EvalConfig& config() const { return config_; }
  const LeafBank& bank() const { return bank_; }
  std::size_t feature_count() const { return features_.size(); }

  // Throws DimensionError if matrix.n_features differs from the model.
  PredictionVector predict(const FeatureMatrix& matrix) const;
  void predict(const FeatureMatrix& matrix, std::span<double> out) const;

 private:
  EvalConfig config_;
  std::vector<FloatFeatureBorders> features_;
  std::vector<TreeSplits> trees_;
  LeafBank bank_;
  double scale_;
  double bias_;
};

PredictionVector evaluate(const ObliviousModel& model, const FeatureMatrix& matrix,
                          const EvalConfig& config);

}  // namespace obliv
