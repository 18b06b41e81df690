// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/evaluator.hpp"

namespace obliv {

EvalConfig EvalConfig::defaults() {
  return {.block_size = 128,
          .width = widest_supported_width(),
          .strategy = LeafStrategy::Naive,
          .tail = TailPolicy::ScalarTail};
}

std::string describe(const EvalConfig& config) {
  return std::string(to_string(config.strategy)) + "/" + std::string(to_string(config.width)) +
         "/b" + std::to_string(config.block_size) + "/" +
         std::string(to_string(config.tail)) + "-tail";
}

void validate_config(const EvalConfig& config) {
  if (!is_valid_block_size(config.block_size)) {
    throw ConfigError("block size " + std::to_string(config.block_size) +
                      " is not one of 64, 128, 256, 512");
  }
  if (!strategy_accepts_width(config.strategy, config.width)) {
    throw ConfigError(std::string(to_string(config.strategy)) + " does not run at width " +
                      std::string(to_string(config.width)));
  }
  if (!host_supports(config.width)) {
    throw ConfigError("vector width " + std::string(to_string(config.width)) +
                      " is not supported on this host");
  }
  if (config.block_size < accumulator_group_size(config.strategy, config.width)) {
    throw ConfigError("block smaller than the strategy's object group");
  }
}

std::vector<EvalConfig> valid_configs() {
  std::vector<EvalConfig> configs;
  for (auto strategy : kAllStrategies) {
    for (auto width : kAllWidths) {
      if (!strategy_accepts_width(strategy, width) || !host_supports(width)) continue;
      for (auto block : kBlockSizes) {
        for (auto tail : {TailPolicy::ScalarTail, TailPolicy::PaddedGroup}) {
          configs.push_back({block, width, strategy, tail});
        }
      }
    }
  }
  return configs;
}

Evaluator::Evaluator(const ObliviousModel& model, const EvalConfig& config)
    : config_(config),
      features_(model.float_features),
      scale_(model.scale),
      bias_(model.bias) {
  require_valid(model);
  validate_config(config);
  trees_.reserve(model.trees.size());
  for (const auto& tree : model.trees) trees_.push_back(TreeSplits::from(tree));
  bank_ = LeafBank(model, required_precision(config.strategy));
}

PredictionVector Evaluator::predict(const FeatureMatrix& matrix) const {
  PredictionVector out(matrix.n_objects);
  predict(matrix, out);
  return out;
}

void Evaluator::predict(const FeatureMatrix& matrix, std::span<double> out) const {
  if (matrix.n_features != features_.size()) {
    throw DimensionError("matrix has " + std::to_string(matrix.n_features) +
                         " features, model expects " + std::to_string(features_.size()));
  }
  if (out.size() != matrix.n_objects) {
    throw DimensionError("prediction buffer length differs from the object count");
  }

  const std::size_t block_size = config_.block_size;
  QuantizedBlock quantized(block_size, features_.size());
  LeafIndexVector indices(block_size);
  Accumulator acc(block_size, bank_.precision());

  for (const ObjectRange& range : plan_blocks(matrix.n_objects, block_size)) {
    quantize_block(matrix, range, features_, config_.width, quantized, config_.tail);
    acc.reset();
    for (std::size_t t = 0; t < trees_.size(); ++t) {
      compute_leaf_indices(quantized, trees_[t], config_.width, indices, config_.tail);
      accumulate(config_.strategy, indices, bank_, t, config_.width, config_.tail, acc);
    }
    for (std::size_t o = 0; o < range.size(); ++o) {
      out[range.begin + o] = scale_ * acc.total(o) + bias_;
    }
  }
}

PredictionVector evaluate(const ObliviousModel& model, const FeatureMatrix& matrix,
                          const EvalConfig& config) {
  return Evaluator(model, config).predict(matrix);
}

}  // namespace obliv
