// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "obliv/random.hpp"

namespace obliv {
namespace {

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_bits(float a, float b) {
  return std::bit_cast<std::uint32_t>(a) == std::bit_cast<std::uint32_t>(b);
}

template <typename T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i], b[i])) return false;
  }
  return true;
}

// Table length in elements: 2^depth rounded up to a whole cache line.
std::size_t padded_size(int depth, std::size_t element_bytes) {
  const std::size_t per_line = kCacheLine / element_bytes;
  const std::size_t leaves = std::size_t{1} << depth;
  return (leaves + per_line - 1) / per_line * per_line;
}

}  // namespace

bool ObliviousModel::bit_equal(const ObliviousModel& other) const {
  if (!same_bits(scale, other.scale) || !same_bits(bias, other.bias)) return false;
  if (float_features.size() != other.float_features.size()) return false;
  if (trees.size() != other.trees.size()) return false;
  for (std::size_t f = 0; f < float_features.size(); ++f) {
    const auto& a = float_features[f];
    const auto& b = other.float_features[f];
    if (a.feature_index != b.feature_index || !same_bits(a.borders, b.borders)) {
      return false;
    }
  }
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const auto& a = trees[t];
    const auto& b = other.trees[t];
    if (a.depth != b.depth || a.splits != b.splits ||
        !same_bits(a.leaf_values, b.leaf_values)) {
      return false;
    }
  }
  return true;
}

std::vector<ValidationIssue> validate_model(const ObliviousModel& model) {
  std::vector<ValidationIssue> issues;
  auto feature_issue = [&](std::size_t f, std::string msg) {
    issues.push_back({-1, static_cast<long>(f), std::move(msg)});
  };
  auto tree_issue = [&](std::size_t t, std::string msg) {
    issues.push_back({static_cast<long>(t), -1, std::move(msg)});
  };

  if (model.float_features.empty()) {
    issues.push_back({-1, -1, "model has no float features"});
  }
  if (std::isnan(model.scale)) issues.push_back({-1, -1, "scale is NaN"});
  if (std::isnan(model.bias)) issues.push_back({-1, -1, "bias is NaN"});

  for (std::size_t f = 0; f < model.float_features.size(); ++f) {
    const auto& feature = model.float_features[f];
    if (feature.feature_index != f) {
      feature_issue(f, "feature index " + std::to_string(feature.feature_index) +
                           " does not match its position");
    }
    if (feature.borders.size() > kMaxBordersPerFeature) {
      feature_issue(f, "too many borders (" + std::to_string(feature.borders.size()) +
                           " > 254)");
    }
    for (std::size_t k = 0; k < feature.borders.size(); ++k) {
      if (std::isnan(feature.borders[k])) {
        feature_issue(f, "NaN border at ordinal " + std::to_string(k));
      } else if (k > 0 && !(feature.borders[k - 1] < feature.borders[k])) {
        feature_issue(f, "non-ascending borders at ordinal " + std::to_string(k));
      }
    }
  }

  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const auto& tree = model.trees[t];
    if (tree.depth < 1 || tree.depth > kMaxTreeDepth) {
      tree_issue(t, "depth " + std::to_string(tree.depth) + " outside 1..8");
      continue;
    }
    if (tree.splits.size() != static_cast<std::size_t>(tree.depth)) {
      tree_issue(t, "splits length " + std::to_string(tree.splits.size()) +
                        " != depth " + std::to_string(tree.depth));
    }
    const std::size_t leaves = std::size_t{1} << tree.depth;
    if (tree.leaf_values.size() != leaves) {
      tree_issue(t, "leaf_values length " + std::to_string(tree.leaf_values.size()) +
                        " != 2^depth = " + std::to_string(leaves));
    }
    for (std::size_t d = 0; d < tree.splits.size(); ++d) {
      const auto& split = tree.splits[d];
      if (split.feature_index >= model.float_features.size()) {
        issues.push_back({static_cast<long>(t), static_cast<long>(split.feature_index),
                          "split " + std::to_string(d) + ": feature index out of range"});
        continue;
      }
      const auto& borders = model.float_features[split.feature_index].borders;
      if (split.border_ordinal >= borders.size()) {
        issues.push_back({static_cast<long>(t), static_cast<long>(split.feature_index),
                          "split " + std::to_string(d) + ": border ordinal out of range (" +
                              std::to_string(split.border_ordinal) +
                              " >= " + std::to_string(borders.size()) + ")"});
      }
    }
    for (std::size_t i = 0; i < tree.leaf_values.size(); ++i) {
      if (std::isnan(tree.leaf_values[i])) {
        tree_issue(t, "NaN leaf at index " + std::to_string(i));
      }
    }
  }
  return issues;
}

std::string format_issues(const std::vector<ValidationIssue>& issues) {
  std::ostringstream out;
  for (const auto& issue : issues) {
    if (issue.tree >= 0) out << "tree " << issue.tree << ": ";
    if (issue.feature >= 0) out << "feature " << issue.feature << ": ";
    out << issue.message << '\n';
  }
  return out.str();
}

void require_valid(const ObliviousModel& model) {
  const auto issues = validate_model(model);
  if (!issues.empty()) throw Error("invalid model:\n" + format_issues(issues));
}

std::string_view to_string(LeafPrecision p) {
  return p == LeafPrecision::Binary64 ? "binary64" : "binary16";
}

LeafBank::LeafBank(const ObliviousModel& model, LeafPrecision precision)
    : precision_(precision) {
  const std::size_t element_bytes =
      precision == LeafPrecision::Binary64 ? sizeof(double) : sizeof(Half);
  std::size_t total = 0;
  for (const auto& tree : model.trees) {
    offsets_.push_back(total);
    sizes_.push_back(padded_size(tree.depth, element_bytes));
    depths_.push_back(tree.depth);
    total += sizes_.back();
  }

  if (precision == LeafPrecision::Binary64) {
    values64_.assign(total, 0.0);
  } else {
    values16_.assign(total, Half{});
  }

  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    double tree_max = 0.0;
    const auto& leaves = model.trees[t].leaf_values;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const double v = leaves[i];
      tree_max = std::max(tree_max, std::fabs(v));
      if (precision == LeafPrecision::Binary64) {
        values64_[offsets_[t] + i] = v;
      } else {
        if (std::fabs(v) > kHalfMax) ++saturated_;
        values16_[offsets_[t] + i] = half_from_double(v);
      }
    }
    tree_max_abs_.push_back(tree_max);
    max_abs_leaf_ = std::max(max_abs_leaf_, tree_max);
  }
}

std::span<const double> LeafBank::table64(std::size_t tree) const {
  return {values64_.data() + offsets_[tree], sizes_[tree]};
}

std::span<const Half> LeafBank::table16(std::size_t tree) const {
  return {values16_.data() + offsets_[tree], sizes_[tree]};
}

ObliviousModel generate_synthetic_model(const SyntheticModelSpec& spec) {
  if (spec.n_features < 1) throw ParameterError("n_features must be >= 1");
  if (spec.borders_per_feature < 1 || spec.borders_per_feature > kMaxBordersPerFeature) {
    throw ParameterError("borders_per_feature must be in 1..254");
  }
  if (spec.depth < 1 || spec.depth > kMaxTreeDepth) {
    throw ParameterError("depth must be in 1..8");
  }
  if (!(spec.leaf_amplitude >= 0.0) || !std::isfinite(spec.leaf_amplitude)) {
    throw ParameterError("leaf_amplitude must be finite and non-negative");
  }
  if (std::isnan(spec.scale) || std::isnan(spec.bias)) {
    throw ParameterError("scale and bias must not be NaN");
  }

  Xoshiro256 rng(spec.seed);
  ObliviousModel model;
  model.scale = spec.scale;
  model.bias = spec.bias;
  model.float_features.resize(spec.n_features);

  for (std::size_t f = 0; f < spec.n_features; ++f) {
    auto& feature = model.float_features[f];
    feature.feature_index = static_cast<std::uint32_t>(f);
    auto& borders = feature.borders;
    // Draw, sort, drop duplicates, top up until the count is reached.
    while (borders.size() < spec.borders_per_feature) {
      while (borders.size() < spec.borders_per_feature) {
        borders.push_back(static_cast<float>(rng.uniform(-3.0, 3.0)));
      }
      std::sort(borders.begin(), borders.end());
      borders.erase(std::unique(borders.begin(), borders.end()), borders.end());
    }
  }

  const std::uint64_t pairs = spec.n_features * spec.borders_per_feature;
  model.trees.resize(spec.n_trees);
  for (auto& tree : model.trees) {
    tree.depth = spec.depth;
    tree.splits.resize(static_cast<std::size_t>(spec.depth));
    for (auto& split : tree.splits) {
      const std::uint64_t pick = rng.below(pairs);
      split.feature_index = static_cast<std::uint32_t>(pick / spec.borders_per_feature);
      split.border_ordinal = static_cast<std::uint32_t>(pick % spec.borders_per_feature);
    }
    tree.leaf_values.resize(std::size_t{1} << spec.depth);
    for (auto& leaf : tree.leaf_values) {
      leaf = rng.uniform(-1.0, 1.0) * spec.leaf_amplitude;
    }
  }
  return model;
}

SyntheticModelSpec desk_preset(std::uint64_t seed) {
  return {.n_features = 500, .borders_per_feature = 64, .n_trees = 1000, .depth = 6,
          .seed = seed};
}

SyntheticModelSpec epsilon8k64_preset(std::uint64_t seed) {
  return {.n_features = 2000, .borders_per_feature = 64, .n_trees = 8000, .depth = 6,
          .seed = seed};
}

}  // namespace obliv
