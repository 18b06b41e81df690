// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "obliv/common.hpp"
#include "obliv/half.hpp"

namespace obliv {

inline constexpr std::size_t kMaxBordersPerFeature = 254;
inline constexpr int kMaxTreeDepth = 8;

// Sorted thresholds of one float feature. feature_index is the column of
// the feature matrix and must equal the position in the model's list.
struct FloatFeatureBorders {
  std::uint32_t feature_index = 0;
  std::vector<float> borders;

  friend bool operator==(const FloatFeatureBorders&,
                         const FloatFeatureBorders&) = default;
};

// One level of an oblivious tree: "value > borders[border_ordinal]" for the
// given feature, equivalently "quantile > border_ordinal".
struct SplitCondition {
  std::uint32_t feature_index = 0;
  std::uint32_t border_ordinal = 0;

  friend bool operator==(const SplitCondition&, const SplitCondition&) = default;
};

// splits[d] is the condition at distance d from the root; it contributes
// bit d of the leaf index.
struct ObliviousTree {
  int depth = 0;
  std::vector<SplitCondition> splits;
  std::vector<double> leaf_values;

  friend bool operator==(const ObliviousTree&, const ObliviousTree&) = default;
};

// prediction = scale * sum(tree leaves) + bias.
struct ObliviousModel {
  std::vector<FloatFeatureBorders> float_features;
  std::vector<ObliviousTree> trees;
  double scale = 1.0;
  double bias = 0.0;

  std::size_t feature_count() const { return float_features.size(); }

  // Bit-exact comparison (distinguishes -0.0 from 0.0, compares NaN
  // payloads), which is what the serializer round-trip promises.
  bool bit_equal(const ObliviousModel& other) const;
};

struct ValidationIssue {
  // -1 when the issue is not tied to a tree / feature.
  long tree = -1;
  long feature = -1;
  std::string message;
};

// Empty result means the model is valid.
std::vector<ValidationIssue> validate_model(const ObliviousModel& model);

// Throws Error listing every issue when the model is invalid.
void require_valid(const ObliviousModel& model);

std::string format_issues(const std::vector<ValidationIssue>& issues);

enum class LeafPrecision : std::uint8_t { Binary64, Binary16 };

std::string_view to_string(LeafPrecision p);

// Contiguous per-tree leaf tables. Each table starts on a cache line and is
// padded to a whole number of cache lines (at least 8 doubles or 32 halves),
// so permute kernels can load full registers unconditionally.
class LeafBank {
 public:
  LeafBank() = default;
  LeafBank(const ObliviousModel& model, LeafPrecision precision);

  LeafPrecision precision() const { return precision_; }
  std::size_t tree_count() const { return offsets_.size(); }
  int depth(std::size_t tree) const { return depths_[tree]; }

  // Padded table of one tree; only the first 2^depth entries are leaves.
  std::span<const double> table64(std::size_t tree) const;
  std::span<const Half> table16(std::size_t tree) const;

  double max_abs_leaf() const { return max_abs_leaf_; }
  double max_abs_leaf(std::size_t tree) const { return tree_max_abs_[tree]; }
  // Leaves whose magnitude exceeded the binary16 range and were clamped.
  std::size_t saturated_count() const { return saturated_; }

 private:
  LeafPrecision precision_ = LeafPrecision::Binary64;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> sizes_;
  std::vector<int> depths_;
  std::vector<double> tree_max_abs_;
  AlignedVector<double> values64_;
  AlignedVector<Half> values16_;
  double max_abs_leaf_ = 0.0;
  std::size_t saturated_ = 0;
};

inline LeafBank build_leaf_bank(const ObliviousModel& model,
                                LeafPrecision precision) {
  return LeafBank(model, precision);
}

struct SyntheticModelSpec {
  std::size_t n_features = 1;
  std::size_t borders_per_feature = 1;
  std::size_t n_trees = 1;
  int depth = 1;
  std::uint64_t seed = 0;
  // Leaves are uniform on [-leaf_amplitude, leaf_amplitude).
  double leaf_amplitude = 1.0;
  double scale = 1.0;
  double bias = 0.0;
};

// Deterministic for a fixed spec on every platform (xoshiro256** seeded
// through splitmix64, no libm calls). Borders are uniform binary32 values
// in [-3, 3), sorted and distinct; splits are uniform over (feature, border)
// pairs. Throws ParameterError for out-of-range parameters.
ObliviousModel generate_synthetic_model(const SyntheticModelSpec& spec);

// Shape of the desk-scale benchmark model and of the 2000-feature,
// 8000-tree, depth-6 model with 64 borders per feature.
SyntheticModelSpec desk_preset(std::uint64_t seed = 1);
SyntheticModelSpec epsilon8k64_preset(std::uint64_t seed = 1);

}  // namespace obliv
