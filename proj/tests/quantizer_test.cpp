// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/quantizer.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "obliv/random.hpp"
#include "support/corpus.hpp"

namespace obliv {
namespace {

constexpr float kNaN = std::numeric_limits<float>::quiet_NaN();
constexpr float kInf = std::numeric_limits<float>::infinity();

// Borders strictly below v, by binary search; NaN is below nothing.
std::uint8_t search_oracle(float v, const std::vector<float>& borders) {
  if (std::isnan(v)) return 0;
  return static_cast<std::uint8_t>(std::lower_bound(borders.begin(), borders.end(), v) -
                                   borders.begin());
}

QuantizedBlock quantize(const FeatureMatrix& matrix, ObjectRange range,
                        const std::vector<FloatFeatureBorders>& features, VectorWidth width,
                        std::size_t block_size, TailPolicy tail = TailPolicy::ScalarTail) {
  QuantizedBlock block(block_size, features.size());
  quantize_block(matrix, range, features, width, block, tail);
  return block;
}

TEST(QuantizeValueTest, Examples) {
  const std::vector<float> one{0.5f};
  EXPECT_EQ(quantize_value(0.7f, one), 1);
  const std::vector<float> three{1.0f, 2.0f, 3.0f};
  EXPECT_EQ(quantize_value(2.0f, three), 1);
  EXPECT_EQ(quantize_value(kNaN, three), 0);
  EXPECT_EQ(quantize_value(kInf, three), 3);
  EXPECT_EQ(quantize_value(-kInf, three), 0);
  EXPECT_EQ(quantize_value(3.5f, three), 3);
  EXPECT_EQ(quantize_value(1.0f, {}), 0);
}

TEST(QuantizeValueTest, MatchesBinarySearch) {
  Xoshiro256 rng(21);
  for (int i = 0; i < 3000; ++i) {
    const auto borders = testing::random_borders(rng, 1 + rng.below(254));
    for (int j = 0; j < 10; ++j) {
      float v = static_cast<float>(rng.uniform(-5.0, 5.0));
      if (j == 0) v = borders[rng.below(borders.size())];
      if (j == 1) v = std::nextafter(borders[rng.below(borders.size())], kInf);
      ASSERT_EQ(quantize_value(v, borders), search_oracle(v, borders)) << v;
    }
  }
}

TEST(QuantizeValueTest, MonotoneAndInvertible) {
  Xoshiro256 rng(22);
  for (int i = 0; i < 500; ++i) {
    const auto borders = testing::random_borders(rng, 1 + rng.below(64));
    for (int j = 0; j < 20; ++j) {
      float a = static_cast<float>(rng.uniform(-5.0, 5.0));
      float b = rng.below(3) == 0 ? borders[rng.below(borders.size())]
                                  : static_cast<float>(rng.uniform(-5.0, 5.0));
      if (b < a) std::swap(a, b);
      ASSERT_LE(quantize_value(a, borders), quantize_value(b, borders));
      for (std::size_t k = 0; k < borders.size(); ++k) {
        ASSERT_EQ(quantize_value(b, borders) > k, b > borders[k]);
      }
    }
  }
}

TEST(QuantizeBlockTest, ZeroBorderSignTest) {
  const std::vector<FloatFeatureBorders> features{{0, {0.0f}}};
  const std::vector<float> values{-1.0f, 1.0f};
  const FeatureMatrix matrix(Layout::ObjectMajor, 2, 1, values);
  for (auto width : testing::host_widths()) {
    const auto block = quantize(matrix, {0, 2}, features, width, 64);
    EXPECT_EQ(block.at(0, 0), 0);
    EXPECT_EQ(block.at(0, 1), 1);
    EXPECT_EQ(block.live_count(), 2u);
    for (std::size_t o = 2; o < 64; ++o) EXPECT_EQ(block.at(0, o), 0);
  }
}

TEST(QuantizeBlockTest, BruteForce50By200) {
  Xoshiro256 rng(23);
  std::vector<FloatFeatureBorders> features;
  for (std::uint32_t f = 0; f < 50; ++f) {
    features.push_back({f, testing::random_borders(rng, 1 + rng.below(254))});
  }
  ObliviousModel model;
  model.float_features = features;
  const auto values = testing::corpus_batch(model, 200, 5);
  const FeatureMatrix matrix(Layout::ObjectMajor, 200, 50, values);
  for (auto width : testing::host_widths()) {
    for (auto tail : {TailPolicy::ScalarTail, TailPolicy::PaddedGroup}) {
      const auto block = quantize(matrix, {0, 200}, features, width, 256, tail);
      for (std::size_t f = 0; f < 50; ++f) {
        for (std::size_t o = 0; o < 256; ++o) {
          const std::uint8_t expected =
              o < 200 ? search_oracle(values[o * 50 + f], features[f].borders) : 0;
          ASSERT_EQ(block.at(f, o), expected)
              << to_string(width) << " f=" << f << " o=" << o;
        }
      }
    }
  }
}

TEST(QuantizeBlockTest, WidthsLayoutsAndTailsAgree) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto model = testing::corpus_model(seed);
    Xoshiro256 rng(seed);
    const std::size_t n = 1 + rng.below(600);
    const auto om = testing::corpus_batch(model, n, seed);
    const auto fm = testing::to_feature_major(om, n, model.feature_count());
    const FeatureMatrix by_object(Layout::ObjectMajor, n, model.feature_count(), om);
    const FeatureMatrix by_feature(Layout::FeatureMajor, n, model.feature_count(), fm);
    for (std::size_t block_size : {64, 128, 256, 512}) {
      const std::size_t begin = rng.below(n);
      const std::size_t end = std::min(n, begin + 1 + rng.below(block_size));
      const auto reference = quantize(by_object, {begin, end}, model.float_features,
                                      VectorWidth::Scalar, block_size);
      for (auto width : testing::host_widths()) {
        for (auto tail : {TailPolicy::ScalarTail, TailPolicy::PaddedGroup}) {
          for (const auto* m : {&by_object, &by_feature}) {
            const auto block =
                quantize(*m, {begin, end}, model.float_features, width, block_size, tail);
            ASSERT_TRUE(std::equal(block.bytes().begin(), block.bytes().end(),
                                   reference.bytes().begin()))
                << "seed " << seed << " width " << to_string(width) << " block "
                << block_size << " range " << begin << ".." << end;
            ASSERT_EQ(block.live_count(), end - begin);
          }
        }
      }
    }
  }
}

TEST(QuantizeBlockTest, BytesStayWithinBorderCount) {
  const auto model = testing::corpus_model(77);
  const auto values = testing::corpus_batch(model, 128, 1);
  const FeatureMatrix matrix(Layout::ObjectMajor, 128, model.feature_count(), values);
  const auto block = quantize(matrix, {0, 128}, model.float_features,
                              widest_supported_width(), 128);
  for (std::size_t f = 0; f < model.feature_count(); ++f) {
    for (std::size_t o = 0; o < 128; ++o) {
      ASSERT_LE(block.at(f, o), model.float_features[f].borders.size());
    }
  }
  EXPECT_EQ(reinterpret_cast<std::uintptr_t>(block.row(0)) % 64, 0u);
}

TEST(QuantizeBlockTest, MaximalBorderCountFitsAByte) {
  std::vector<float> borders;
  for (int i = 0; i < 254; ++i) borders.push_back(static_cast<float>(i));
  const std::vector<FloatFeatureBorders> features{{0, borders}};
  std::vector<float> values(64);
  for (std::size_t o = 0; o < 64; ++o) values[o] = static_cast<float>(o) * 4.0f + 0.5f;
  values[63] = kInf;
  const FeatureMatrix matrix(Layout::FeatureMajor, 64, 1, values);
  for (auto width : testing::host_widths()) {
    const auto block = quantize(matrix, {0, 64}, features, width, 64);
    for (std::size_t o = 0; o < 64; ++o) {
      ASSERT_EQ(block.at(0, o), search_oracle(values[o], borders)) << to_string(width);
    }
    EXPECT_EQ(block.at(0, 63), 254);
  }
}

TEST(QuantizeBlockTest, RejectsBadSetup) {
  const std::vector<FloatFeatureBorders> features{{0, {0.0f}}};
  const std::vector<float> values(100, 1.0f);
  const FeatureMatrix matrix(Layout::ObjectMajor, 100, 1, values);
  QuantizedBlock block(64, 1);
  EXPECT_THROW(quantize_block(matrix, {0, 65}, features, VectorWidth::Scalar, block),
               DimensionError);
  EXPECT_THROW(quantize_block(matrix, {90, 101}, features, VectorWidth::Scalar, block),
               DimensionError);
  QuantizedBlock wrong(64, 2);
  EXPECT_THROW(quantize_block(matrix, {0, 10}, features, VectorWidth::Scalar, wrong),
               DimensionError);
  EXPECT_THROW(FeatureMatrix(Layout::ObjectMajor, 10, 11, values), DimensionError);
  EXPECT_THROW(QuantizedBlock(100, 1), ConfigError);
}

TEST(QuantizeBlockTest, GroupSizes) {
  EXPECT_EQ(quantizer_group_size(VectorWidth::Scalar), 1u);
  EXPECT_EQ(quantizer_group_size(VectorWidth::W128), 16u);
  EXPECT_EQ(quantizer_group_size(VectorWidth::W256), 32u);
  EXPECT_EQ(quantizer_group_size(VectorWidth::W512), 64u);
}

}  // namespace
}  // namespace obliv
