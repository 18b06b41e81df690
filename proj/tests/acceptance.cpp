// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Details go on indented lines.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "obliv/bench.hpp"
#include "obliv/dataset.hpp"
#include "obliv/evaluator.hpp"
#include "obliv/model_io.hpp"
#include "obliv/oracle.hpp"
#include "obliv/random.hpp"
#include "support/corpus.hpp"

namespace obliv {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void fail(std::string why) {
    if (pass) details.insert(details.begin(), "first failure: " + why);
    pass = false;
  }
};

int report(int number, const char* title, const Outcome& outcome) {
  std::printf("%s  %d. %s: %s\n", outcome.pass ? "PASS" : "FAIL", number, title,
              outcome.summary.c_str());
  for (const auto& d : outcome.details) std::printf("        %s\n", d.c_str());
  std::fflush(stdout);
  return outcome.pass ? 0 : 1;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double tolerance(LeafStrategy s) {
  return required_precision(s) == LeafPrecision::Binary64 ? 1e-12 : 1e-6;
}

// 1. quantize_value against an independent count on randomized cases.
Outcome quantization_oracle() {
  Outcome out;
  const auto start = Clock::now();
  Xoshiro256 rng(1001);
  std::size_t cases = 0;
  std::size_t mismatches = 0;
  std::size_t specials = 0;
  while (cases < 10000) {
    const auto borders = testing::random_borders(rng, rng.below(255));
    float v;
    switch (rng.below(6)) {
      case 0:
        v = std::numeric_limits<float>::quiet_NaN();
        ++specials;
        break;
      case 1:
        v = rng.below(2) ? std::numeric_limits<float>::infinity()
                         : -std::numeric_limits<float>::infinity();
        ++specials;
        break;
      case 2:
        v = borders.empty() ? 0.0f : borders[rng.below(borders.size())];
        ++specials;
        break;
      default:
        v = static_cast<float>(rng.uniform(-6.0, 6.0));
    }
    std::size_t expected = 0;
    for (float b : borders) expected += (!std::isnan(v) && b < v) ? 1 : 0;
    if (quantize_value(v, borders) != expected) {
      if (mismatches == 0) out.fail(fmt("value %a with %zu borders", v, borders.size()));
      ++mismatches;
    }
    ++cases;
  }
  const double secs = seconds_since(start);
  if (secs >= 1.0) out.fail(fmt("took %.3f s", secs));
  out.summary = fmt("%zu cases (%zu NaN/inf/exact-border), %zu mismatches, %.3f s", cases,
                    specials, mismatches, secs);
  return out;
}

// 2. Depth-3 fixture with condition bits (1, 0, 1).
Outcome index_example() {
  Outcome out;
  ObliviousModel model;
  for (std::uint32_t f = 0; f < 3; ++f) model.float_features.push_back({f, {0.0f}});
  model.trees.push_back({3, {{0, 0}, {1, 0}, {2, 0}}, {}});
  for (int i = 0; i < 8; ++i) model.trees[0].leaf_values.push_back(100.0 + i);
  const std::vector<float> values{1.0f, -1.0f, 1.0f};
  const FeatureMatrix matrix(Layout::ObjectMajor, 1, 3, values);

  QuantizedBlock block(64, 3);
  quantize_block(matrix, {0, 1}, model.float_features, VectorWidth::Scalar, block);
  std::size_t checks = 0;
  for (auto width : kAllWidths) {
    if (!host_supports(width)) continue;
    LeafIndexVector idx(64);
    compute_leaf_indices(block, model.trees[0], width, idx);
    if (idx[0] != 5) out.fail(fmt("index %d at width %s", idx[0], to_string(width).data()));
    ++checks;
  }
  for (const auto& config : valid_configs()) {
    const double got = evaluate(model, matrix, config)[0];
    if (got != 105.0) out.fail(describe(config) + fmt(" predicted %g", got));
    ++checks;
  }
  for (auto p : {LeafPrecision::Binary64, LeafPrecision::Binary16}) {
    if (evaluate_scalar(model, matrix, p)[0] != 105.0) out.fail("oracle missed leaf 5");
    ++checks;
  }
  out.summary = fmt("index 5 and leaf_values[5] selected in %zu checks", checks);
  return out;
}

struct CorpusResult {
  Outcome equivalence;   // 3
  Outcome invariance;    // 4
  Outcome fp16_bound;    // 5
  Outcome tail_equal;    // 9, second half
};

// 3, 4, 5 and the prediction half of 9 share one pass over the corpus.
CorpusResult corpus_checks() {
  CorpusResult r;
  const auto start = Clock::now();
  const std::size_t batches[] = {1, 7, 31, 32, 33, 100, 128, 257};
  const auto configs = valid_configs();
  std::size_t evaluations = 0;
  std::size_t invariance_pairs = 0;
  std::size_t tail_pairs = 0;
  double worst64 = 0.0;
  double worst16 = 0.0;
  double worst_bound_ratio = 0.0;
  double worst_invariance64 = 0.0;
  double worst_invariance16 = 0.0;

  for (std::uint64_t m = 0; m < 100; ++m) {
    const ObliviousModel model = testing::corpus_model(m);
    const std::size_t nf = model.feature_count();

    struct Batch {
      std::vector<float> om, fm;
      PredictionVector oracle64, oracle16;
    };
    std::vector<Batch> data;
    for (std::size_t n : batches) {
      Batch b;
      b.om = testing::corpus_batch(model, n, m * 31 + n);
      b.fm = testing::to_feature_major(b.om, n, nf);
      const FeatureMatrix matrix(Layout::ObjectMajor, n, nf, b.om);
      b.oracle64 = evaluate_scalar(model, matrix, LeafPrecision::Binary64);
      b.oracle16 = evaluate_scalar(model, matrix, LeafPrecision::Binary16);
      data.push_back(std::move(b));
    }

    // results[batch][config index][layout]
    std::vector<std::vector<std::array<PredictionVector, 2>>> results(
        data.size(), std::vector<std::array<PredictionVector, 2>>(configs.size()));
    for (std::size_t c = 0; c < configs.size(); ++c) {
      const Evaluator evaluator(model, configs[c]);
      const bool is64 = required_precision(configs[c].strategy) == LeafPrecision::Binary64;
      for (std::size_t b = 0; b < data.size(); ++b) {
        const std::size_t n = batches[b];
        const FeatureMatrix om(Layout::ObjectMajor, n, nf, data[b].om);
        const FeatureMatrix fm(Layout::FeatureMajor, n, nf, data[b].fm);
        for (int layout = 0; layout < 2; ++layout) {
          auto pred = evaluator.predict(layout == 0 ? om : fm);
          ++evaluations;
          const auto& want = is64 ? data[b].oracle64 : data[b].oracle16;
          if (pred.size() != n) {
            r.equivalence.fail(describe(configs[c]) + ": wrong prediction length");
            continue;
          }
          const double err = max_relative_error(pred, want);
          (is64 ? worst64 : worst16) = std::max(is64 ? worst64 : worst16, err);
          if (!within_relative(pred, want, tolerance(configs[c].strategy))) {
            r.equivalence.fail(fmt("model %llu batch %zu layout %d ", (unsigned long long)m, n,
                                   layout) +
                               describe(configs[c]) + fmt(" rel %.3g", err));
          }
          results[b][c][layout] = std::move(pred);
        }
      }
    }

    // 4: everything against the first config of its family, object-major.
    for (std::size_t b = 0; b < data.size(); ++b) {
      std::map<LeafPrecision, std::size_t> reference;
      for (std::size_t c = 0; c < configs.size(); ++c) {
        const auto precision = required_precision(configs[c].strategy);
        const auto it = reference.try_emplace(precision, c).first;
        const auto& ref = results[b][it->second][0];
        for (int layout = 0; layout < 2; ++layout) {
          const auto& pred = results[b][c][layout];
          if (pred.size() != ref.size()) continue;
          const double err = max_relative_error(pred, ref);
          auto& worst = precision == LeafPrecision::Binary64 ? worst_invariance64
                                                             : worst_invariance16;
          worst = std::max(worst, err);
          if (!within_relative(pred, ref, tolerance(configs[c].strategy))) {
            r.invariance.fail(fmt("model %llu batch %zu: ", (unsigned long long)m, batches[b]) +
                              describe(configs[c]) + " vs " + describe(configs[it->second]));
          }
          ++invariance_pairs;
        }
      }
      // 9: each ScalarTail config against its PaddedGroup twin, exactly.
      for (std::size_t c = 0; c < configs.size(); ++c) {
        if (configs[c].tail != TailPolicy::ScalarTail) continue;
        EvalConfig twin = configs[c];
        twin.tail = TailPolicy::PaddedGroup;
        const auto t = std::find(configs.begin(), configs.end(), twin) - configs.begin();
        for (int layout = 0; layout < 2; ++layout) {
          if (results[b][c][layout] != results[b][t][layout]) {
            r.tail_equal.fail(fmt("model %llu batch %zu: ", (unsigned long long)m, batches[b]) +
                              describe(configs[c]));
          }
          ++tail_pairs;
        }
      }
    }

    // 5: binary64 against binary16 pipelines on the largest batch.
    const std::size_t last = data.size() - 1;
    const LeafBank bank(model, LeafPrecision::Binary64);
    const double bound = std::fabs(model.scale) * static_cast<double>(model.trees.size()) *
                         bank.max_abs_leaf() * std::ldexp(1.0, -10);
    for (std::size_t c = 0; c < configs.size(); ++c) {
      if (required_precision(configs[c].strategy) != LeafPrecision::Binary16) continue;
      const auto metrics = deviation_metrics(data[last].oracle64, results[last][c][0]);
      if (bound > 0.0) worst_bound_ratio = std::max(worst_bound_ratio, metrics.max_abs / bound);
      if (metrics.max_abs > bound) {
        r.fp16_bound.fail(fmt("model %llu: max_abs %.6g > bound %.6g ",
                              (unsigned long long)m, metrics.max_abs, bound) +
                          describe(configs[c]));
      }
      if (!(metrics.rms <= metrics.max_abs && metrics.mean_abs <= metrics.max_abs &&
            metrics.median_abs >= 0.0 && metrics.median_abs <= metrics.max_abs)) {
        r.fp16_bound.fail(fmt("model %llu: metric ordering violated", (unsigned long long)m));
      }
    }
  }

  const double secs = seconds_since(start);
  if (secs >= 300.0) r.equivalence.fail(fmt("took %.1f s", secs));
  r.equivalence.summary =
      fmt("100 models x 8 batches x %zu configs x 2 layouts = %zu evaluations, worst rel "
          "%.2g (binary64) / %.2g (binary16), %.1f s",
          configs.size(), evaluations, worst64, worst16, secs);
  r.invariance.summary = fmt("%zu prediction vectors compared, worst rel %.2g (binary64) / "
                             "%.2g (binary16)",
                             invariance_pairs, worst_invariance64, worst_invariance16);
  r.fp16_bound.summary =
      fmt("100 models, worst max_abs / bound = %.3g", worst_bound_ratio);
  r.tail_equal.summary = fmt("%zu scalar-tail / padded pairs bit-identical", tail_pairs);
  return r;
}

Outcome metric_fixture(Outcome bound) {
  const std::vector<double> a{0.0, 0.0};
  const std::vector<double> b{3.0, 4.0};
  const auto m = deviation_metrics(a, b);
  if (m.max_abs != 4.0 || m.mean_abs != 3.5 || m.median_abs != 3.0 ||
      m.rms != std::sqrt(12.5)) {
    bound.fail(fmt("fixture gave max %g mean %g median %g rms %.17g", m.max_abs, m.mean_abs,
                   m.median_abs, m.rms));
  }
  bound.summary += "; fixture max 4 / mean 3.5 / median 3 / rms sqrt(12.5) ok";
  return bound;
}

// 6. No sign flips between binary64 and binary16 where the margin is wide.
Outcome flip_parity() {
  Outcome out;
  const auto spec = desk_preset(6);
  const auto model = generate_synthetic_model(spec);
  const std::size_t n = 1024;
  const auto values = generate_batch(model, {n, 66});
  const FeatureMatrix matrix(Layout::ObjectMajor, n, model.feature_count(), values);
  const auto width = widest_supported_width();
  const auto fp64 = evaluate(model, matrix, {128, width, LeafStrategy::Naive,
                                             TailPolicy::ScalarTail});
  const LeafStrategy s16 =
      strategy_accepts_width(LeafStrategy::Permute16, width) ? LeafStrategy::Permute16
                                                             : LeafStrategy::Naive16;
  const auto fp16 = evaluate(model, matrix, {128, width, s16, TailPolicy::ScalarTail});
  const LeafBank bank(model, LeafPrecision::Binary64);
  const double bound = std::fabs(model.scale) * static_cast<double>(model.trees.size()) *
                       bank.max_abs_leaf() * std::ldexp(1.0, -10);

  std::vector<double> wide64, wide16;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(fp64[i]) >= 10.0 * bound) {
      wide64.push_back(fp64[i]);
      wide16.push_back(fp16[i]);
    }
  }
  const std::size_t flips = classification_flip_count(wide64, wide16, 0.0);
  const std::size_t all_flips = classification_flip_count(fp64, fp16, 0.0);
  if (flips != 0) out.fail(fmt("%zu flips among well-separated objects", flips));
  if (wide64.size() < 100) out.fail(fmt("only %zu objects clear the margin", wide64.size()));
  out.summary = fmt("%zu of %zu objects with |score| >= 10 x bound (%.4g), %zu flips "
                    "(%zu over the whole batch, %s)",
                    wide64.size(), n, 10.0 * bound, flips, all_flips,
                    to_string(s16).data());
  return out;
}

// 7. Serialization round trip on 1000 models.
Outcome round_trip() {
  Outcome out;
  Xoshiro256 rng(7007);
  std::size_t checked = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    ObliviousModel model;
    if (i % 3 == 0) {
      SyntheticModelSpec spec;
      spec.n_features = 1 + rng.below(30);
      spec.borders_per_feature = 1 + rng.below(254);
      spec.n_trees = rng.below(40);
      spec.depth = 1 + static_cast<int>(rng.below(8));
      spec.seed = rng();
      spec.scale = rng.uniform(-3.0, 3.0);
      spec.bias = rng.uniform(-3.0, 3.0);
      model = generate_synthetic_model(spec);
    } else {
      testing::CorpusLimits limits;
      limits.max_trees = 40;
      model = testing::corpus_model(i, limits);
    }
    // Values that a decimal writer would get wrong.
    for (auto& tree : model.trees) {
      for (auto& v : tree.leaf_values) {
        switch (rng.below(40)) {
          case 0:
            v = -0.0;
            break;
          case 1:
            v = std::numeric_limits<double>::denorm_min() * static_cast<double>(rng.below(1000));
            break;
          case 2:
            v = std::numeric_limits<double>::max();
            break;
          case 3:
            v = 0.1;
            break;
          default:
            break;
        }
      }
    }
    if (i % 5 == 0) model.bias = -0.0;
    const std::string text = serialize_model(model);
    const ObliviousModel back = deserialize_model(text);
    if (!model.bit_equal(back)) out.fail(fmt("model %llu differs", (unsigned long long)i));
    if (serialize_model(back) != text) {
      out.fail(fmt("model %llu re-serializes differently", (unsigned long long)i));
    }
    ++checked;
  }
  out.summary = fmt("%zu models bit-exact through serialize/deserialize", checked);
  return out;
}

// 8. Full desk-scale bench matrix.
Outcome bench_harness() {
  Outcome out;
  const auto start = Clock::now();
  const auto spec = desk_preset();
  const auto model = generate_synthetic_model(spec);
  const Layout layouts[] = {Layout::ObjectMajor, Layout::FeatureMajor};
  const TailPolicy tails[] = {TailPolicy::ScalarTail, TailPolicy::PaddedGroup};
  const auto cases =
      bench::matrix_cases(kAllStrategies, kAllWidths, kBlockSizes, layouts, tails, 1024, 50);
  const auto rep = bench::run_matrix(model, "desk preset", cases);
  const double secs = seconds_since(start);

  std::size_t verified = 0;
  std::size_t skipped = 0;
  if (rep.rows.size() != cases.size()) {
    out.fail(fmt("%zu rows for %zu cases", rep.rows.size(), cases.size()));
  }
  bool baseline_seen = false;
  for (const auto& row : rep.rows) {
    if (row.skipped) {
      ++skipped;
      if (host_supports(row.bench_case.config.width)) out.fail(row.id + " skipped");
      continue;
    }
    if (row.verified) {
      ++verified;
    } else {
      out.fail(row.id + fmt(" failed verification, rel %.3g", row.max_rel_error));
    }
    if (row.id == rep.baseline_id) {
      baseline_seen = true;
      if (row.d != 0.0) out.fail(fmt("baseline d = %g", row.d));
    }
  }
  if (!baseline_seen) out.fail("baseline row " + rep.baseline_id + " missing");
  if (secs >= 600.0) out.fail(fmt("took %.1f s", secs));

  const char* path = "acceptance_bench_report.md";
  std::ofstream(path) << bench::to_markdown(rep);
  out.summary = fmt("%zu cases, %zu rows, %zu verified before timing, %zu skipped, baseline "
                    "d = 0, %.1f s",
                    cases.size(), rep.rows.size(), verified, skipped, secs);
  out.details.push_back(std::string("timings (reported, not asserted) written to ") + path);
  return out;
}

// 9. Tail plans for every live count and group size.
Outcome tail_plans(Outcome predictions) {
  std::size_t plans = 0;
  for (std::size_t group : {8u, 16u, 32u, 64u}) {
    for (std::size_t live = 1; live <= 192; ++live) {
      // Count lanes group by group.
      std::size_t left = live;
      TailPlan scalar{};
      while (left >= group) {
        ++scalar.vector_groups;
        left -= group;
      }
      scalar.scalar_objects = left;
      TailPlan padded{};
      std::size_t covered = 0;
      while (covered < live) {
        ++padded.vector_groups;
        covered += group;
      }
      padded.discarded_lanes = covered - live;

      if (apply_tail_policy(TailPolicy::ScalarTail, group, live) != scalar ||
          apply_tail_policy(TailPolicy::PaddedGroup, group, live) != padded) {
        predictions.fail(fmt("plan mismatch at live %zu group %zu", live, group));
      }
      plans += 2;
    }
  }
  predictions.summary = fmt("%zu plans exact; ", plans) + predictions.summary;
  return predictions;
}

}  // namespace
}  // namespace obliv

int main() {
  using namespace obliv;
  std::printf("host: widest vector width %s\n", to_string(widest_supported_width()).data());
  int failures = 0;
  failures += report(1, "quantization oracle", quantization_oracle());
  failures += report(2, "index example (1,0,1) -> 5", index_example());
  auto corpus = corpus_checks();
  failures += report(3, "end-to-end equivalence", corpus.equivalence);
  failures += report(4, "cross-config invariance", corpus.invariance);
  failures += report(5, "fp16 error bound", metric_fixture(corpus.fp16_bound));
  failures += report(6, "classification-flip parity", flip_parity());
  failures += report(7, "model round-trip", round_trip());
  failures += report(8, "bench harness", bench_harness());
  failures += report(9, "tail-policy structure", tail_plans(corpus.tail_equal));
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
