// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/bench.hpp"

#include <time.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "obliv/dataset.hpp"
#include "obliv/oracle.hpp"

namespace obliv::bench {
namespace {

double cpu_ms() {
  timespec ts{};
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) * 1e-6;
}

struct Timing {
  double mean_ms = 0.0;
  double stddev_ms = 0.0;
};

Timing time_runs(const Evaluator& evaluator, const FeatureMatrix& matrix, std::size_t reps,
                 std::size_t warmup, std::vector<double>& scratch) {
  for (std::size_t i = 0; i < warmup; ++i) evaluator.predict(matrix, scratch);
  std::vector<double> samples;
  samples.reserve(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    const double start = cpu_ms();
    evaluator.predict(matrix, scratch);
    samples.push_back(cpu_ms() - start);
  }
  Timing t;
  for (double s : samples) t.mean_ms += s;
  t.mean_ms /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double s : samples) var += (s - t.mean_ms) * (s - t.mean_ms);
  t.stddev_ms = samples.size() > 1 ? std::sqrt(var / static_cast<double>(samples.size() - 1))
                                   : 0.0;
  return t;
}

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::string percent(double d) {
  if (std::isnan(d)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%+.0f%%", d * 100.0);
  return buf;
}

// Logical batch shared by every case of one batch size; the oracle result
// does not depend on the layout, so it is cached per precision.
class BatchCache {
 public:
  BatchCache(const ObliviousModel& model, std::uint64_t seed) : model_(model), seed_(seed) {}

  FeatureMatrix matrix(std::size_t n, Layout layout) {
    auto& entry = entry_for(n);
    const auto& values = layout == Layout::ObjectMajor ? entry.object_major : entry.feature_major;
    return FeatureMatrix(layout, n, model_.feature_count(), values);
  }

  const PredictionVector& oracle(std::size_t n, LeafPrecision precision) {
    auto& entry = entry_for(n);
    auto& slot = precision == LeafPrecision::Binary64 ? entry.oracle64 : entry.oracle16;
    if (!slot) {
      slot = evaluate_scalar(model_, matrix(n, Layout::ObjectMajor), precision);
    }
    return *slot;
  }

 private:
  struct Entry {
    std::vector<float> object_major;
    std::vector<float> feature_major;
    std::optional<PredictionVector> oracle64;
    std::optional<PredictionVector> oracle16;
  };

  Entry& entry_for(std::size_t n) {
    auto it = entries_.find(n);
    if (it == entries_.end()) {
      Entry e;
      e.object_major = generate_batch(model_, {.n_objects = n, .seed = seed_});
      e.feature_major = transpose(e.object_major, n, model_.feature_count());
      it = entries_.emplace(n, std::move(e)).first;
    }
    return it->second;
  }

  const ObliviousModel& model_;
  std::uint64_t seed_;
  std::map<std::size_t, Entry> entries_;
};

std::string skip_reason(const EvalConfig& config) {
  try {
    validate_config(config);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

std::string BenchCase::id() const {
  return std::string(to_string(config.strategy)) + "-w" + std::string(to_string(config.width)) +
         "-b" + std::to_string(config.block_size) + "-" + std::string(to_string(layout)) + "-" +
         std::string(to_string(config.tail));
}

double family_tolerance(LeafStrategy strategy) {
  return required_precision(strategy) == LeafPrecision::Binary64 ? 1e-12 : 1e-6;
}

HostInfo host_info() {
  HostInfo info;
#if defined(__clang__)
  info.compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  info.compiler = "gcc " __VERSION__;
#else
  info.compiler = "unknown";
#endif
  info.widest_width = std::string(to_string(widest_supported_width()));
  std::string flags;
  auto add = [&](bool present, const char* name) {
    if (!present) return;
    if (!flags.empty()) flags += ' ';
    flags += name;
  };
  add(__builtin_cpu_supports("sse2"), "sse2");
  add(__builtin_cpu_supports("avx2"), "avx2");
  add(__builtin_cpu_supports("f16c"), "f16c");
  add(__builtin_cpu_supports("fma"), "fma");
  add(__builtin_cpu_supports("avx512f"), "avx512f");
  add(__builtin_cpu_supports("avx512bw"), "avx512bw");
  add(__builtin_cpu_supports("avx512vl"), "avx512vl");
  info.cpu_flags = flags;
  return info;
}

bool BenchReport::all_verified() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CaseResult& r) { return r.skipped || r.verified; });
}

std::vector<BenchCase> matrix_cases(std::span<const LeafStrategy> strategies,
                                    std::span<const VectorWidth> widths,
                                    std::span<const std::size_t> blocks,
                                    std::span<const Layout> layouts,
                                    std::span<const TailPolicy> tails, std::size_t batch_size,
                                    std::size_t repetitions) {
  std::vector<BenchCase> cases;
  for (auto width : widths) {
    for (auto strategy : strategies) {
      if (!strategy_accepts_width(strategy, width)) continue;
      for (auto block : blocks) {
        for (auto layout : layouts) {
          for (auto tail : tails) {
            BenchCase c;
            c.config = {block, width, strategy, tail};
            c.layout = layout;
            c.batch_size = batch_size;
            c.repetitions = repetitions;
            cases.push_back(c);
          }
        }
      }
    }
  }
  return cases;
}

BenchReport run_matrix(const ObliviousModel& model, std::string model_description,
                       std::span<const BenchCase> cases, std::string baseline_id,
                       std::uint64_t data_seed) {
  require_valid(model);
  std::set<std::string> ids;
  for (const auto& c : cases) {
    if (!ids.insert(c.id()).second) throw ConfigError("duplicate bench case " + c.id());
    if (c.repetitions < 3) throw ConfigError("bench cases need at least 3 repetitions");
  }

  BenchReport report;
  report.model_description = std::move(model_description);
  report.host = host_info();
  if (baseline_id.empty() && !cases.empty()) {
    BenchCase probe = cases.front();
    probe.config.strategy = LeafStrategy::Naive;
    probe.config.width = VectorWidth::W128;
    probe.config.block_size = 128;
    baseline_id = ids.count(probe.id()) ? probe.id() : cases.front().id();
  }
  report.baseline_id = baseline_id;

  BatchCache batches(model, data_seed);
  for (const auto& c : cases) {
    CaseResult row;
    row.bench_case = c;
    row.id = c.id();
    row.skip_reason = skip_reason(c.config);
    if (!row.skip_reason.empty()) {
      row.skipped = true;
      row.d = std::numeric_limits<double>::quiet_NaN();
      report.rows.push_back(std::move(row));
      continue;
    }

    const Evaluator evaluator(model, c.config);
    const FeatureMatrix matrix = batches.matrix(c.batch_size, c.layout);
    std::vector<double> predictions(c.batch_size);
    evaluator.predict(matrix, predictions);
    const auto& expected = batches.oracle(c.batch_size, required_precision(c.config.strategy));
    row.max_rel_error = max_relative_error(predictions, expected);
    row.verified = within_relative(predictions, expected, family_tolerance(c.config.strategy));
    if (row.verified) {
      const Timing t = time_runs(evaluator, matrix, c.repetitions, c.warmup, predictions);
      row.mean_ms = t.mean_ms;
      row.stddev_ms = t.stddev_ms;
    }
    report.rows.push_back(std::move(row));
  }

  const auto base = std::find_if(report.rows.begin(), report.rows.end(),
                                 [&](const CaseResult& r) { return r.id == baseline_id; });
  const bool usable = base != report.rows.end() && !base->skipped && base->verified &&
                      base->mean_ms > 0.0;
  const double base_ms = usable ? base->mean_ms : 0.0;
  for (auto& row : report.rows) {
    if (!usable || row.skipped || !row.verified) {
      row.d = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.d = (row.mean_ms - base_ms) / base_ms;
    }
  }
  return report;
}

std::vector<SweepRow> run_batch_sweep(const ObliviousModel& model, const EvalConfig& config,
                                      Layout layout, std::span<const std::size_t> batch_sizes,
                                      std::size_t repetitions, std::size_t warmup,
                                      std::uint64_t data_seed) {
  require_valid(model);
  if (repetitions < 3) throw ConfigError("sweeps need at least 3 repetitions");
  const Evaluator evaluator(model, config);
  const std::size_t group = accumulator_group_size(config.strategy, config.width);
  BenchCase probe;
  probe.config = config;
  probe.layout = layout;
  const std::string series = probe.id();

  BatchCache batches(model, data_seed);
  std::vector<SweepRow> rows;
  for (std::size_t n : batch_sizes) {
    if (n == 0) throw ConfigError("batch sizes must be positive");
    SweepRow row;
    row.series = series;
    row.batch_size = n;
    const auto blocks = plan_blocks(n, config.block_size);
    row.blocks = blocks.size();
    row.last_block_plan = apply_tail_policy(config.tail, group, blocks.back().size());

    const FeatureMatrix matrix = batches.matrix(n, layout);
    std::vector<double> predictions(n);
    evaluator.predict(matrix, predictions);
    row.verified = within_relative(predictions,
                                   batches.oracle(n, required_precision(config.strategy)),
                                   family_tolerance(config.strategy));
    if (row.verified) {
      const Timing t = time_runs(evaluator, matrix, repetitions, warmup, predictions);
      row.mean_ms = t.mean_ms;
      row.stddev_ms = t.stddev_ms;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "# model: " << report.model_description << '\n';
  out << "# compiler: " << report.host.compiler << '\n';
  out << "# cpu: " << report.host.cpu_flags << " (widest " << report.host.widest_width << ")\n";
  out << "# baseline: " << report.baseline_id << '\n';
  out << "id,strategy,width,block,layout,tail,batch,reps,status,max_rel_error,mean_ms,"
         "stddev_ms,d\n";
  for (const auto& r : report.rows) {
    const auto& c = r.bench_case;
    const char* status = r.skipped ? "skipped" : (r.verified ? "verified" : "FAILED");
    out << r.id << ',' << to_string(c.config.strategy) << ',' << to_string(c.config.width)
        << ',' << c.config.block_size << ',' << to_string(c.layout) << ','
        << to_string(c.config.tail) << ',' << c.batch_size << ',' << c.repetitions << ','
        << status << ',' << sci(r.max_rel_error) << ',' << fixed(r.mean_ms, 4) << ','
        << fixed(r.stddev_ms, 4) << ',' << fixed(r.d, 4) << '\n';
  }
  return out.str();
}

std::string to_markdown(const BenchReport& report) {
  std::ostringstream out;
  out << "Model: " << report.model_description << "  \n";
  out << "Host: " << report.host.cpu_flags << " (widest " << report.host.widest_width
      << "), " << report.host.compiler << "  \n";
  out << "Baseline: `" << report.baseline_id << "`; d = (time - base_time) / base_time\n\n";
  out << "| width | strategy | block | layout | tail | status | time (ms) | stddev | d |\n";
  out << "|---|---|---:|---|---|---|---:|---:|---:|\n";
  for (const auto& r : report.rows) {
    const auto& c = r.bench_case;
    const char* status = r.skipped ? "skipped" : (r.verified ? "ok" : "FAILED");
    out << "| " << to_string(c.config.width) << " | " << to_string(c.config.strategy) << " | "
        << c.config.block_size << " | " << to_string(c.layout) << " | "
        << to_string(c.config.tail) << " | " << status << " | "
        << (r.verified ? fixed(r.mean_ms, 3) : "-") << " | "
        << (r.verified ? fixed(r.stddev_ms, 3) : "-") << " | " << percent(r.d) << " |\n";
  }
  return out.str();
}

std::string sweep_to_tsv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  std::string series;
  for (const auto& r : rows) {
    if (r.series != series) {
      if (!series.empty()) out << "\n\n";
      series = r.series;
      out << "# " << series << "\nbatch_size\tmean_ms\n";
    }
    out << r.batch_size << '\t' << fixed(r.mean_ms, 5) << '\n';
  }
  return out.str();
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "series,batch_size,blocks,vector_groups,scalar_objects,discarded_lanes,status,"
         "mean_ms,stddev_ms\n";
  for (const auto& r : rows) {
    out << r.series << ',' << r.batch_size << ',' << r.blocks << ','
        << r.last_block_plan.vector_groups << ',' << r.last_block_plan.scalar_objects << ','
        << r.last_block_plan.discarded_lanes << ',' << (r.verified ? "verified" : "FAILED")
        << ',' << fixed(r.mean_ms, 5) << ',' << fixed(r.stddev_ms, 5) << '\n';
  }
  return out.str();
}

std::string sweep_to_markdown(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "| series | batch | blocks | status | time (ms) | stddev |\n";
  out << "|---|---:|---:|---|---:|---:|\n";
  for (const auto& r : rows) {
    out << "| " << r.series << " | " << r.batch_size << " | " << r.blocks << " | "
        << (r.verified ? "ok" : "FAILED") << " | " << fixed(r.mean_ms, 4) << " | "
        << fixed(r.stddev_ms, 4) << " |\n";
  }
  return out.str();
}

std::vector<std::size_t> parse_sweep(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw ConfigError("sweep must look like a..b[:step]");
  const auto colon = text.find(':', dots);
  auto number = [&](const std::string& part) -> std::size_t {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (part.empty() || used != part.size()) {
      throw ConfigError("bad number \"" + part + "\" in sweep \"" + text + "\"");
    }
    return static_cast<std::size_t>(v);
  };
  const std::size_t first = number(text.substr(0, dots));
  const std::size_t last = number(text.substr(dots + 2, colon == std::string::npos
                                                             ? std::string::npos
                                                             : colon - dots - 2));
  const std::size_t step = colon == std::string::npos ? 1 : number(text.substr(colon + 1));
  if (first == 0 || last < first || step == 0) {
    throw ConfigError("sweep needs 1 <= a <= b and step >= 1");
  }
  std::vector<std::size_t> sizes;
  for (std::size_t n = first; n <= last; n += step) sizes.push_back(n);
  return sizes;
}

}  // namespace obliv::bench
