// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "obliv/evaluator.hpp"
#include "obliv/model.hpp"

namespace obliv::bench {

struct BenchCase {
  EvalConfig config;
  Layout layout = Layout::ObjectMajor;
  std::size_t batch_size = 1024;
  // Timed runs; at least 3. Warmup runs are extra and never timed.
  std::size_t repetitions = 50;
  std::size_t warmup = 2;

  // e.g. "naive-w512-b128-object-major-scalar".
  std::string id() const;
};

// Relative tolerance of the oracle check for a strategy family.
double family_tolerance(LeafStrategy strategy);

struct CaseResult {
  BenchCase bench_case;
  std::string id;
  bool skipped = false;
  std::string skip_reason;
  bool verified = false;
  double max_rel_error = 0.0;
  double mean_ms = 0.0;
  double stddev_ms = 0.0;
  // (mean - baseline mean) / baseline mean; NaN without a usable baseline.
  double d = 0.0;
};

struct HostInfo {
  std::string compiler;
  std::string widest_width;
  std::string cpu_flags;
};

HostInfo host_info();

struct BenchReport {
  std::string model_description;
  std::string baseline_id;
  HostInfo host;
  std::vector<CaseResult> rows;

  // Every non-skipped case passed its oracle check.
  bool all_verified() const;
};

// Runs the cases in the given order on one deterministic batch per
// (batch size, layout). Every case is checked against evaluate_scalar once
// before it is timed; a case that fails the check is reported unverified and
// not timed. Cases the host cannot run are reported as skipped.
// baseline_id empty selects naive-w128-b128 on the first case's layout and
// tail if present, else the first case. Throws ConfigError for duplicate ids
// or fewer than 3 repetitions.
BenchReport run_matrix(const ObliviousModel& model, std::string model_description,
                       std::span<const BenchCase> cases, std::string baseline_id = {},
                       std::uint64_t data_seed = 7);

struct SweepRow {
  std::string series;
  std::size_t batch_size = 0;
  std::size_t blocks = 0;
  // Accumulator tail plan of the last block.
  TailPlan last_block_plan;
  bool verified = false;
  double mean_ms = 0.0;
  double stddev_ms = 0.0;
};

// One row per batch size, in the given order.
std::vector<SweepRow> run_batch_sweep(const ObliviousModel& model, const EvalConfig& config,
                                      Layout layout, std::span<const std::size_t> batch_sizes,
                                      std::size_t repetitions, std::size_t warmup = 1,
                                      std::uint64_t data_seed = 7);

// Matrix cases: strategies x widths x blocks x layouts x tails, keeping only
// combinations where the strategy accepts the width. Unsupported host widths
// are kept (they show up as skipped).
std::vector<BenchCase> matrix_cases(std::span<const LeafStrategy> strategies,
                                    std::span<const VectorWidth> widths,
                                    std::span<const std::size_t> blocks,
                                    std::span<const Layout> layouts,
                                    std::span<const TailPolicy> tails, std::size_t batch_size,
                                    std::size_t repetitions);

std::string to_csv(const BenchReport& report);
std::string to_markdown(const BenchReport& report);
std::string sweep_to_tsv(std::span<const SweepRow> rows);
std::string sweep_to_csv(std::span<const SweepRow> rows);
std::string sweep_to_markdown(std::span<const SweepRow> rows);

// Parses "a..b" or "a..b:step" into the inclusive list of batch sizes.
std::vector<std::size_t> parse_sweep(const std::string& text);

}  // namespace obliv::bench
