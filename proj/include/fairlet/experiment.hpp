// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dataset ingestion, k sweeps comparing classical and fair clustering, and
// machine-readable reports.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairlet/core.hpp"
#include "fairlet/fairlets.hpp"

namespace fairlet::experiment {

enum class ObjectiveSet : std::uint8_t { kCenter, kMedian, kBoth };

struct ExperimentConfig {
  std::filesystem::path input_path;
  std::string color_column;
  std::string positive_color_value;  // rows with this value are BLUE
  std::vector<std::string> feature_columns;
  std::optional<std::size_t> subsample;
  std::uint64_t seed = 1;
  std::size_t k_min = 2;
  std::size_t k_max = 20;
  std::int64_t t_prime = 2;
  ObjectiveSet objectives = ObjectiveSet::kBoth;
  bool normalize = true;
  /// Parallel (objective, k) runs; 0 means FAIRCLUSTER_THREADS or the
  /// hardware concurrency.
  std::size_t threads = 0;
};

/// Throws fairlet::Error when the config is unusable.
void validate(const ExperimentConfig& cfg);

struct LoadedDataset {
  ColoredDataset dataset;
  std::size_t rows_read;
  std::size_t rows_skipped;  // unparsable feature values
};

/// Reads a comma-delimited file with a header row (RFC 4180 quoting).
LoadedDataset load_csv(const ExperimentConfig& cfg);

struct SweepRecord {
  Objective objective;
  std::size_t k;
  double classical_cost;
  Rational classical_balance;
  double fair_cost;
  Rational fair_balance;
  double fairlet_cost;

  bool operator==(const SweepRecord&) const = default;
};

struct SkippedRun {
  Objective objective;
  std::size_t k;
  std::string reason;

  bool operator==(const SkippedRun&) const = default;
};

struct ReportMetadata {
  std::size_t n = 0;
  std::size_t red = 0;
  std::size_t blue = 0;
  Rational dataset_balance;
  std::int64_t t_prime = 0;
  std::uint64_t seed = 0;
  bool normalize = false;
  std::size_t rows_skipped = 0;
  std::vector<SkippedRun> skipped;
  std::map<std::string, double> wall_times;  // seconds
};

struct ExperimentReport {
  ReportMetadata metadata;
  std::vector<SweepRecord> records;  // ordered by (objective, k)
};

/// Runs the sweep on an in-memory dataset. Only seed, k range, t', the
/// objective set and the thread count are read from `cfg`.
ExperimentReport run_sweep(const ColoredDataset& ds,
                           const ExperimentConfig& cfg);
/// Loads the configured file and runs the sweep.
ExperimentReport run_sweep(const ExperimentConfig& cfg);

enum class Format : std::uint8_t { kJson, kCsv };

std::string to_json(const ExperimentReport& report);
std::string to_csv(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);
void emit(const ExperimentReport& report, Format format,
          const std::filesystem::path& path);

std::string decomposition_to_json(const ColoredDataset& ds,
                                  const FairletDecomposition& dec,
                                  Objective objective);

/// Parses "a..b" or a single integer.
std::pair<std::size_t, std::size_t> parse_k_range(const std::string& text);

}  // namespace fairlet::experiment
