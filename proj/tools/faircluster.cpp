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

// faircluster: fairlet decompositions and classical-vs-fair k sweeps over
// CSV data.
//
// Exit codes: 0 success, 1 I/O or configuration error, 2 infeasible balance.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairlet/experiment.hpp"

namespace {

using fairlet::experiment::ExperimentConfig;
using fairlet::experiment::ObjectiveSet;

void add_input_options(CLI::App& cmd, ExperimentConfig& cfg, bool& no_normalize,
                       std::size_t& subsample) {
  cmd.add_option("--input", cfg.input_path, "CSV file with a header row")
      ->required();
  cmd.add_option("--color-column", cfg.color_column, "column holding the protected attribute")
      ->required();
  cmd.add_option("--positive", cfg.positive_color_value,
                 "value of the color column mapped to blue (all others are red)")
      ->required();
  cmd.add_option("--features", cfg.feature_columns, "numeric feature columns")
      ->required()
      ->delimiter(',');
  cmd.add_option("--tprime", cfg.t_prime, "target balance is 1/t'")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--seed", cfg.seed, "seed for subsampling and local search");
  cmd.add_option("--subsample", subsample, "keep N rows chosen uniformly at random")
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--no-normalize", no_normalize, "skip min-max scaling of features");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair clustering through fairlet decompositions"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  bool no_normalize = false;
  std::size_t subsample = 0;
  std::string k_range = "2..20";
  std::string objective = "both";
  std::string out_path;
  std::string csv_path;

  auto* sweep = app.add_subcommand("sweep", "classical vs fair clustering over a range of k");
  add_input_options(*sweep, cfg, no_normalize, subsample);
  sweep->add_option("--k", k_range, "k or a range a..b");
  sweep->add_option("--objective", objective, "center, median or both")
      ->check(CLI::IsMember({"center", "median", "both"}));
  sweep->add_option("--out", out_path, "JSON report path")->required();
  sweep->add_option("--csv", csv_path, "optional CSV report path");

  auto* decompose = app.add_subcommand("decompose", "compute a fairlet decomposition only");
  add_input_options(*decompose, cfg, no_normalize, subsample);
  decompose->add_option("--objective", objective, "center or median")
      ->check(CLI::IsMember({"center", "median"}));
  decompose->add_option("--out", out_path, "JSON output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cfg.normalize = !no_normalize;
  if (subsample > 0) cfg.subsample = subsample;

  try {
    if (sweep->parsed()) {
      std::tie(cfg.k_min, cfg.k_max) = fairlet::experiment::parse_k_range(k_range);
      cfg.objectives = objective == "center"   ? ObjectiveSet::kCenter
                       : objective == "median" ? ObjectiveSet::kMedian
                                               : ObjectiveSet::kBoth;
      const auto report = fairlet::experiment::run_sweep(cfg);
      fairlet::experiment::emit(report, fairlet::experiment::Format::kJson, out_path);
      if (!csv_path.empty()) {
        fairlet::experiment::emit(report, fairlet::experiment::Format::kCsv, csv_path);
      }
      std::cerr << "wrote " << report.records.size() << " records ("
                << report.metadata.skipped.size() << " skipped) to " << out_path
                << "\n";
    } else {
      if (objective == "both") objective = "center";
      fairlet::experiment::validate(cfg);
      const auto loaded = fairlet::experiment::load_csv(cfg);
      const auto obj = objective == "center" ? fairlet::Objective::kCenter
                                             : fairlet::Objective::kMedian;
      const auto dec = fairlet::decompose(loaded.dataset, cfg.t_prime, obj);
      const std::string json =
          fairlet::experiment::decomposition_to_json(loaded.dataset, dec, obj);
      if (out_path.empty()) {
        std::cout << json;
      } else {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!(out << json)) throw fairlet::Error("cannot write " + out_path);
      }
    }
  } catch (const fairlet::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
