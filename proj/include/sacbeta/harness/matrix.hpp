// Copyright 2026 The sacbeta Authors.
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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sacbeta/harness/config.hpp"
#include "sacbeta/harness/metrics_csv.hpp"

namespace sacbeta::harness {

struct RunOutcome {
  std::string run_id;
  Variant variant = Variant::BetaAD;
  std::uint64_t seed = 0;
  std::string csv_path;
  std::string log_path;
  sac::TrainResult result;
  std::string error;  // set if the run threw before finishing
};

/// Messages from running jobs (events, aborts, progress).
using LogFn = std::function<void(const std::string&)>;

/// One training run writing <out>/<run_id>.csv and <out>/<run_id>.log. The
/// log holds the event lines (aborts, concentration alarms). An empty `id`
/// uses run_id(config, variant, seed).
RunOutcome run_single(const RunConfig& config, Variant variant, std::uint64_t seed, const std::string& out_dir,
                      const LogFn& log = {}, std::string id = {});

struct SummaryRow {
  std::string env;
  std::string variant;
  std::size_t runs = 0;           // CSVs with at least one record
  std::vector<double> finals;     // last mean_return of each run, in seed order
  double final_mean = 0.0;
  double final_std = 0.0;         // sample (n - 1); 0 for one run
  double two_sigma() const { return 2.0 * final_std; }
  std::size_t aborted = 0;        // runs whose log records an abort
};

/// Groups CSVs by (env, variant) and reduces each run to its final record.
std::vector<SummaryRow> summarize_csvs(const std::vector<std::string>& csv_paths);
/// All *.csv files in `dir` except summary.csv.
std::vector<std::string> list_metric_csvs(const std::string& dir);

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);
/// "variant | final mean ± 2σ | runs | aborted" text table.
std::string format_summary_table(const std::vector<SummaryRow>& rows);

struct MatrixResult {
  std::vector<RunOutcome> runs;
  std::vector<SummaryRow> summary;
  std::string out_dir;
  bool any_aborted() const;
  bool any_failed() const;
  /// 0 on success, 2 if any run aborted non-finitely, 1 if any run errored.
  int exit_code() const;
};

/// Runs every (variant, seed) pair on a bounded worker pool, then writes
/// summary.csv and summary.txt recomputed from the CSVs on disk.
MatrixResult run_matrix(const RunConfig& config, const LogFn& log = {});

}  // namespace sacbeta::harness
