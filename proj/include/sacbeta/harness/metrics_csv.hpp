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
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sacbeta/sac/trainer.hpp"

namespace sacbeta::harness {

inline constexpr std::string_view kCsvHeader =
    "run_id,variant,seed,env,step,mean_return,std_return,critic_loss,actor_loss,wall_clock_s";

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvRow {
  std::string run_id;
  std::string variant;
  std::uint64_t seed = 0;
  std::string env;
  sac::MetricsRecord metrics;
};

/// Shortest text that reads back to the same double (%.17g).
std::string format_real(double x);
std::string format_row(const CsvRow& row);
CsvRow parse_row(std::string_view line);

/// Writes the header on open and flushes after every row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void write(const CsvRow& row);

 private:
  std::string path_;
  std::ofstream out_;
};

/// Reads a metrics CSV; throws CsvError if the header differs from kCsvHeader
/// or a row is malformed.
std::vector<CsvRow> read_metrics_csv(const std::string& path);

}  // namespace sacbeta::harness
