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

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sacbeta/harness/metrics_csv.hpp"

namespace sacbeta::harness {

/// Raised when the runs of one variant were evaluated at different steps.
class MissingDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Centered moving average of radius 1; the end windows shrink to the points
/// that exist.
std::vector<double> smooth_curve(const std::vector<double>& y);

struct VariantCurve {
  std::string variant;
  std::vector<std::size_t> steps;
  std::vector<double> mean;        // across seeds, of the smoothed per-seed curves
  std::vector<double> half_width;  // 2 × sample std across seeds; 0 for one seed
  std::size_t seeds = 0;
};

/// Curves grouped by environment. Each seed's return series is smoothed first,
/// then reduced across seeds step by step.
std::map<std::string, std::vector<VariantCurve>> compute_curves(const std::vector<CsvRow>& rows);

/// A standalone SVG document with one line and shaded band per variant.
std::string render_svg(const std::string& env, const std::vector<VariantCurve>& curves);

/// Reads the CSVs and writes <out_dir>/<env>.svg per environment; returns the
/// written paths.
std::vector<std::string> plot_curves(const std::vector<std::string>& csv_paths, const std::string& out_dir);

}  // namespace sacbeta::harness
