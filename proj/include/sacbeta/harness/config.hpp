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

// Experiment configuration: defaults, key = value files, validation.

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sacbeta/sac/trainer.hpp"

namespace sacbeta::harness {

/// Thrown by validation and parsing; what() lists every problem, one per line.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class Variant { BetaAD, BetaOMT, Normal, TanhNormal };

std::string_view to_string(Variant v);
/// Accepts beta-ad, beta-omt, normal, tanh-normal.
Variant parse_variant(std::string_view name);
bool is_beta(Variant v);

struct Ablations {
  bool no_clip = false;      // drop the log-concentration clip
  bool non_concave = false;  // concentration = g(raw) without the +1 shift
  bool softplus = false;     // softplus instead of exp
  bool any() const { return no_clip || non_concave || softplus; }
};

struct RunConfig {
  std::string env = "pendulum";
  std::vector<Variant> variants{Variant::BetaAD};
  Ablations ablations;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

  std::size_t total_steps = 50000;
  std::size_t warmup_steps = 1000;
  std::size_t test_every = 1000;
  std::size_t test_episodes = 10;

  std::size_t hidden_layers = 2;
  std::size_t hidden_units = 256;
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  std::size_t buffer_size = 1000000;
  double discount = 0.99;
  double tau = 0.005;
  std::size_t target_update_every = 1;
  double temperature = 0.2;
  double log_std_min = -20.0, log_std_max = 2.0;
  double log_conc_min = -20.0, log_conc_max = 2.0;
  std::size_t updates_per_step = 1;

  std::string out_dir;  // empty: default_output_root()
  std::size_t workers = 0;  // 0: one per seed
  bool record_wall_clock = false;
};

/// Default hyperparameters at full scale (10^6 steps, 10^4 warmup, tests every 5000).
RunConfig full_scale_config();

/// $SACBETA_OUT_ROOT if set and non-empty, else "runs".
std::string default_output_root();

/// Sets one field from its textual key and value. Problems are appended to
/// `problems` rather than thrown.
void set_field(RunConfig& config, std::string_view key, std::string_view value,
               std::vector<std::string>& problems);

/// Applies a key = value file (one entry per line, '#' starts a comment).
void apply_config_file(RunConfig& config, const std::string& path);
void apply_config_text(RunConfig& config, std::string_view text, std::string_view origin = "<text>");

/// Throws ConfigError naming every violated field.
void validate(const RunConfig& config);

/// The resolved configuration as config-file text (round-trips).
std::string to_config_text(const RunConfig& config);

/// Label used in CSVs: the variant name with any ablation suffixes.
std::string variant_label(Variant v, const Ablations& ablations);
std::string run_id(const RunConfig& config, Variant v, std::uint64_t seed);

sac::TrainConfig to_train_config(const RunConfig& config, Variant v, std::uint64_t seed);

}  // namespace sacbeta::harness
