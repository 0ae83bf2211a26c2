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

#include "sacbeta/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sacbeta/environments.hpp"

namespace sacbeta::harness {
namespace {

std::string join_lines(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration:";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s = s.substr(comma + 1);
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  const char* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, out);
  return r.ec == std::errc() && r.ptr == end;
}

// Counts may be written as 50000 or 5e4.
bool parse_count(std::string_view text, std::size_t& out) {
  if (parse_number(text, out)) return true;
  double d = 0.0;
  if (!parse_number(text, d) || !(d >= 0.0) || d != std::floor(d) || d > 1e15) return false;
  out = static_cast<std::size_t>(d);
  return true;
}

bool parse_flag(std::string_view text, bool& out) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return out = true, true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return out = false, true;
  return false;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::invalid_argument(join_lines(problems)), problems_(std::move(problems)) {}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::BetaAD: return "beta-ad";
    case Variant::BetaOMT: return "beta-omt";
    case Variant::Normal: return "normal";
    case Variant::TanhNormal: return "tanh-normal";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::BetaAD, Variant::BetaOMT, Variant::Normal, Variant::TanhNormal}) {
    if (to_string(v) == name) return v;
  }
  throw ConfigError({"variant: unknown variant '" + std::string(name) +
                     "' (expected beta-ad, beta-omt, normal or tanh-normal)"});
}

bool is_beta(Variant v) { return v == Variant::BetaAD || v == Variant::BetaOMT; }

RunConfig full_scale_config() {
  RunConfig c;
  c.total_steps = 1000000;
  c.warmup_steps = 10000;
  c.test_every = 5000;
  return c;
}

std::string default_output_root() {
  const char* root = std::getenv("SACBETA_OUT_ROOT");
  return (root != nullptr && *root != '\0') ? std::string(root) : std::string("runs");
}

void set_field(RunConfig& c, std::string_view key, std::string_view value, std::vector<std::string>& problems) {
  key = trim(key);
  value = trim(value);
  const std::string k(key);
  auto bad = [&](const char* what) { problems.push_back(k + ": expected " + what + ", got '" + std::string(value) + "'"); };
  auto count = [&](std::size_t& field) {
    if (!parse_count(value, field)) bad("a non-negative integer");
  };
  auto real = [&](double& field) {
    if (!parse_number(value, field)) bad("a number");
  };
  auto flag = [&](bool& field) {
    if (!parse_flag(value, field)) bad("true or false");
  };

  if (key == "env") {
    c.env = std::string(value);
  } else if (key == "variant" || key == "variants") {
    std::vector<Variant> vs;
    for (auto item : split_list(value)) {
      try {
        vs.push_back(parse_variant(item));
      } catch (const ConfigError& e) {
        problems.insert(problems.end(), e.problems().begin(), e.problems().end());
      }
    }
    c.variants = std::move(vs);
  } else if (key == "seeds") {
    std::vector<std::uint64_t> seeds;
    for (auto item : split_list(value)) {
      std::uint64_t s = 0;
      if (!parse_number(item, s)) {
        problems.push_back("seeds: '" + std::string(item) + "' is not a non-negative integer");
      } else {
        seeds.push_back(s);
      }
    }
    c.seeds = std::move(seeds);
  } else if (key == "steps") {
    count(c.total_steps);
  } else if (key == "warmup") {
    count(c.warmup_steps);
  } else if (key == "test_every") {
    count(c.test_every);
  } else if (key == "test_episodes") {
    count(c.test_episodes);
  } else if (key == "hidden_layers") {
    count(c.hidden_layers);
  } else if (key == "hidden_units") {
    count(c.hidden_units);
  } else if (key == "learning_rate") {
    real(c.learning_rate);
  } else if (key == "batch_size") {
    count(c.batch_size);
  } else if (key == "buffer_size") {
    count(c.buffer_size);
  } else if (key == "discount") {
    real(c.discount);
  } else if (key == "tau") {
    real(c.tau);
  } else if (key == "target_update_every") {
    count(c.target_update_every);
  } else if (key == "temperature") {
    real(c.temperature);
  } else if (key == "log_std_min") {
    real(c.log_std_min);
  } else if (key == "log_std_max") {
    real(c.log_std_max);
  } else if (key == "log_conc_min") {
    real(c.log_conc_min);
  } else if (key == "log_conc_max") {
    real(c.log_conc_max);
  } else if (key == "updates_per_step") {
    count(c.updates_per_step);
  } else if (key == "no_clip") {
    flag(c.ablations.no_clip);
  } else if (key == "non_concave") {
    flag(c.ablations.non_concave);
  } else if (key == "softplus") {
    flag(c.ablations.softplus);
  } else if (key == "out") {
    c.out_dir = std::string(value);
  } else if (key == "workers") {
    count(c.workers);
  } else if (key == "wall_clock") {
    flag(c.record_wall_clock);
  } else {
    problems.push_back("unknown key '" + k + "'");
  }
}

void apply_config_text(RunConfig& config, std::string_view text, std::string_view origin) {
  std::vector<std::string> problems;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(std::string(origin) + ":" + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    std::vector<std::string> local;
    set_field(config, line.substr(0, eq), line.substr(eq + 1), local);
    for (auto& p : local) problems.push_back(std::string(origin) + ":" + std::to_string(line_no) + ": " + p);
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot read '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(config, ss.str(), path);
}

void validate(const RunConfig& c) {
  std::vector<std::string> p;
  try {
    (void)env::make_environment(c.env);
  } catch (const std::invalid_argument&) {
    p.push_back("env: unknown environment '" + c.env + "' (expected pendulum or reacher2d)");
  }
  if (c.variants.empty()) p.push_back("variant: at least one variant is required");
  if (c.ablations.any()) {
    for (Variant v : c.variants) {
      if (!is_beta(v)) {
        p.push_back("ablations: no_clip, non_concave and softplus apply only to beta variants, not " +
                    std::string(to_string(v)));
      }
    }
  }
  if (c.seeds.empty()) p.push_back("seeds: at least one seed is required");
  if (c.warmup_steps > c.total_steps) p.push_back("warmup: exceeds total steps");
  if (c.test_every == 0) p.push_back("test_every: must be positive");
  if (c.test_episodes == 0) p.push_back("test_episodes: must be positive");
  if (c.hidden_units == 0 && c.hidden_layers > 0) p.push_back("hidden_units: must be positive");
  if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate)) p.push_back("learning_rate: must be positive");
  if (c.batch_size == 0) p.push_back("batch_size: must be positive");
  if (c.buffer_size == 0) p.push_back("buffer_size: must be positive");
  if (!(c.discount >= 0.0 && c.discount <= 1.0)) p.push_back("discount: must lie in [0, 1]");
  if (!(c.tau >= 0.0 && c.tau <= 1.0)) p.push_back("tau: must lie in [0, 1]");
  if (c.target_update_every == 0) p.push_back("target_update_every: must be positive");
  if (!(c.temperature >= 0.0) || !std::isfinite(c.temperature)) p.push_back("temperature: must be non-negative");
  if (!(c.log_std_min < c.log_std_max)) p.push_back("log_std_min: must be below log_std_max");
  if (!(c.log_conc_min < c.log_conc_max)) p.push_back("log_conc_min: must be below log_conc_max");
  if (c.updates_per_step == 0) p.push_back("updates_per_step: must be positive");
  if (!p.empty()) throw ConfigError(std::move(p));
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  os << "# weight init: uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)), all layers\n";
  os << "env = " << c.env << "\n";
  os << "variant = ";
  for (std::size_t i = 0; i < c.variants.size(); ++i) os << (i ? "," : "") << to_string(c.variants[i]);
  os << "\nseeds = ";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) os << (i ? "," : "") << c.seeds[i];
  os << "\nsteps = " << c.total_steps << "\nwarmup = " << c.warmup_steps << "\ntest_every = " << c.test_every
     << "\ntest_episodes = " << c.test_episodes << "\nhidden_layers = " << c.hidden_layers
     << "\nhidden_units = " << c.hidden_units << "\nlearning_rate = " << fmt(c.learning_rate)
     << "\nbatch_size = " << c.batch_size << "\nbuffer_size = " << c.buffer_size
     << "\ndiscount = " << fmt(c.discount) << "\ntau = " << fmt(c.tau)
     << "\ntarget_update_every = " << c.target_update_every << "\ntemperature = " << fmt(c.temperature)
     << "\nlog_std_min = " << fmt(c.log_std_min) << "\nlog_std_max = " << fmt(c.log_std_max)
     << "\nlog_conc_min = " << fmt(c.log_conc_min) << "\nlog_conc_max = " << fmt(c.log_conc_max)
     << "\nupdates_per_step = " << c.updates_per_step << "\nno_clip = " << (c.ablations.no_clip ? "true" : "false")
     << "\nnon_concave = " << (c.ablations.non_concave ? "true" : "false")
     << "\nsoftplus = " << (c.ablations.softplus ? "true" : "false") << "\n";
  if (!c.out_dir.empty()) os << "out = " << c.out_dir << "\n";
  os << "workers = " << c.workers << "\nwall_clock = " << (c.record_wall_clock ? "true" : "false") << "\n";
  return os.str();
}

std::string variant_label(Variant v, const Ablations& a) {
  std::string s(to_string(v));
  if (is_beta(v)) {
    if (a.no_clip) s += "-no_clip";
    if (a.non_concave) s += "-non_concave";
    if (a.softplus) s += "-softplus";
  }
  return s;
}

std::string run_id(const RunConfig& c, Variant v, std::uint64_t seed) {
  return c.env + "_" + variant_label(v, c.ablations) + "_s" + std::to_string(seed);
}

sac::TrainConfig to_train_config(const RunConfig& c, Variant v, std::uint64_t seed) {
  sac::TrainConfig t;
  t.total_steps = c.total_steps;
  t.warmup_steps = c.warmup_steps;
  t.test_every = c.test_every;
  t.test_episodes = c.test_episodes;
  t.buffer_capacity = c.buffer_size;
  t.updates_per_step = c.updates_per_step;
  t.target_update_every = c.target_update_every;
  t.seed = seed;
  t.record_wall_clock = c.record_wall_clock;

  sac::SacOptions& s = t.sac;
  s.discount = c.discount;
  s.tau = c.tau;
  s.temperature = c.temperature;
  s.learning_rate = c.learning_rate;
  s.batch_size = c.batch_size;
  s.hidden.assign(c.hidden_layers, c.hidden_units);

  sac::PolicyConfig& p = s.policy;
  p.log_std_clip = {true, c.log_std_min, c.log_std_max};
  p.beta.clip = {!c.ablations.no_clip, c.log_conc_min, c.log_conc_max};
  p.beta.shift = !c.ablations.non_concave;
  p.beta.map = c.ablations.softplus ? dist::ConcentrationMap::Softplus : dist::ConcentrationMap::Exp;
  switch (v) {
    case Variant::BetaAD:
      p.family = dist::Family::Beta;
      p.estimator = dist::EstimatorKind::ImplicitAD;
      break;
    case Variant::BetaOMT:
      p.family = dist::Family::Beta;
      p.estimator = dist::EstimatorKind::ImplicitOMT;
      break;
    case Variant::Normal: p.family = dist::Family::Normal; break;
    case Variant::TanhNormal: p.family = dist::Family::TanhNormal; break;
  }
  return t;
}

}  // namespace sacbeta::harness
