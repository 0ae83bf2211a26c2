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

// sacbeta: train, matrix, plot and gradcheck subcommands.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sacbeta/gradcheck/oracles.hpp"
#include "sacbeta/harness/config.hpp"
#include "sacbeta/harness/matrix.hpp"
#include "sacbeta/harness/plot.hpp"
#include "sacbeta/neural/checkpoint.hpp"

namespace {

using namespace sacbeta;
namespace fs = std::filesystem;

// Flags are recorded as key = value overrides and applied after --config so
// the command line always wins.
struct Overrides {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> entries;
};

void add_run_flags(CLI::App* app, Overrides& ov) {
  app->add_option("--config", ov.config_path, "key = value configuration file");
  auto value = [&](const char* flag, const char* key, const char* help) {
    app->add_option_function<std::string>(
        flag, [&ov, key](const std::string& v) { ov.entries.emplace_back(key, v); }, help);
  };
  auto toggle = [&](const char* flag, const char* key, const char* help) {
    app->add_flag_callback(flag, [&ov, key] { ov.entries.emplace_back(key, "true"); }, help);
  };
  value("--env", "env", "pendulum or reacher2d");
  value("--variant", "variant", "beta-ad, beta-omt, normal, tanh-normal (comma list for matrix)");
  value("--seeds", "seeds", "comma-separated seeds");
  value("--steps", "steps", "total environment steps, warmup included");
  value("--warmup", "warmup", "uniform-random warmup steps");
  value("--test-every", "test_every", "post-warmup steps between evaluations");
  value("--test-episodes", "test_episodes", "episodes per evaluation");
  value("--temperature", "temperature", "entropy temperature");
  value("--hidden", "hidden_units", "units per hidden layer");
  value("--hidden-layers", "hidden_layers", "number of hidden layers");
  value("--batch", "batch_size", "minibatch size");
  value("--lr", "learning_rate", "Adam learning rate");
  value("--out", "out", "output directory (default $SACBETA_OUT_ROOT or ./runs)");
  value("--workers", "workers", "parallel runs (matrix; default one per seed)");
  toggle("--no-clip", "no_clip", "ablation: do not clip log concentrations");
  toggle("--non-concave", "non_concave", "ablation: drop the +1 concentration shift");
  toggle("--softplus", "softplus", "ablation: softplus concentration map");
  toggle("--wall-clock", "wall_clock", "fill the wall_clock_s column (breaks byte-identical reruns)");
}

harness::RunConfig resolve(const Overrides& ov, harness::RunConfig base) {
  if (!ov.config_path.empty()) harness::apply_config_file(base, ov.config_path);
  std::vector<std::string> problems;
  for (const auto& [k, v] : ov.entries) harness::set_field(base, k, v, problems);
  if (!problems.empty()) throw harness::ConfigError(problems);
  harness::validate(base);
  if (base.out_dir.empty()) base.out_dir = harness::default_output_root();
  return base;
}

void print_log(const std::string& msg) { std::cerr << msg << std::endl; }

int cmd_train(const Overrides& ov, const std::string& checkpoint) {
  harness::RunConfig base;
  base.seeds = {1};
  const harness::RunConfig cfg = resolve(ov, base);
  if (cfg.variants.size() != 1) throw harness::ConfigError({"variant: train takes exactly one variant"});
  if (cfg.seeds.size() != 1) throw harness::ConfigError({"seeds: train takes exactly one seed; use matrix"});
  const auto variant = cfg.variants.front();
  const auto seed = cfg.seeds.front();

  const std::string id = harness::run_id(cfg, variant, seed);
  fs::create_directories(cfg.out_dir);
  std::ofstream(fs::path(cfg.out_dir) / (id + ".config.txt"), std::ios::binary | std::ios::trunc)
      << harness::to_config_text(cfg);
  harness::CsvWriter csv((fs::path(cfg.out_dir) / (id + ".csv")).string());
  std::ofstream events(fs::path(cfg.out_dir) / (id + ".log"), std::ios::binary | std::ios::trunc);
  const std::string label = harness::variant_label(variant, cfg.ablations);

  sac::TrainHooks hooks;
  hooks.on_record = [&](const sac::MetricsRecord& m) {
    csv.write({id, label, seed, cfg.env, m});
    std::fprintf(stderr, "step %zu  return %.2f ± %.2f  critic %.4g  actor %.4g\n", m.step, m.mean_return,
                 m.std_return, m.critic_loss, m.actor_loss);
  };
  hooks.on_event = [&](const std::string& msg) {
    events << msg << '\n';
    print_log(msg);
  };
  hooks.on_finish = [&](sac::SacAgent& agent) {
    if (checkpoint.empty()) return;
    std::vector<const nn::Parameter*> params;
    const sac::SacAgent& a = agent;
    for (const nn::Mlp* net : {&a.policy().network(), &a.q1(), &a.q2()}) {
      for (const nn::Parameter* p : net->parameters()) params.push_back(p);
    }
    nn::save_checkpoint(checkpoint, params,
                        {{"run_id", id}, {"variant", label}, {"env", cfg.env}, {"seed", std::to_string(seed)},
                         {"init", "uniform_fan_in"}});
  };
  auto env = env::make_environment(cfg.env);
  const sac::TrainResult r = sac::train(harness::to_train_config(cfg, variant, seed), *env, hooks);
  std::fprintf(stderr, "%s: %zu steps, %zu updates%s\n", id.c_str(), r.steps_done, r.updates,
               r.aborted ? (", aborted: " + r.abort_reason).c_str() : "");
  return r.aborted ? 2 : 0;
}

int cmd_matrix(const Overrides& ov) {
  const harness::RunConfig cfg = resolve(ov, {});
  const harness::MatrixResult m = harness::run_matrix(cfg, print_log);
  std::cout << harness::format_summary_table(m.summary);
  std::cout << "results in " << m.out_dir << "\n";
  return m.exit_code();
}

int cmd_plot(const std::string& in_dir, const std::string& out_dir) {
  const auto csvs = harness::list_metric_csvs(in_dir);
  if (csvs.empty()) throw std::runtime_error("no metric CSVs in '" + in_dir + "'");
  for (const auto& path : harness::plot_curves(csvs, out_dir.empty() ? in_dir : out_dir)) std::cout << path << "\n";
  return 0;
}

int cmd_gradcheck(std::size_t samples, std::uint64_t seed) {
  using dist::EstimatorKind;
  std::vector<gradcheck::Suite> suites;
  suites.push_back(gradcheck::gamma_gradient_suite(EstimatorKind::ImplicitAD, 1e-3));
  suites.push_back(gradcheck::gamma_gradient_suite(EstimatorKind::ImplicitOMT, 1e-2));
  suites.push_back(gradcheck::beta_fixed_uniform_suite(EstimatorKind::ImplicitAD, 1e-3));
  suites.push_back(gradcheck::beta_fixed_uniform_suite(EstimatorKind::ImplicitOMT, 1e-2));
  suites.push_back(gradcheck::pathwise_expectation_suite(EstimatorKind::ImplicitAD, samples, seed));
  suites.push_back(gradcheck::pathwise_expectation_suite(EstimatorKind::ImplicitOMT, samples, seed + 1));
  suites.push_back(gradcheck::sampler_ks_suite(samples / 5, seed + 2));

  bool ok = true;
  for (const auto& s : suites) {
    std::printf("%s  [%s, %.2fs]\n", s.name.c_str(), s.pass() ? "PASS" : "FAIL", s.seconds);
    for (const auto& c : s.checks) {
      std::printf("  %-4s %-40s est %-14.8g ref %-14.8g tol %.3g\n", c.pass ? "ok" : "FAIL", c.name.c_str(),
                  c.estimate, c.reference, c.tolerance);
    }
    ok = ok && s.pass();
  }
  std::printf("%s\n", ok ? "all suites passed" : "some suites FAILED");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft actor-critic with implicitly reparameterized beta policies"};
  app.require_subcommand(1);

  Overrides train_ov, matrix_ov;
  std::string checkpoint;
  auto* train = app.add_subcommand("train", "single training run");
  add_run_flags(train, train_ov);
  train->add_option("--checkpoint", checkpoint, "write final network weights to this file");

  auto* matrix = app.add_subcommand("matrix", "variant x seed grid with summary");
  add_run_flags(matrix, matrix_ov);

  std::string plot_in, plot_out;
  auto* plot = app.add_subcommand("plot", "return curves from a directory of CSVs");
  plot->add_option("--in", plot_in, "directory of metric CSVs")->required();
  plot->add_option("--out", plot_out, "directory for the SVG files (default: --in)");

  std::size_t samples = 100000;
  std::uint64_t seed = 12345;
  auto* grad = app.add_subcommand("gradcheck", "run the estimator oracle suites");
  grad->add_option("--samples", samples, "Monte Carlo samples per setting");
  grad->add_option("--seed", seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train) return cmd_train(train_ov, checkpoint);
    if (*matrix) return cmd_matrix(matrix_ov);
    if (*plot) return cmd_plot(plot_in, plot_out);
    if (*grad) return cmd_gradcheck(samples, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
