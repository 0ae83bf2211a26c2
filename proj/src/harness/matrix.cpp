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

#include "sacbeta/harness/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace sacbeta::harness {

namespace fs = std::filesystem;

RunOutcome run_single(const RunConfig& config, Variant variant, std::uint64_t seed, const std::string& out_dir,
                      const LogFn& log, std::string id) {
  RunOutcome out;
  out.run_id = id.empty() ? run_id(config, variant, seed) : std::move(id);
  out.variant = variant;
  out.seed = seed;
  fs::create_directories(out_dir);
  out.csv_path = (fs::path(out_dir) / (out.run_id + ".csv")).string();
  out.log_path = (fs::path(out_dir) / (out.run_id + ".log")).string();

  CsvWriter csv(out.csv_path);
  std::ofstream events(out.log_path, std::ios::binary | std::ios::trunc);
  const std::string label = variant_label(variant, config.ablations);

  sac::TrainHooks hooks;
  hooks.on_record = [&](const sac::MetricsRecord& m) { csv.write({out.run_id, label, seed, config.env, m}); };
  hooks.on_event = [&](const std::string& msg) {
    events << msg << '\n';
    events.flush();
    if (log) log(out.run_id + ": " + msg);
  };
  try {
    auto env = env::make_environment(config.env);
    out.result = sac::train(to_train_config(config, variant, seed), *env, hooks);
  } catch (const std::exception& e) {
    out.error = e.what();
    events << "error: " << e.what() << '\n';
    if (log) log(out.run_id + ": error: " + e.what());
  }
  return out;
}

std::vector<std::string> list_metric_csvs(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    if (entry.path().filename() == "summary.csv") continue;
    out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool log_records_abort(const std::string& csv_path) {
  fs::path log = csv_path;
  log.replace_extension(".log");
  std::ifstream in(log);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("abort", 0) == 0) return true;
  }
  return false;
}

}  // namespace

std::vector<SummaryRow> summarize_csvs(const std::vector<std::string>& csv_paths) {
  struct Run {
    std::uint64_t seed;
    std::string path;
    double final;
  };
  std::map<std::pair<std::string, std::string>, std::vector<Run>> groups;
  for (const auto& path : csv_paths) {
    const auto rows = read_metrics_csv(path);
    if (rows.empty()) continue;  // header only: nothing to summarize
    const auto& last = rows.back();
    groups[{last.env, last.variant}].push_back({last.seed, path, last.metrics.mean_return});
  }
  std::vector<SummaryRow> out;
  for (auto& [key, runs] : groups) {
    std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
      return a.seed != b.seed ? a.seed < b.seed : a.path < b.path;
    });
    SummaryRow row;
    row.env = key.first;
    row.variant = key.second;
    for (const Run& r : runs) {
      row.finals.push_back(r.final);
      if (log_records_abort(r.path)) ++row.aborted;
    }
    row.runs = row.finals.size();
    double sum = 0.0;
    for (double f : row.finals) sum += f;
    row.final_mean = sum / static_cast<double>(row.runs);
    if (row.runs > 1) {
      double ss = 0.0;
      for (double f : row.finals) ss += (f - row.final_mean) * (f - row.final_mean);
      row.final_std = std::sqrt(ss / static_cast<double>(row.runs - 1));
    }
    out.push_back(std::move(row));
  }
  return out;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CsvError("cannot write '" + path + "'");
  out << "env,variant,runs,final_mean,final_std,two_sigma,aborted\n";
  for (const auto& r : rows) {
    out << r.env << ',' << r.variant << ',' << r.runs << ',' << format_real(r.final_mean) << ','
        << format_real(r.final_std) << ',' << format_real(r.two_sigma()) << ',' << r.aborted << '\n';
  }
}

std::string format_summary_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %-28s %24s %5s %8s\n", "env", "variant", "final return (mean ± 2σ)",
                "runs", "aborted");
  os << buf;
  for (const auto& r : rows) {
    char cell[64];
    std::snprintf(cell, sizeof cell, "%.1f ± %.1f", r.final_mean, r.two_sigma());
    std::snprintf(buf, sizeof buf, "%-10s %-28s %24s %5zu %8zu\n", r.env.c_str(), r.variant.c_str(), cell, r.runs,
                  r.aborted);
    os << buf;
  }
  return os.str();
}

bool MatrixResult::any_aborted() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunOutcome& r) { return r.result.aborted; });
}

bool MatrixResult::any_failed() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunOutcome& r) { return !r.error.empty(); });
}

int MatrixResult::exit_code() const {
  if (any_failed()) return 1;
  return any_aborted() ? 2 : 0;
}

MatrixResult run_matrix(const RunConfig& config, const LogFn& log) {
  validate(config);
  MatrixResult result;
  result.out_dir = config.out_dir.empty() ? default_output_root() : config.out_dir;
  fs::create_directories(result.out_dir);
  {
    std::ofstream cfg(fs::path(result.out_dir) / "config.txt", std::ios::binary | std::ios::trunc);
    cfg << to_config_text(config);
  }

  struct Job {
    Variant variant;
    std::uint64_t seed;
    std::string id;
  };
  // A repeated seed is a legitimate (reproducible) request; its later copies
  // get a _rN suffix so every run keeps its own file.
  std::vector<Job> jobs;
  std::map<std::string, int> seen;
  for (Variant v : config.variants) {
    for (std::uint64_t s : config.seeds) {
      std::string id = run_id(config, v, s);
      if (const int n = seen[id]++; n > 0) id += "_r" + std::to_string(n + 1);
      jobs.push_back({v, s, std::move(id)});
    }
  }
  result.runs.resize(jobs.size());

  std::mutex log_mutex;
  LogFn safe_log = [&](const std::string& msg) {
    if (!log) return;
    std::lock_guard<std::mutex> lock(log_mutex);
    log(msg);
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      safe_log("start " + jobs[i].id);
      result.runs[i] = run_single(config, jobs[i].variant, jobs[i].seed, result.out_dir, safe_log, jobs[i].id);
      const auto& r = result.runs[i];
      std::ostringstream os;
      os << "done " << r.run_id << " (" << r.result.records.size() << " records";
      if (r.result.aborted) os << ", aborted at step " << r.result.abort_step;
      os << ")";
      safe_log(os.str());
    }
  };

  std::size_t workers = config.workers ? config.workers : config.seeds.size();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(jobs.size(), 1));

  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<std::string> csvs;
  for (const auto& r : result.runs) csvs.push_back(r.csv_path);
  result.summary = summarize_csvs(csvs);
  write_summary_csv(result.summary, (fs::path(result.out_dir) / "summary.csv").string());
  std::ofstream(fs::path(result.out_dir) / "summary.txt", std::ios::binary | std::ios::trunc)
      << format_summary_table(result.summary);
  return result;
}

}  // namespace sacbeta::harness
