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

#include "sacbeta/harness/metrics_csv.hpp"

#include <charconv>
#include <cstdio>

namespace sacbeta::harness {
namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T number(std::string_view text, const char* column) {
  T out{};
  const auto r = std::from_chars(text.data(), text.data() + text.size(), out);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw CsvError(std::string("bad value in column ") + column + ": '" + std::string(text) + "'");
  }
  return out;
}

double real(std::string_view text, const char* column) { return number<double>(text, column); }

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_row(const CsvRow& r) {
  const auto& m = r.metrics;
  std::string s = r.run_id + "," + r.variant + "," + std::to_string(r.seed) + "," + r.env + "," +
                  std::to_string(m.step) + "," + format_real(m.mean_return) + "," + format_real(m.std_return) +
                  "," + format_real(m.critic_loss) + "," + format_real(m.actor_loss) + ",";
  if (m.wall_clock_s) s += format_real(*m.wall_clock_s);
  return s;
}

CsvRow parse_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto f = split(line);
  if (f.size() != 10) throw CsvError("expected 10 columns, got " + std::to_string(f.size()));
  CsvRow r;
  r.run_id = std::string(f[0]);
  r.variant = std::string(f[1]);
  r.seed = number<std::uint64_t>(f[2], "seed");
  r.env = std::string(f[3]);
  r.metrics.step = number<std::size_t>(f[4], "step");
  r.metrics.mean_return = real(f[5], "mean_return");
  r.metrics.std_return = real(f[6], "std_return");
  r.metrics.critic_loss = real(f[7], "critic_loss");
  r.metrics.actor_loss = real(f[8], "actor_loss");
  if (!f[9].empty()) r.metrics.wall_clock_s = real(f[9], "wall_clock_s");
  return r;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw CsvError("cannot write '" + path + "'");
  out_ << kCsvHeader << '\n';
  out_.flush();
}

void CsvWriter::write(const CsvRow& row) {
  out_ << format_row(row) << '\n';
  out_.flush();
  if (!out_) throw CsvError("write failed for '" + path_ + "'");
}

std::vector<CsvRow> read_metrics_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw CsvError(path + ": unexpected header '" + line + "'");
  std::vector<CsvRow> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      rows.push_back(parse_row(line));
    } catch (const CsvError& e) {
      throw CsvError(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace sacbeta::harness
