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

#include "sacbeta/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace sacbeta::harness {

std::vector<double> smooth_curve(const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(n - 1, i + 1);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += y[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::map<std::string, std::vector<VariantCurve>> compute_curves(const std::vector<CsvRow>& rows) {
  // env -> variant -> run id -> rows in file order
  std::map<std::string, std::map<std::string, std::map<std::string, std::vector<const CsvRow*>>>> grouped;
  for (const CsvRow& r : rows) grouped[r.env][r.variant][r.run_id].push_back(&r);

  std::map<std::string, std::vector<VariantCurve>> out;
  for (const auto& [env, variants] : grouped) {
    for (const auto& [variant, runs] : variants) {
      VariantCurve c;
      c.variant = variant;
      c.seeds = runs.size();
      std::vector<std::vector<double>> smoothed;
      std::string first_id;
      for (const auto& [id, rs] : runs) {
        std::vector<std::size_t> steps;
        std::vector<double> y;
        for (const CsvRow* r : rs) {
          steps.push_back(r->metrics.step);
          y.push_back(r->metrics.mean_return);
        }
        if (smoothed.empty()) {
          c.steps = steps;
          first_id = id;
        } else if (steps != c.steps) {
          throw MissingDataError(env + "/" + variant + ": run " + id + " was evaluated at different steps than " +
                                 first_id);
        }
        smoothed.push_back(smooth_curve(y));
      }
      const std::size_t n = c.steps.size();
      const double k = static_cast<double>(smoothed.size());
      c.mean.assign(n, 0.0);
      c.half_width.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const auto& s : smoothed) sum += s[i];
        c.mean[i] = sum / k;
        if (smoothed.size() > 1) {
          double ss = 0.0;
          for (const auto& s : smoothed) ss += (s[i] - c.mean[i]) * (s[i] - c.mean[i]);
          c.half_width[i] = 2.0 * std::sqrt(ss / (k - 1.0));
        }
      }
      out[env].push_back(std::move(c));
    }
  }
  return out;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x == 0.0 ? 0.0 : x);
  return buf;
}

// Round tick spacing: 1, 2 or 5 times a power of ten.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::string& env, const std::vector<VariantCurve>& curves) {
  constexpr double W = 720, H = 460, L = 80, R = 180, T = 40, B = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
      x0 = std::min(x0, static_cast<double>(c.steps[i]));
      x1 = std::max(x1, static_cast<double>(c.steps[i]));
      if (std::isfinite(c.mean[i]) && std::isfinite(c.half_width[i])) {
        y0 = std::min(y0, c.mean[i] - c.half_width[i]);
        y1 = std::max(y1, c.mean[i] + c.half_width[i]);
      }
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y0 -= 1, y1 += 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num((L + W - R) / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(env) << "</text>\n";

  // Axes and ticks.
  os << "<g stroke=\"#444\" fill=\"none\"><path d=\"M" << L << ' ' << T << "V" << H - B << "H" << W - R
     << "\"/></g>\n";
  const double xs = nice_step(x1 - x0, 6);
  for (double k = std::ceil(x0 / xs); k * xs <= x1 + 1e-9 * xs; k += 1.0) {
    const double x = k * xs;
    os << "<line x1=\"" << num(px(x)) << "\" y1=\"" << H - B << "\" x2=\"" << num(px(x)) << "\" y2=\""
       << H - B + 5 << "\" stroke=\"#444\"/>";
    os << "<text x=\"" << num(px(x)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << tick(x) << "</text>\n";
  }
  const double ys = nice_step(y1 - y0, 6);
  for (double k = std::ceil(y0 / ys); k * ys <= y1 + 1e-9 * ys; k += 1.0) {
    const double y = k * ys;
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << num(py(y)) << "\" x2=\"" << W - R << "\" y2=\"" << num(py(y))
       << "\" stroke=\"#ddd\"/>";
    os << "<text x=\"" << L - 8 << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">" << tick(y) << "</text>\n";
  }
  os << "<text x=\"" << num((L + W - R) / 2) << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">Steps</text>\n";
  os << "<text transform=\"translate(20," << num((T + H - B) / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">Average return</text>\n";

  for (std::size_t v = 0; v < curves.size(); ++v) {
    const auto& c = curves[v];
    const char* color = kPalette[v % std::size(kPalette)];
    if (c.steps.empty()) continue;
    os << "<path fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" d=\"";
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
      os << (i ? "L" : "M") << num(px(c.steps[i])) << ' ' << num(py(c.mean[i] + c.half_width[i]));
    }
    for (std::size_t i = c.steps.size(); i-- > 0;) {
      os << "L" << num(px(c.steps[i])) << ' ' << num(py(c.mean[i] - c.half_width[i]));
    }
    os << "Z\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
      os << (i ? " " : "") << num(px(c.steps[i])) << ',' << num(py(c.mean[i]));
    }
    os << "\"/>\n";
    const double ly = T + 10 + 20.0 * static_cast<double>(v);
    os << "<line x1=\"" << W - R + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 40 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>";
    os << "<text x=\"" << W - R + 46 << "\" y=\"" << ly + 4 << "\">" << escape(c.variant) << " (n=" << c.seeds
       << ")</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::string> plot_curves(const std::vector<std::string>& csv_paths, const std::string& out_dir) {
  std::vector<CsvRow> rows;
  for (const auto& path : csv_paths) {
    auto r = read_metrics_csv(path);
    rows.insert(rows.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  }
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& [env, curves] : compute_curves(rows)) {
    const auto path = (std::filesystem::path(out_dir) / (env + ".svg")).string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << render_svg(env, curves);
    written.push_back(path);
  }
  return written;
}

}  // namespace sacbeta::harness
