// Copyright 2026 The parkcover Authors.
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

#include <algorithm>
#include <fstream>
#include <limits>
#include <tuple>
#include <string>

#include <fmt/format.h>

#include "parkcover/error.h"
#include "parkcover/evaluation.h"

namespace parkcover {
namespace {

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo, fmt::format("cannot write {}", path.string()));
  }
  return out;
}

std::string TrialLabel(const PlanEvaluation& e) {
  return e.label == "optimal" ? e.label : fmt::format("{}#{}", e.label, e.trial);
}

constexpr int kWidth = 720;
constexpr int kHeight = 420;
constexpr int kMargin = 60;

void SvgHeader(std::ofstream& out, std::string_view title) {
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{3}"
      "</text>\n",
      kWidth, kHeight, kWidth / 2, title);
  out << fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{3}\" y2=\"{1}\" stroke=\"black\"/>\n",
      kMargin, kHeight - kMargin, kMargin / 2, kWidth - kMargin / 2);
}

}  // namespace

void WriteUndetectedCsv(const EvaluationReport& report,
                        const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  out << "plan,window_index,undetected\n";
  auto emit = [&](const PlanEvaluation& e) {
    for (size_t w = 0; w < e.undetected.size(); ++w) {
      out << TrialLabel(e) << ',' << w << ',' << e.undetected[w] << '\n';
    }
  };
  emit(report.optimal);
  for (const auto& e : report.random_trials) emit(e);
}

void WriteSummaryCsv(const EvaluationReport& report,
                     const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  out << "plan,plan_size,mean_undetected\n";
  out << fmt::format("{},{},{:.4f}\n", report.optimal.label,
                     report.optimal.plan_size, report.optimal.mean_undetected);
  for (const auto& s : report.random_sizes) {
    out << fmt::format("random-{},{},{:.4f}\n", s.size, s.size,
                       s.mean_undetected);
  }
}

void WriteSpeedupCsv(std::span<const SpeedupRow> rows,
                     const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  out << "objective,benchmark_s,stcb_s,percent\n";
  for (const auto& r : rows) {
    out << r.objective << ',' << FormatSeconds(r.benchmark_s) << ','
        << FormatSeconds(r.stcb_s) << ',' << FormatPercent(r.percent) << '\n';
  }
}

void WriteUndetectedSvg(const EvaluationReport& report,
                        const std::filesystem::path& path) {
  std::vector<std::pair<std::string, double>> bars;
  bars.emplace_back(fmt::format("{} ({})", report.optimal.label,
                                report.optimal.plan_size),
                    report.optimal.mean_undetected);
  for (const auto& s : report.random_sizes) {
    bars.emplace_back(fmt::format("random {}", s.size), s.mean_undetected);
  }
  double top = 1.0;
  for (const auto& b : bars) top = std::max(top, b.second);

  auto out = OpenForWrite(path);
  SvgHeader(out, fmt::format("Mean undetected streets per {:g}-min window",
                             report.window));
  const double plot_w = kWidth - 1.5 * kMargin;
  const double plot_h = kHeight - 2.0 * kMargin;
  const double slot = plot_w / bars.size();
  for (size_t i = 0; i < bars.size(); ++i) {
    const double h = plot_h * bars[i].second / top;
    const double x = kMargin + i * slot + 0.15 * slot;
    const double y = kHeight - kMargin - h;
    out << fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
        "fill=\"{}\"/>\n",
        x, y, 0.7 * slot, h, i == 0 ? "#2b7bb9" : "#c8553d");
    out << fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.2f}</text>\n",
        x + 0.35 * slot, y - 4, bars[i].second);
    out << fmt::format(
        "<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        x + 0.35 * slot, kHeight - kMargin + 16, bars[i].first);
  }
  out << "</svg>\n";
}

void WriteIncumbentSvg(const IncumbentLog& benchmark, const IncumbentLog& stcb,
                       const std::filesystem::path& path) {
  double t_max = 1e-3;
  int lo = std::numeric_limits<int>::max(), hi = 0;
  for (const auto* log : {&benchmark, &stcb}) {
    for (const auto& e : log->entries) {
      t_max = std::max(t_max, e.elapsed_s);
      lo = std::min(lo, e.objective);
      hi = std::max(hi, e.objective);
    }
  }
  if (lo > hi) lo = hi = 0;
  if (lo == hi) ++hi;
  t_max *= 1.05;

  const double plot_w = kWidth - 1.5 * kMargin;
  const double plot_h = kHeight - 2.0 * kMargin;
  auto px = [&](double t) { return kMargin + plot_w * t / t_max; };
  auto py = [&](int obj) {
    return kHeight - kMargin - plot_h * (obj - lo) / static_cast<double>(hi - lo);
  };

  auto out = OpenForWrite(path);
  SvgHeader(out, "Incumbent objective over time");
  int legend = 0;
  for (const auto& [log, name, color] :
       {std::tuple{&benchmark, "benchmark", "#2b7bb9"},
        std::tuple{&stcb, "stcb", "#c8553d"}}) {
    if (!log->entries.empty()) {
      std::string points;
      int prev = log->entries.front().objective;
      for (const auto& e : log->entries) {
        if (!points.empty()) {
          points += fmt::format("{:.1f},{:.1f} ", px(e.elapsed_s), py(prev));
        }
        points += fmt::format("{:.1f},{:.1f} ", px(e.elapsed_s), py(e.objective));
        prev = e.objective;
      }
      points += fmt::format("{:.1f},{:.1f}", px(t_max), py(prev));
      out << fmt::format(
          "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" "
          "stroke-width=\"2\"/>\n",
          points, color);
    }
    out << fmt::format(
        "<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", kWidth - 140,
        kMargin + 16 * legend++, color, name);
  }
  out << fmt::format(
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">time (s), max {:.2f}"
      "</text>\n",
      kWidth / 2, kHeight - kMargin / 3, t_max);
  out << fmt::format("<text x=\"8\" y=\"{:.1f}\">{}</text>\n", py(hi) + 4, hi);
  out << fmt::format("<text x=\"8\" y=\"{:.1f}\">{}</text>\n", py(lo) + 4, lo);
  out << "</svg>\n";
}

}  // namespace parkcover
