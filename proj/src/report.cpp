// Copyright 2026 The Overlap Authors.
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

#include "overlap/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "overlap/io.hpp"

namespace overlap {

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? io::format_double(*v) : ""; }

std::string percent(std::optional<double> v, int digits = 1) {
  return v ? io::format_fixed(*v * 100.0, digits) + "%" : "n/a";
}

std::string signed_percent(std::optional<double> v) {
  if (!v) return "n/a";
  std::string s = io::format_fixed(*v * 100.0, 1);
  if (s == "-0.0") s = "0.0";
  return (s[0] == '-' ? s : "+" + s) + "%";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed2(double v) {
  std::string s = io::format_fixed(v, 2);
  return s == "-0.00" ? "0.00" : s;
}

}  // namespace

std::string tables_csv(std::span<const PartitionReport> reports) {
  std::string out =
      "model,cutoff,overall_acc,overlap_size,overlap_acc,nonoverlap_size,nonoverlap_acc,"
      "perf_diff,chi2,p_value,significant\n";
  for (const auto& r : reports) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.model),
                       io::format_double(r.cutoff), io::format_double(r.overall_acc), r.overlap_size,
                       opt_number(r.overlap_acc), r.nonoverlap_size, opt_number(r.nonoverlap_acc),
                       opt_number(r.perf_diff), opt_number(r.chi2), opt_number(r.p_value),
                       r.significant ? "true" : "false");
  }
  return out;
}

std::string tables_txt(std::span<const PartitionReport> reports) {
  using Row = std::array<std::string, 7>;
  std::vector<Row> rows;
  rows.push_back({"Model", "Cutoff", "Overall", "Overlap (n)", "Non-overlap (n)", "Diff", "p"});
  for (const auto& r : reports) {
    rows.push_back({r.model, "> " + io::format_double(r.cutoff), percent(r.overall_acc),
                    fmt::format("{} ({})", percent(r.overlap_acc), r.overlap_size),
                    fmt::format("{} ({})", percent(r.nonoverlap_acc), r.nonoverlap_size),
                    signed_percent(r.perf_diff) + (r.significant ? " *" : ""),
                    r.p_value ? io::format_fixed(*r.p_value, 4) : "n/a"});
  }
  std::array<size_t, 7> width{};
  for (const Row& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  auto emit = [&](const Row& row) {
    std::string line;
    for (size_t c = 0; c < row.size(); ++c) {
      // Text columns are left-aligned, numbers right-aligned.
      if (c == 0) {
        line += fmt::format("{:<{}}", row[c], width[c]);
      } else {
        line += "  " + fmt::format("{:>{}}", row[c], width[c]);
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  };
  emit(rows[0]);
  size_t total = width[0];
  for (size_t c = 1; c < width.size(); ++c) total += 2 + width[c];
  out += std::string(total, '-') + "\n";
  for (size_t i = 1; i < rows.size(); ++i) emit(rows[i]);
  out += "* significant at p < 0.05 (chi-squared, 1 df)\n";
  return out;
}

std::string curve_csv(std::span<const OverlapCurve> curves) {
  std::string out = "curve,cutoff,proportion\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out += fmt::format("{},{},{}\n", csv_field(c.name), io::format_double(p.cutoff),
                         io::format_double(p.proportion));
    }
  }
  return out;
}

std::string curve_svg(std::span<const OverlapCurve> curves) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 70, kRight = 160, kTop = 30, kBottom = 60;
  constexpr double kPlotW = kWidth - kLeft - kRight, kPlotH = kHeight - kTop - kBottom;
  static constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  double lo = 0, hi = 0;
  bool any = false;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      lo = any ? std::min(lo, p.cutoff) : p.cutoff;
      hi = any ? std::max(hi, p.cutoff) : p.cutoff;
      any = true;
    }
  }
  if (!any) {
    lo = 0;
    hi = 1;
  } else if (hi == lo) {
    lo -= 1;
    hi += 1;
  }
  auto x_of = [&](double v) { return kLeft + (v - lo) / (hi - lo) * kPlotW; };
  auto y_of = [&](double proportion) { return kTop + (1.0 - proportion) * kPlotH; };

  std::string s;
  s += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight);
  s += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  // Axes.
  s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kLeft,
                   kTop + kPlotH, kLeft + kPlotW);
  s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft, kTop,
                   kTop + kPlotH);
  for (int i = 0; i <= 5; ++i) {
    const double frac = i / 5.0;
    const double y = y_of(frac);
    s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\"/>\n", fixed2(kLeft),
                     fixed2(y), fixed2(kLeft + kPlotW), fixed2(y));
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", fixed2(kLeft - 6),
                     fixed2(y + 4), i * 20);
    const double xv = lo + frac * (hi - lo);
    const double x = x_of(xv);
    s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", fixed2(x),
                     fixed2(kTop + kPlotH), fixed2(kTop + kPlotH + 4));
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", fixed2(x),
                     fixed2(kTop + kPlotH + 18), io::format_fixed(xv, 1));
  }
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">BM25 score cutoff</text>\n",
                   fixed2(kLeft + kPlotW / 2), fixed2(kHeight - 18));
  s += fmt::format(
      "<text x=\"{0}\" y=\"{1}\" text-anchor=\"middle\" transform=\"rotate(-90 {0} {1})\">% test set "
      "overlap</text>\n",
      fixed2(20), fixed2(kTop + kPlotH / 2));

  for (size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    const char* color = kPalette[ci % kPalette.size()];
    std::string pts;
    for (const auto& p : c.points) {
      if (!pts.empty()) pts += ' ';
      pts += fixed2(x_of(p.cutoff)) + "," + fixed2(y_of(p.proportion));
    }
    if (c.points.size() > 1) {
      s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color,
                       pts);
    }
    for (const auto& p : c.points) {
      s += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n", fixed2(x_of(p.cutoff)),
                       fixed2(y_of(p.proportion)), color);
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(ci);
    const double lx = kLeft + kPlotW + 15;
    s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                     fixed2(lx), fixed2(ly), fixed2(lx + 20), fixed2(ly), color);
    s += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", fixed2(lx + 26), fixed2(ly + 4),
                     xml_escape(c.name.empty() ? "curve " + std::to_string(ci + 1) : c.name));
  }
  s += "</svg>\n";
  return s;
}

void emit_report(std::span<const PartitionReport> reports, std::span<const OverlapCurve> curves,
                 const std::filesystem::path& out_dir) {
  if (!reports.empty()) {
    io::write_file_atomic(out_dir / "tables.csv", tables_csv(reports));
    io::write_file_atomic(out_dir / "tables.txt", tables_txt(reports));
  }
  if (!curves.empty()) {
    io::write_file_atomic(out_dir / "curve.csv", curve_csv(curves));
    io::write_file_atomic(out_dir / "curve.svg", curve_svg(curves));
  }
}

}  // namespace overlap
