// Copyright 2026 The labelaudit Authors.
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

#include "labelaudit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "labelaudit/errors.hpp"
#include "labelaudit/files.hpp"
#include "labelaudit/serialization.hpp"

namespace labelaudit::report {

std::string to_json_text(const protocol::AuditReport& report, std::string_view tool_version) {
  nlohmann::json j = report;
  j["format"] = kReportFormat;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = tool_version;
  return j.dump(1) + "\n";
}

protocol::AuditReport from_json_text(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != kReportFormat) throw DataError("not a labelaudit report");
    if (j.at("schema_version") != kReportSchemaVersion)
      throw DataError("unsupported report schema version " + j.at("schema_version").dump());
    return j.get<protocol::AuditReport>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
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

}  // namespace

std::string to_csv(const protocol::AuditReport& report) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& c : report.curves) {
    for (const auto& p : c.points) {
      out += csv_field(report.protocol) + ',' + csv_field(c.arm) + ',' + std::to_string(c.seed) +
             ',' + std::to_string(p.prefix) + ',' + fixed(p.eval.precision, 6) + ',' +
             fixed(p.eval.recall, 6) + ',' + fixed(p.eval.f1, 6) + '\n';
    }
  }
  return out;
}

void write_csv(const protocol::AuditReport& report, const std::string& path) {
  write_file_atomic(path, to_csv(report));
}

const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  return colors;
}

PlotSpec plot_spec(const protocol::AuditReport& report) {
  PlotSpec spec;
  spec.title = report.protocol + " (" + std::to_string(report.seeds.size()) +
               (report.seeds.size() == 1 ? " seed)" : " seeds)");
  if (!report.verdict.empty()) spec.title += ": " + report.verdict;
  if (!report.run_config.is_null()) spec.metadata = report.run_config.dump();

  std::vector<std::string> arms;
  for (const auto& c : report.curves) {
    if (std::ranges::find(arms, c.arm) == arms.end()) arms.push_back(c.arm);
  }
  for (std::size_t a = 0; a < arms.size(); ++a) {
    std::map<std::size_t, std::vector<double>> by_prefix;
    for (const auto& c : report.curves) {
      if (c.arm != arms[a]) continue;
      for (const auto& p : c.points) by_prefix[p.prefix].push_back(p.eval.f1);
    }
    Series s;
    s.name = arms[a];
    s.color = palette()[a % palette().size()];
    bool spread = false;
    for (const auto& [k, f1s] : by_prefix) {
      double sum = 0.0;
      for (double v : f1s) sum += v;
      const auto x = static_cast<double>(k);
      s.points.push_back({x, sum / static_cast<double>(f1s.size())});
      s.band.push_back({x, *std::ranges::min_element(f1s), *std::ranges::max_element(f1s)});
      spread = spread || f1s.size() > 1;
    }
    if (!spread) s.band.clear();
    spec.series.push_back(std::move(s));
  }
  return spec;
}

std::string to_svg(const PlotSpec& spec) {
  constexpr double kLeft = 70, kRight = 190, kTop = 50, kBottom = 60;
  constexpr double plot_w = kSvgWidth - kLeft - kRight;
  constexpr double plot_h = kSvgHeight - kTop - kBottom;

  double x_max = 0.0;
  for (const auto& s : spec.series) {
    for (const auto& p : s.points) {
      if (!(p.y >= 0.0 && p.y <= 1.0))
        throw DataError("plot series '" + s.name + "' has y value outside [0, 1]");
      x_max = std::max(x_max, p.x);
    }
    for (const auto& b : s.band) {
      if (!(b.lower >= 0.0 && b.upper <= 1.0 && b.lower <= b.upper))
        throw DataError("plot series '" + s.name + "' has a band outside [0, 1]");
    }
  }
  if (x_max <= 0.0) x_max = 1.0;
  auto sx = [&](double x) { return fixed(kLeft + plot_w * x / x_max, 2); };
  auto sy = [&](double y) { return fixed(kTop + plot_h * (1.0 - y), 2); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(kSvgWidth) + "\" height=\"" + std::to_string(kSvgHeight) +
         "\" viewBox=\"0 0 " + std::to_string(kSvgWidth) + " " + std::to_string(kSvgHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!spec.metadata.empty()) out += "<metadata>" + xml_escape(spec.metadata) + "</metadata>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(kSvgWidth) + "\" height=\"" +
         std::to_string(kSvgHeight) + "\" fill=\"#ffffff\"/>\n";
  out += "<text x=\"" + fixed(kLeft + plot_w / 2, 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">" +
         xml_escape(spec.title) + "</text>\n";

  // Grid and ticks.
  for (int i = 0; i <= 5; ++i) {
    const double y = i / 5.0;
    out += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + sy(y) + "\" x2=\"" + fixed(kLeft + plot_w, 2) +
           "\" y2=\"" + sy(y) + "\" stroke=\"#e0e0e0\"/>\n";
    out += "<text x=\"" + fixed(kLeft - 8, 2) + "\" y=\"" + sy(y) +
           "\" text-anchor=\"end\" dominant-baseline=\"middle\">" + fixed(y, 1) + "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double x = x_max * i / 5.0;
    out += "<text x=\"" + sx(x) + "\" y=\"" + fixed(kTop + plot_h + 18, 2) +
           "\" text-anchor=\"middle\">" + std::to_string(static_cast<long long>(std::llround(x))) +
           "</text>\n";
  }
  out += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + fixed(kTop + plot_h, 2) + "\" x2=\"" +
         fixed(kLeft + plot_w, 2) + "\" y2=\"" + fixed(kTop + plot_h, 2) + "\" stroke=\"#000000\"/>\n";
  out += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + fixed(kTop, 2) + "\" x2=\"" + fixed(kLeft, 2) +
         "\" y2=\"" + fixed(kTop + plot_h, 2) + "\" stroke=\"#000000\"/>\n";
  out += "<text x=\"" + fixed(kLeft + plot_w / 2, 2) + "\" y=\"" + fixed(kSvgHeight - 15, 2) +
         "\" text-anchor=\"middle\">" + xml_escape(spec.x_label) + "</text>\n";
  out += "<text x=\"18\" y=\"" + fixed(kTop + plot_h / 2, 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fixed(kTop + plot_h / 2, 2) + ")\">" + xml_escape(spec.y_label) + "</text>\n";

  for (const auto& s : spec.series) {
    if (s.band.empty()) continue;
    std::string pts;
    for (const auto& b : s.band) pts += sx(b.x) + "," + sy(b.upper) + " ";
    for (auto it = s.band.rbegin(); it != s.band.rend(); ++it) pts += sx(it->x) + "," + sy(it->lower) + " ";
    pts.pop_back();
    out += "<polygon points=\"" + pts + "\" fill=\"" + s.color + "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
  }
  for (const auto& s : spec.series) {
    if (s.points.empty()) continue;
    std::string pts;
    for (const auto& p : s.points) pts += sx(p.x) + "," + sy(p.y) + " ";
    pts.pop_back();
    out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"/>\n";
  }

  // Legend.
  double ly = kTop + 10;
  for (const auto& s : spec.series) {
    const double lx = kLeft + plot_w + 20;
    out += "<rect x=\"" + fixed(lx, 2) + "\" y=\"" + fixed(ly - 5, 2) + "\" width=\"18\" height=\"4\" fill=\"" +
           s.color + "\"/>\n";
    out += "<text x=\"" + fixed(lx + 24, 2) + "\" y=\"" + fixed(ly, 2) + "\" dominant-baseline=\"middle\">" +
           xml_escape(s.name) + "</text>\n";
    ly += 20;
  }
  out += "</svg>\n";
  return out;
}

void render_svg(const PlotSpec& spec, const std::string& path) {
  write_file_atomic(path, to_svg(spec));
}

}  // namespace labelaudit::report
