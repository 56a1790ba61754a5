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

// Audit report output: versioned JSON, flat CSV, and static SVG plots.

#ifndef LABELAUDIT_REPORT_HPP_
#define LABELAUDIT_REPORT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "labelaudit/protocol.hpp"

namespace labelaudit::report {

inline constexpr std::string_view kReportFormat = "labelaudit-report";
inline constexpr int kReportSchemaVersion = 1;

// Canonical JSON text (sorted keys, trailing newline).
std::string to_json_text(const protocol::AuditReport& report, std::string_view tool_version);
protocol::AuditReport from_json_text(std::string_view text);

inline constexpr std::string_view kCsvHeader = "protocol,arm,seed,prefix_size,precision,recall,f1";

// One row per (curve, checkpoint), curves in report order.
std::string to_csv(const protocol::AuditReport& report);
void write_csv(const protocol::AuditReport& report, const std::string& path);

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
};

struct BandPoint {
  double x = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct Series {
  std::string name;
  std::string color;
  std::vector<PlotPoint> points;
  std::vector<BandPoint> band;  // optional seed-spread envelope
};

struct PlotSpec {
  std::string title;
  std::string x_label = "training sentences fed";
  std::string y_label = "F1";
  std::vector<Series> series;
  std::string metadata;  // embedded verbatim (escaped) in a <metadata> element
};

inline constexpr int kSvgWidth = 800;
inline constexpr int kSvgHeight = 500;

// Fixed categorical palette, assigned to series in order.
const std::vector<std::string>& palette();

// One series per arm: mean F1 over seeds, with a min/max band when there is
// more than one seed. The report's run configuration becomes the metadata.
PlotSpec plot_spec(const protocol::AuditReport& report);

// Throws DataError when a y value lies outside [0, 1].
std::string to_svg(const PlotSpec& spec);
void render_svg(const PlotSpec& spec, const std::string& path);

}  // namespace labelaudit::report

#endif  // LABELAUDIT_REPORT_HPP_
