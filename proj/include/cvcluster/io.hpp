// Copyright 2026 The cvcluster Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVCLUSTER_IO_HPP
#define CVCLUSTER_IO_HPP

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cvcluster/analysis.hpp"

namespace cvcluster::io {

/// Shortest text that parses back to the same double. '.' separator,
/// independent of the global locale.
std::string format_double(double v);

/// Quote and escape `s` as a JSON string literal.
std::string json_string(const std::string &s);

/// CSV: one '#'-prefixed header line holding `header_json`, a column-name row,
/// then one row per sample.
void write_csv(std::ostream &os, const CurveDataset &d, const std::string &header_json);

/// {"config": header_json, "figure": ..., "columns": [{"name", "unit", "values"}]}.
void write_json(std::ostream &os, const CurveDataset &d, const std::string &header_json);

using ReportValue = std::variant<double, bool, std::string>;

/// Ordered quantity/value pairs printed by the single-run commands.
struct Report {
    std::vector<std::pair<std::string, ReportValue>> entries;

    void add(std::string key, ReportValue value) { entries.emplace_back(std::move(key), std::move(value)); }
};

/// CSV form is "quantity,value" rows under the '#' header line.
void write_report_csv(std::ostream &os, const Report &r, const std::string &header_json);
void write_report_json(std::ostream &os, const Report &r, const std::string &header_json);

} // namespace cvcluster::io

#endif
