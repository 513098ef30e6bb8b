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

#include "cvcluster/io.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace cvcluster::io {

namespace {

std::string value_text(const ReportValue &v, bool json) {
    if (const double *d = std::get_if<double>(&v)) {
        return format_double(*d);
    }
    if (const bool *b = std::get_if<bool>(&v)) {
        return *b ? "true" : "false";
    }
    const std::string &s = std::get<std::string>(v);
    return json ? json_string(s) : s;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, res.ptr);
}

std::string json_string(const std::string &s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\t':
            out += "\\t";
            break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
    return out;
}

void write_csv(std::ostream &os, const CurveDataset &d, const std::string &header_json) {
    d.validate();
    os << '#' << header_json << '\n';
    for (std::size_t c = 0; c < d.columns.size(); ++c) {
        os << (c ? "," : "") << d.columns[c].name;
    }
    os << '\n';
    for (std::size_t row = 0; row < d.rows(); ++row) {
        for (std::size_t c = 0; c < d.columns.size(); ++c) {
            os << (c ? "," : "") << format_double(d.columns[c].values[row]);
        }
        os << '\n';
    }
}

void write_json(std::ostream &os, const CurveDataset &d, const std::string &header_json) {
    d.validate();
    os << "{\"config\":" << header_json << ",\"figure\":" << json_string(d.figure) << ",\"columns\":[";
    for (std::size_t c = 0; c < d.columns.size(); ++c) {
        const Column &col = d.columns[c];
        os << (c ? "," : "") << "{\"name\":" << json_string(col.name) << ",\"unit\":" << json_string(col.unit)
           << ",\"values\":[";
        for (std::size_t i = 0; i < col.values.size(); ++i) {
            os << (i ? "," : "") << format_double(col.values[i]);
        }
        os << "]}";
    }
    os << "]}\n";
}

void write_report_csv(std::ostream &os, const Report &r, const std::string &header_json) {
    os << '#' << header_json << '\n' << "quantity,value\n";
    for (const auto &[key, value] : r.entries) {
        os << key << ',' << value_text(value, false) << '\n';
    }
}

void write_report_json(std::ostream &os, const Report &r, const std::string &header_json) {
    os << "{\"config\":" << header_json << ",\"results\":{";
    bool first = true;
    for (const auto &[key, value] : r.entries) {
        os << (first ? "" : ",") << json_string(key) << ':' << value_text(value, true);
        first = false;
    }
    os << "}}\n";
}

} // namespace cvcluster::io
