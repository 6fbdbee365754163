// SPDX-License-Identifier: Apache-2.0
//
// rislocate: RIS-aided mmWave localization simulator and sparse recovery toolkit
// Copyright (C) 2026 The rislocate authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rislocate/report.hpp"

#include <charconv>
#include <cmath>

namespace rislocate {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_results_csv(std::ostream& out, const ExperimentResult& result) {
    out << kResultsHeader << '\n';
    for (const auto& row : result.rows) {
        const std::string value =
            row.position ? format_number(row.position->x()) + ";" + format_number(row.position->y())
                         : format_number(row.sweep_value);
        out << sweep_variable_name(row.variable) << ',' << value << ',' << solver_name(row.solver) << ','
            << metric_name(row.metric) << ',' << format_number(row.value) << ',' << row.n_trials << ','
            << row.n_failed << ',' << result.seed << '\n';
    }
}

void write_complexity_csv(std::ostream& out, const std::vector<ComplexityRow>& rows) {
    out << kComplexityHeader << '\n';
    for (const auto& row : rows)
        out << algorithm_name(row.algorithm) << ',' << row.n_ris << ',' << row.n_subcarriers << ',' << row.n_blocks
            << ',' << row.order_estimate << ',' << csv_field(row.note) << '\n';
}

void write_summary(std::ostream& out, const std::string& command, const RunConfig& config,
                   const ExperimentResult& result) {
    out << "# rislocate " << command << "\n# resolved configuration\n" << echo_config(config) << "\n# timing\n";
    double total = 0.0;
    for (const auto& t : result.timings) {
        out << "point " << t.point << ": " << format_number(t.seconds) << " s\n";
        total += t.seconds;
    }
    out << "total: " << format_number(total) << " s\n";
}

} // namespace rislocate
