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

#pragma once

#include "rislocate/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace rislocate {

inline constexpr const char* kResultsHeader =
    "sweep_variable,sweep_value,solver,metric,value,n_trials,n_failed,seed";
inline constexpr const char* kComplexityHeader = "algorithm,n_ris,n_subcarriers,n_blocks,order_estimate,note";

// Shortest round-trip form limited to 9 significant digits, '.' decimal
// separator regardless of locale; "nan" for NaN.
std::string format_number(double value);

// Position sweep values are written "x;y".
void write_results_csv(std::ostream& out, const ExperimentResult& result);

void write_complexity_csv(std::ostream& out, const std::vector<ComplexityRow>& rows);

// Resolved configuration plus wall-clock seconds per sweep point.
void write_summary(std::ostream& out, const std::string& command, const RunConfig& config,
                   const ExperimentResult& result);

} // namespace rislocate
