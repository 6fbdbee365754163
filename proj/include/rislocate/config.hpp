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

#include "rislocate/experiments.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace rislocate {

struct ExperimentConfig {
    SweepVariable sweep = SweepVariable::SnrDb;
    std::vector<double> values;  // empty: use waveform snr_db for SNR sweeps
    std::vector<Vec2> positions; // RIS positions for ris_position sweeps
    int n_trials = 100;
    std::uint64_t seed = 1;
    Lattice lattice;
};

struct OutputConfig {
    std::string directory = ".";
    std::string prefix = "rislocate";
};

// Defaults reproduce the baseline scenario: BS [0,0], RIS [2.5,4], UE [5,3],
// one scatterer per segment, 8-element arrays, 60 GHz, 100 MHz, N = 10,
// J = 64, G = 32, -13 dB reflection loss.
struct RunConfig {
    Scene scene;
    ArrayConfig arrays;
    WaveformConfig waveform;
    std::vector<double> snr_db{0.0};
    SolverOptions solver;
    std::vector<SolverKind> solvers{SolverKind::Tmsbl};
    ExperimentConfig experiment;
    OutputConfig output;

    // Base scenario at the first configured SNR.
    Scenario scenario() const;
    SweepSpec sweep_spec() const;
    // Throws ConfigValueError naming the offending section/key.
    void validate() const;
};

// Sectioned key = value file ([scene], [arrays], [waveform], [solver],
// [experiment], [output]). Lines starting with ';' or '#' are comments.
// Points are written "x, y", point lists separate points with ';' and an
// empty value is an empty list. Number and name lists are comma separated.
// Throws ConfigFileError, ConfigSyntaxError, ConfigKeyError, ConfigTypeError
// or ConfigValueError.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text);

// Resolved configuration in the same format parse_config reads.
std::string echo_config(const RunConfig& config);

} // namespace rislocate
