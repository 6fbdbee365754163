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

#include "rislocate/pipeline.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rislocate {

enum class SweepVariable { SnrDb, NBlocks, NElements, RisPosition };
enum class Metric { RmseAorRad, RmseToaS, RmsePositionM };

std::string_view sweep_variable_name(SweepVariable v);
std::string_view metric_name(Metric m);

// Accepts "snr_db", "n_blocks", "n_elements", "ris_position".
SweepVariable parse_sweep_variable(std::string_view name);

// Everything needed to run one trial apart from the random stream. The noise
// variance is derived from snr_db, the waveform's own value is ignored.
struct Scenario {
    Scene scene;
    ArrayConfig arrays;
    WaveformConfig waveform;
    SolverOptions solver;
    double snr_db = 0.0;

    // Waveform with noise_variance set for snr_db.
    WaveformConfig resolved_waveform() const;
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::SnrDb;
    std::vector<double> values;           // scalar sweeps
    std::vector<Vec2> positions;          // RIS_POSITION sweeps
    std::vector<SolverKind> solvers{SolverKind::Tmsbl};
    int n_trials = 100;
    Scenario base;
    std::uint64_t seed = 1;

    std::size_t point_count() const;
    void validate() const;
};

struct ResultRow {
    SweepVariable variable = SweepVariable::SnrDb;
    double sweep_value = 0.0;
    std::optional<Vec2> position; // set for RIS_POSITION rows
    SolverKind solver = SolverKind::Tmsbl;
    Metric metric = Metric::RmsePositionM;
    double value = 0.0; // NaN when every trial failed
    int n_trials = 0;
    int n_failed = 0;
};

struct PointTiming {
    std::size_t point = 0;
    double seconds = 0.0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<PointTiming> timings;
    std::uint64_t seed = 0;
};

// sqrt(mean ||t_k - e_k||^2). Throws InvalidArgument on empty or unequal input.
double rmse(const std::vector<Vec2>& truths, const std::vector<Vec2>& estimates);
double rmse(const std::vector<double>& truths, const std::vector<double>& estimates);

// Worker count: RIS_LOCATE_THREADS when set to a positive integer, otherwise
// the hardware concurrency (at least 1).
unsigned worker_count();

// Runs body(i) for i in [0, count) on worker_count() threads. The first
// exception thrown by a body is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Scenario at one sweep point: applies the swept value to the base scenario.
Scenario scenario_at(const SweepSpec& spec, std::size_t point);

// For each sweep point and trial, one scene realization, stage 1 and stage-2
// assembly are shared by every solver. Trials raising library errors are
// counted in n_failed and excluded from the RMSE. Deterministic for a seed.
ExperimentResult run_sweep(const SweepSpec& spec);

struct Lattice {
    double x_min = 0.0, x_max = 5.0;
    double y_min = 0.0, y_max = 5.0;
    int nx = 11, ny = 11;

    std::vector<Vec2> points() const;
};

// RIS placed at each valid lattice point (points that break scene validity
// are skipped), tmsbl pipeline, position RMSE per point.
ExperimentResult placement_heatmap(const Lattice& lattice, const Scenario& base, int n_trials, std::uint64_t seed,
                                   SolverKind solver = SolverKind::Tmsbl);

struct ComplexityRow {
    Algorithm algorithm;
    std::uint64_t n_ris = 0, n_subcarriers = 0, n_blocks = 0;
    std::uint64_t order_estimate = 0;
    std::string note;
};

// Reference GSBL order at (8, 10, 60); it does not match the formula value.
inline constexpr std::uint64_t kReferenceGsblOrder = 5336000;

std::vector<ComplexityRow> complexity_report(std::uint64_t n_ris, std::uint64_t n_subcarriers,
                                             std::uint64_t n_blocks);

} // namespace rislocate
