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

#include "rislocate/experiments.hpp"

#include "rislocate/errors.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace rislocate {

namespace {

struct TrialOutcome {
    std::vector<std::optional<LocalizationEstimate>> per_solver;
};

struct Truth {
    Vec2 position;
    double aor = 0.0;
    double toa = 0.0;
};

Truth truth_of(const Scene& scene) {
    const auto los = path_geometry(scene, Segment::RisUe, 0);
    return {scene.ue, los.departure_angle, los.toa};
}

} // namespace

std::string_view sweep_variable_name(SweepVariable v) {
    switch (v) {
    case SweepVariable::SnrDb: return "snr_db";
    case SweepVariable::NBlocks: return "n_blocks";
    case SweepVariable::NElements: return "n_elements";
    case SweepVariable::RisPosition: return "ris_position";
    }
    return "unknown";
}

std::string_view metric_name(Metric m) {
    switch (m) {
    case Metric::RmseAorRad: return "RMSE_AOR_RAD";
    case Metric::RmseToaS: return "RMSE_TOA_S";
    case Metric::RmsePositionM: return "RMSE_POSITION_M";
    }
    return "unknown";
}

SweepVariable parse_sweep_variable(std::string_view name) {
    for (auto v : {SweepVariable::SnrDb, SweepVariable::NBlocks, SweepVariable::NElements, SweepVariable::RisPosition})
        if (sweep_variable_name(v) == name) return v;
    throw InvalidArgument("unknown sweep variable '" + std::string(name) + "'");
}

WaveformConfig Scenario::resolved_waveform() const {
    WaveformConfig wf = waveform;
    wf.noise_variance = noise_variance_for_snr(scene, waveform, snr_db);
    return wf;
}

std::size_t SweepSpec::point_count() const {
    return variable == SweepVariable::RisPosition ? positions.size() : values.size();
}

void SweepSpec::validate() const {
    if (n_trials < 1) throw InvalidArgument("sweep needs at least one trial");
    if (point_count() == 0) throw InvalidArgument("sweep needs at least one value");
    if (solvers.empty()) throw InvalidArgument("sweep needs at least one solver");
    if (variable != SweepVariable::RisPosition) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i])) throw InvalidArgument("sweep values must be finite");
            if (i > 0 && !(values[i] > values[i - 1]))
                throw InvalidArgument("sweep values must be strictly increasing");
            if ((variable == SweepVariable::NBlocks || variable == SweepVariable::NElements) &&
                (values[i] < 1.0 || values[i] != std::floor(values[i])))
                throw InvalidArgument("block and element counts must be positive integers");
        }
    }
}

double rmse(const std::vector<Vec2>& truths, const std::vector<Vec2>& estimates) {
    if (truths.empty() || truths.size() != estimates.size())
        throw InvalidArgument("rmse needs equal-length, non-empty inputs");
    double acc = 0.0;
    for (std::size_t i = 0; i < truths.size(); ++i) acc += (truths[i] - estimates[i]).squaredNorm();
    return std::sqrt(acc / static_cast<double>(truths.size()));
}

double rmse(const std::vector<double>& truths, const std::vector<double>& estimates) {
    if (truths.empty() || truths.size() != estimates.size())
        throw InvalidArgument("rmse needs equal-length, non-empty inputs");
    double acc = 0.0;
    for (std::size_t i = 0; i < truths.size(); ++i) acc += (truths[i] - estimates[i]) * (truths[i] - estimates[i]);
    return std::sqrt(acc / static_cast<double>(truths.size()));
}

unsigned worker_count() {
    if (const char* env = std::getenv("RIS_LOCATE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

Scenario scenario_at(const SweepSpec& spec, std::size_t point) {
    Scenario s = spec.base;
    switch (spec.variable) {
    case SweepVariable::SnrDb: s.snr_db = spec.values.at(point); break;
    case SweepVariable::NBlocks: s.waveform.n_blocks = static_cast<int>(spec.values.at(point)); break;
    case SweepVariable::NElements: s.arrays.n_ris = static_cast<int>(spec.values.at(point)); break;
    case SweepVariable::RisPosition: s.scene.ris = spec.positions.at(point); break;
    }
    return s;
}

ExperimentResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    ExperimentResult result;
    result.seed = spec.seed;
    const auto n_trials = static_cast<std::size_t>(spec.n_trials);

    for (std::size_t point = 0; point < spec.point_count(); ++point) {
        const auto start = std::chrono::steady_clock::now();
        const Scenario scenario = scenario_at(spec, point);
        std::vector<TrialOutcome> outcomes(n_trials);

        parallel_for(n_trials, [&](std::size_t trial) {
            auto& outcome = outcomes[trial];
            outcome.per_solver.resize(spec.solvers.size());
            Rng rng = derive_rng(spec.seed, point, trial);
            TrialProblem problem;
            try {
                problem = prepare_trial(scenario.scene, scenario.arrays, scenario.resolved_waveform(), rng,
                                        scenario.solver);
            } catch (const Error&) {
                return;
            }
            for (std::size_t s = 0; s < spec.solvers.size(); ++s) {
                try {
                    outcome.per_solver[s] = solve_trial(problem, spec.solvers[s], scenario.solver);
                } catch (const Error&) {
                }
            }
        });

        std::optional<Truth> truth;
        try {
            truth = truth_of(scenario.scene);
        } catch (const Error&) {
        }
        for (std::size_t s = 0; s < spec.solvers.size(); ++s) {
            std::vector<Vec2> pos_true, pos_est;
            std::vector<double> aor_true, aor_est, toa_true, toa_est;
            for (const auto& outcome : outcomes) {
                const auto& est = outcome.per_solver[s];
                if (!est || !truth) continue;
                pos_true.push_back(truth->position);
                pos_est.push_back(est->position);
                aor_true.push_back(truth->aor);
                aor_est.push_back(est->aor);
                toa_true.push_back(truth->toa);
                toa_est.push_back(est->toa_ris_ue);
            }
            const int failed = spec.n_trials - static_cast<int>(pos_est.size());
            const bool any = !pos_est.empty();
            const double nan = std::numeric_limits<double>::quiet_NaN();
            const std::pair<Metric, double> metrics[] = {
                {Metric::RmseAorRad, any ? rmse(aor_true, aor_est) : nan},
                {Metric::RmseToaS, any ? rmse(toa_true, toa_est) : nan},
                {Metric::RmsePositionM, any ? rmse(pos_true, pos_est) : nan},
            };
            for (const auto& [metric, value] : metrics) {
                ResultRow row;
                row.variable = spec.variable;
                if (spec.variable == SweepVariable::RisPosition)
                    row.position = spec.positions[point];
                else
                    row.sweep_value = spec.values[point];
                row.solver = spec.solvers[s];
                row.metric = metric;
                row.value = value;
                row.n_trials = spec.n_trials;
                row.n_failed = failed;
                result.rows.push_back(row);
            }
        }
        const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.timings.push_back({point, elapsed});
    }
    return result;
}

std::vector<Vec2> Lattice::points() const {
    if (nx < 1 || ny < 1) throw InvalidArgument("lattice needs at least one point per axis");
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    for (int iy = 0; iy < ny; ++iy) {
        const double y = ny == 1 ? y_min : y_min + (y_max - y_min) * iy / (ny - 1);
        for (int ix = 0; ix < nx; ++ix) {
            const double x = nx == 1 ? x_min : x_min + (x_max - x_min) * ix / (nx - 1);
            out.emplace_back(x, y);
        }
    }
    return out;
}

ExperimentResult placement_heatmap(const Lattice& lattice, const Scenario& base, int n_trials, std::uint64_t seed,
                                   SolverKind solver) {
    SweepSpec spec;
    spec.variable = SweepVariable::RisPosition;
    spec.solvers = {solver};
    spec.n_trials = n_trials;
    spec.base = base;
    spec.seed = seed;
    for (const auto& p : lattice.points()) {
        Scene scene = base.scene;
        scene.ris = p;
        try {
            scene.validate();
        } catch (const InvalidArgument&) {
            continue;
        }
        spec.positions.push_back(p);
    }
    return run_sweep(spec);
}

std::vector<ComplexityRow> complexity_report(std::uint64_t n_ris, std::uint64_t n_subcarriers,
                                             std::uint64_t n_blocks) {
    if (n_ris < 1 || n_subcarriers < 1 || n_blocks < 1) throw InvalidArgument("complexity counts must be positive");
    const bool reference_point = n_ris == 8 && n_subcarriers == 10 && n_blocks == 60;
    std::vector<ComplexityRow> rows;
    for (auto algo : {Algorithm::DcsSomp, Algorithm::Sbl, Algorithm::Gsbl, Algorithm::Tmsbl, Algorithm::Amp}) {
        ComplexityRow row{algo, n_ris, n_subcarriers, n_blocks, flop_estimate(algo, n_ris, n_subcarriers, n_blocks),
                          ""};
        if (algo == Algorithm::Gsbl && reference_point)
            row.note = "formula N^3*N_R^3+J^3; reference value " + std::to_string(kReferenceGsblOrder);
        rows.push_back(row);
    }
    return rows;
}

} // namespace rislocate
