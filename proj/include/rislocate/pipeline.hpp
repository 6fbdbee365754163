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

#include "rislocate/beamspace.hpp"
#include "rislocate/channel.hpp"
#include "rislocate/solvers.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rislocate {

enum class SolverKind { Tmsbl, Gsbl, Sbl, Omp, Amp };

std::string_view solver_name(SolverKind kind);

// Accepts "tmsbl", "gsbl", "sbl", "omp", "amp"; throws InvalidArgument otherwise.
SolverKind parse_solver(std::string_view name);

struct SolverOptions {
    int max_iterations = 100;
    double tolerance = 1e-6;
    int toa_grid_oversampling = 100; // ToA grid points per subcarrier
    int omp_atoms = 1;
    AmpOptions amp;
};

struct Stage1Result {
    CMat bs_precoder; // N_B x L_BR, steering vectors at estimated_aod
    CMat ue_combiner; // N_M x L_RM, steering vectors at estimated_aoa
    std::vector<double> estimated_aod;
    std::vector<double> estimated_aoa;
    DcsSompResult pursuit;
};

// Random Gaussian sounding (unit-norm columns, G = n_stage1_symbols) over a
// random fixed RIS configuration, DCS-SOMP with n_paths_br * n_paths_rm atoms,
// then steering-vector beams at the first n_paths_br distinct BS and
// n_paths_rm distinct UE grid angles in selection order.
Stage1Result run_stage1(const ChannelRealization& realization, int n_paths_br, int n_paths_rm, Rng& rng);

struct Stage2Assembly {
    MmvProblem problem;               // observations J x N for the dominant pair
    CMat phase_matrix;                     // J x N_R, rows are the block phase vectors
    std::vector<std::vector<CMat>> blocks; // [t][n], L_RM x L_BR observations
    int dominant_pair = 0;                 // k = a + b * L_RM
    int ue_beam = 0;                       // a
    int bs_beam = 0;                       // b
};

// J training blocks with fresh random RIS phases and the stage-1 beams held
// fixed. The noise diagonal is sigma^2 ||w_a||^2, floored at 1e-10 times the
// mean observation power so that noiseless runs stay well posed.
Stage2Assembly assemble_stage2(const ChannelRealization& realization, const Stage1Result& stage1, Rng& rng,
                               const SolverOptions& options = {});

SparseEstimate solve_stage2(SolverKind kind, const MmvProblem& problem, const SolverOptions& options = {});

// Index of the row with the largest energy sum_n |H(p, n)|^2.
int dominant_row(const CMat& channel_matrix);

// asin(sin(phi_br) - sin(theta_diff)) with theta_diff the grid angle of the
// dominant row. Throws AmbiguityError when the argument leaves [-1, 1].
double extract_aor(const SparseEstimate& estimate, double known_aoa_ris, const DftDictionary& dict_ris,
                   double spacing);

// Per subcarrier, the entry of largest magnitude across rows.
CVec per_subcarrier_gain(const CMat& channel_matrix);

// Matched delay search over grid_resolution points on [0, N Ts).
double extract_toa(const CVec& per_subcarrier_gain, const WaveformConfig& waveform, int grid_resolution);

struct KnownRis {
    Vec2 position;
    double aoa = 0.0; // phi_BR of the path used as reference
    double toa = 0.0; // tau_BR of the same path
};

struct Localization {
    Vec2 position;
    double toa_ris_ue = 0.0;
    bool clamped = false; // toa_cascade < tau_BR, remaining delay set to 0
};

Localization localize(const KnownRis& known, double aor, double toa_cascade);

struct LocalizationEstimate {
    double aor = 0.0;
    double toa_cascade = 0.0;
    double toa_ris_ue = 0.0;
    Vec2 position = Vec2::Zero();
    int dominant_path = 0;
    int dominant_row = 0;
    bool toa_clamped = false;
    CVec per_subcarrier_gain;
};

// Pre-measured BS-RIS path whose departure angle at the BS is closest to the
// stage-1 BS beam, with circular distance on spacing * sin(angle) modulo 1.
KnownRis known_ris_reference(const ChannelRealization& realization, double bs_beam_angle);

// Stage 1 and stage 2 assembly for one trial; every solver is then applied to
// the same problem.
struct TrialProblem {
    ChannelRealization realization;
    Stage1Result stage1;
    Stage2Assembly stage2;
    KnownRis known;
};

TrialProblem prepare_trial(const Scene& scene, const ArrayConfig& arrays, const WaveformConfig& waveform, Rng& rng,
                           const SolverOptions& options = {});

TrialProblem prepare_trial(ChannelRealization realization, const Vec2& ris_position, Rng& rng,
                           const SolverOptions& options = {});

LocalizationEstimate solve_trial(const TrialProblem& trial, SolverKind kind, const SolverOptions& options = {});

// Path-loss amplitude of the LoS-LoS cascade, rho_BR,0 * rho_RM,0. The SNR
// P / sigma^2 is measured against a channel whose LoS cascade loss is
// normalized to this reference; array gains are not part of it.
double reference_gain(const Scene& scene, const WaveformConfig& waveform);

// sigma^2 = P g_ref^2 / 10^(snr_db / 10).
double noise_variance_for_snr(const Scene& scene, const WaveformConfig& waveform, double snr_db);

} // namespace rislocate
