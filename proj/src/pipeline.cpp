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

#include "rislocate/pipeline.hpp"

#include "rislocate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rislocate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CMat unit_columns(CMat m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c).normalize();
    return m;
}

std::vector<double> distinct_in_order(const std::vector<int>& indices, const std::vector<double>& angles,
                                      std::size_t limit) {
    std::vector<int> seen;
    std::vector<double> out;
    for (std::size_t i = 0; i < indices.size() && out.size() < limit; ++i) {
        if (std::find(seen.begin(), seen.end(), indices[i]) != seen.end()) continue;
        seen.push_back(indices[i]);
        out.push_back(angles[i]);
    }
    return out;
}

double circular_distance(double a, double b) {
    const double d = std::abs(a - b);
    const double wrapped = d - std::floor(d);
    return std::min(wrapped, 1.0 - wrapped);
}

} // namespace

std::string_view solver_name(SolverKind kind) {
    switch (kind) {
    case SolverKind::Tmsbl: return "tmsbl";
    case SolverKind::Gsbl: return "gsbl";
    case SolverKind::Sbl: return "sbl";
    case SolverKind::Omp: return "omp";
    case SolverKind::Amp: return "amp";
    }
    return "unknown";
}

SolverKind parse_solver(std::string_view name) {
    for (auto kind : {SolverKind::Tmsbl, SolverKind::Gsbl, SolverKind::Sbl, SolverKind::Omp, SolverKind::Amp})
        if (solver_name(kind) == name) return kind;
    throw InvalidArgument("unknown solver '" + std::string(name) + "'");
}

Stage1Result run_stage1(const ChannelRealization& realization, int n_paths_br, int n_paths_rm, Rng& rng) {
    const auto& arrays = realization.arrays;
    const auto& waveform = realization.waveform;
    const int g = waveform.n_stage1_symbols;
    if (n_paths_br < 1 || n_paths_rm < 1) throw InvalidArgument("run_stage1: path counts must be positive");
    if (g <= std::max(n_paths_br, n_paths_rm))
        throw InvalidArgument("run_stage1: stage-1 symbol count must exceed the number of paths");

    const CMat precoder = unit_columns(complex_gaussian(arrays.n_bs, g, 1.0, rng));
    const CMat combiner = unit_columns(complex_gaussian(arrays.n_ue, g, 1.0, rng));
    const CVec phase = random_phase_vector(arrays.n_ris, rng);
    const auto op = stage1_operator(precoder, combiner, dft_dictionary(arrays.n_bs), dft_dictionary(arrays.n_ue));

    std::vector<CVec> observations;
    std::vector<CMat> operators;
    for (int n = 0; n < waveform.n_subcarriers; ++n) {
        const CMat y = observe_block(cascaded_channel(realization, phase, n), precoder, combiner,
                                     waveform.transmit_energy, waveform.noise_variance, rng);
        observations.emplace_back(Eigen::Map<const CVec>(y.data(), y.size()));
        operators.push_back(op.combined);
    }

    Stage1Result out;
    out.pursuit = dcs_somp(observations, operators, n_paths_br * n_paths_rm, arrays.n_bs, arrays.n_ue,
                           arrays.spacing);
    out.estimated_aod = distinct_in_order(out.pursuit.bs_index, out.pursuit.bs_angles,
                                          static_cast<std::size_t>(n_paths_br));
    out.estimated_aoa = distinct_in_order(out.pursuit.ue_index, out.pursuit.ue_angles,
                                          static_cast<std::size_t>(n_paths_rm));
    out.bs_precoder = steering_matrix(arrays.n_bs, out.estimated_aod, arrays.spacing);
    out.ue_combiner = steering_matrix(arrays.n_ue, out.estimated_aoa, arrays.spacing);
    return out;
}

Stage2Assembly assemble_stage2(const ChannelRealization& realization, const Stage1Result& stage1, Rng& rng,
                               const SolverOptions& options) {
    const auto& arrays = realization.arrays;
    const auto& waveform = realization.waveform;
    const int j_blocks = waveform.n_blocks;
    const int n_sub = waveform.n_subcarriers;
    const auto l_rm = stage1.ue_combiner.cols();
    const auto l_br = stage1.bs_precoder.cols();
    if (l_rm < 1 || l_br < 1) throw ShapeError("assemble_stage2: stage-1 beams are empty");

    Stage2Assembly out;
    out.phase_matrix.resize(j_blocks, arrays.n_ris);
    out.blocks.resize(static_cast<std::size_t>(j_blocks));
    RVec energy = RVec::Zero(l_rm * l_br);
    for (int t = 0; t < j_blocks; ++t) {
        const CVec phase = random_phase_vector(arrays.n_ris, rng);
        out.phase_matrix.row(t) = phase.transpose();
        auto& per_sub = out.blocks[static_cast<std::size_t>(t)];
        for (int n = 0; n < n_sub; ++n) {
            per_sub.push_back(observe_block(cascaded_channel(realization, phase, n), stage1.bs_precoder,
                                            stage1.ue_combiner, waveform.transmit_energy, waveform.noise_variance,
                                            rng));
            const CMat& y = per_sub.back();
            for (Eigen::Index b = 0; b < l_br; ++b)
                for (Eigen::Index a = 0; a < l_rm; ++a) energy(a + b * l_rm) += std::norm(y(a, b));
        }
    }

    Eigen::Index k = 0;
    for (Eigen::Index i = 1; i < energy.size(); ++i)
        if (energy(i) > energy(k)) k = i;
    out.dominant_pair = static_cast<int>(k);
    out.ue_beam = static_cast<int>(k % l_rm);
    out.bs_beam = static_cast<int>(k / l_rm);

    CMat y(j_blocks, n_sub);
    for (int t = 0; t < j_blocks; ++t)
        for (int n = 0; n < n_sub; ++n)
            y(t, n) = out.blocks[static_cast<std::size_t>(t)][static_cast<std::size_t>(n)](out.ue_beam, out.bs_beam);

    const double combined = waveform.noise_variance * stage1.ue_combiner.col(out.ue_beam).squaredNorm();
    const double floor = 1e-10 * y.squaredNorm() / static_cast<double>(y.size());
    out.problem.observations = y;
    out.problem.sensing = stage2_operator(out.phase_matrix, dft_dictionary(arrays.n_ris), n_sub).psi;
    out.problem.noise_cov_diag = RVec::Constant(j_blocks, std::max(combined, floor));
    out.problem.max_iterations = options.max_iterations;
    out.problem.convergence_tol = options.tolerance;
    return out;
}

SparseEstimate solve_stage2(SolverKind kind, const MmvProblem& problem, const SolverOptions& options) {
    switch (kind) {
    case SolverKind::Tmsbl: return tmsbl(problem);
    case SolverKind::Gsbl: return gsbl(problem);
    case SolverKind::Sbl: return sbl_mmv(problem);
    case SolverKind::Omp: return omp_mmv(problem, options.omp_atoms);
    case SolverKind::Amp: return amp_mmv(problem, options.amp);
    }
    throw InvalidArgument("unknown solver");
}

int dominant_row(const CMat& channel_matrix) {
    if (channel_matrix.rows() < 1) throw ShapeError("dominant_row: empty channel matrix");
    const RVec energy = channel_matrix.rowwise().squaredNorm();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < energy.size(); ++i)
        if (energy(i) > energy(best)) best = i;
    return static_cast<int>(best);
}

double extract_aor(const SparseEstimate& estimate, double known_aoa_ris, const DftDictionary& dict_ris,
                   double spacing) {
    if (estimate.channel_matrix.rows() != dict_ris.n)
        throw ShapeError("extract_aor: estimate rows must match the RIS dictionary");
    const int p = dominant_row(estimate.channel_matrix);
    const double diff = dict_ris.angle(p, spacing);
    const double arg = std::sin(known_aoa_ris) - std::sin(diff);
    if (std::abs(arg) > 1.0)
        throw AmbiguityError("reflection angle is ambiguous: sin(phi_BR) - sin(theta_diff) = " + std::to_string(arg));
    return std::asin(arg);
}

CVec per_subcarrier_gain(const CMat& channel_matrix) {
    if (channel_matrix.rows() < 1) throw ShapeError("per_subcarrier_gain: empty channel matrix");
    CVec out(channel_matrix.cols());
    for (Eigen::Index n = 0; n < channel_matrix.cols(); ++n) {
        Eigen::Index best = 0;
        for (Eigen::Index p = 1; p < channel_matrix.rows(); ++p)
            if (std::abs(channel_matrix(p, n)) > std::abs(channel_matrix(best, n))) best = p;
        out(n) = channel_matrix(best, n);
    }
    return out;
}

double extract_toa(const CVec& per_subcarrier_gain, const WaveformConfig& waveform, int grid_resolution) {
    const auto n_sub = per_subcarrier_gain.size();
    if (n_sub < 1) throw ShapeError("extract_toa: empty gain vector");
    if (grid_resolution < n_sub) throw InvalidArgument("extract_toa: grid resolution must be at least N");
    if (per_subcarrier_gain.norm() == 0.0) throw InvalidArgument("extract_toa: gain vector is identically zero");

    const double period = static_cast<double>(n_sub) * waveform.sampling_period();
    int best = 0;
    double best_power = -1.0;
    for (int i = 0; i < grid_resolution; ++i) {
        const double frac = static_cast<double>(i) / grid_resolution;
        cd corr = 0.0;
        for (Eigen::Index n = 0; n < n_sub; ++n)
            corr += std::polar(1.0, kTwoPi * static_cast<double>(n) * frac) * per_subcarrier_gain(n);
        const double power = std::norm(corr);
        if (power > best_power) {
            best_power = power;
            best = i;
        }
    }
    return period * best / grid_resolution;
}

Localization localize(const KnownRis& known, double aor, double toa_cascade) {
    Localization out;
    const double remaining = toa_cascade - known.toa;
    out.clamped = remaining < 0.0;
    out.toa_ris_ue = std::max(remaining, 0.0);
    out.position = recover_position(known.position, aor, out.toa_ris_ue);
    return out;
}

KnownRis known_ris_reference(const ChannelRealization& realization, double bs_beam_angle) {
    const auto& paths = realization.geometry_br;
    if (paths.empty()) throw ShapeError("known_ris_reference: no BS-RIS paths");
    const double s = realization.arrays.spacing;
    const double target = s * std::sin(bs_beam_angle);
    std::size_t best = 0;
    double best_dist = 2.0;
    for (std::size_t l = 0; l < paths.size(); ++l) {
        const double d = circular_distance(s * std::sin(paths[l].departure_angle), target);
        if (d < best_dist) {
            best_dist = d;
            best = l;
        }
    }
    return {Vec2::Zero(), paths[best].arrival_angle, paths[best].toa};
}

TrialProblem prepare_trial(ChannelRealization realization, const Vec2& ris_position, Rng& rng,
                           const SolverOptions& options) {
    TrialProblem trial;
    const int l_br = static_cast<int>(realization.geometry_br.size());
    const int l_rm = static_cast<int>(realization.geometry_rm.size());
    trial.stage1 = run_stage1(realization, l_br, l_rm, rng);
    trial.stage2 = assemble_stage2(realization, trial.stage1, rng, options);
    trial.known = known_ris_reference(realization,
                                      trial.stage1.estimated_aod[static_cast<std::size_t>(trial.stage2.bs_beam)]);
    trial.known.position = ris_position;
    trial.realization = std::move(realization);
    return trial;
}

TrialProblem prepare_trial(const Scene& scene, const ArrayConfig& arrays, const WaveformConfig& waveform, Rng& rng,
                           const SolverOptions& options) {
    return prepare_trial(ChannelRealization::synthesize(scene, arrays, waveform, rng), scene.ris, rng, options);
}

LocalizationEstimate solve_trial(const TrialProblem& trial, SolverKind kind, const SolverOptions& options) {
    const auto& arrays = trial.realization.arrays;
    const auto& waveform = trial.realization.waveform;
    const auto estimate = solve_stage2(kind, trial.stage2.problem, options);

    LocalizationEstimate out;
    out.dominant_path = trial.stage2.dominant_pair;
    out.dominant_row = dominant_row(estimate.channel_matrix);
    out.aor = extract_aor(estimate, trial.known.aoa, dft_dictionary(arrays.n_ris), arrays.spacing);
    out.per_subcarrier_gain = per_subcarrier_gain(estimate.channel_matrix);
    out.toa_cascade = extract_toa(out.per_subcarrier_gain, waveform,
                                  options.toa_grid_oversampling * waveform.n_subcarriers);
    const auto loc = localize(trial.known, out.aor, out.toa_cascade);
    out.toa_ris_ue = loc.toa_ris_ue;
    out.toa_clamped = loc.clamped;
    out.position = loc.position;
    return out;
}

double reference_gain(const Scene& scene, const WaveformConfig& waveform) {
    const double lambda = waveform.wavelength();
    return path_loss(path_distance(scene, Segment::BsRis, 0), true, 0.0, lambda) *
           path_loss(path_distance(scene, Segment::RisUe, 0), true, 0.0, lambda);
}

double noise_variance_for_snr(const Scene& scene, const WaveformConfig& waveform, double snr_db) {
    const double g = reference_gain(scene, waveform);
    return waveform.transmit_energy * g * g / std::pow(10.0, snr_db / 10.0);
}

} // namespace rislocate
