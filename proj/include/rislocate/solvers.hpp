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

#include "rislocate/linalg.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rislocate {

// Y = Psi H + Z with Z rows ~ CN(0, noise_cov_diag(t)).
struct MmvProblem {
    CMat observations;   // J x N
    CMat sensing;        // J x N_R
    RVec noise_cov_diag; // J
    int max_iterations = 100;
    double convergence_tol = 1e-6;

    void validate() const;
};

struct SparseEstimate {
    CMat channel_matrix;  // N_R x N
    RVec hyperparameters; // N_R
    CMat correlation;     // N x N
    int iterations_used = 0;
    bool converged = false;
    std::uint64_t flop_estimate = 0;
    // ||Y - Psi H||_F after each iteration.
    std::vector<double> residual_history;
};

struct DcsSompResult {
    std::vector<Eigen::Index> atoms; // selected columns, selection order
    std::vector<int> bs_index;       // 1-based grid indices
    std::vector<int> ue_index;
    std::vector<double> bs_angles;
    std::vector<double> ue_angles;
    double residual_norm = 0.0;
};

// Joint greedy pursuit over subcarriers. Each iteration picks the column
// maximizing sum_n |s_i^H r_n| / ||s_i|| (lowest index on ties), extends a
// per-subcarrier orthonormal basis by Gram-Schmidt and deflates the residuals.
// Column i is split into BS index i / n_ue and UE index i % n_ue.
// Throws ResidualCollapseError when the residual vanishes before n_paths atoms.
DcsSompResult dcs_somp(std::span<const CVec> observations, std::span<const CMat> operators, int n_paths, int n_bs,
                       int n_ue, double spacing);

// Group SBL on the vectorized model with prior covariance Gamma kron M.
// Materializes the (N_R N)-dimensional posterior; small instances only.
SparseEstimate gsbl(const MmvProblem& problem);

// Temporally correlated MMV SBL with the N_R x N_R posterior approximation and
// the kappa-regularized, Frobenius-normalized correlation update.
SparseEstimate tmsbl(const MmvProblem& problem);

inline constexpr double kTmsblKappa = 2.0;

// Scalar-hyperparameter SBL for a single measurement vector. A zero noise
// variance is floored at 1e-10 times the mean observation power.
CVec sbl_smv(const CVec& y, const CMat& a, double noise_var, int max_iterations, double convergence_tol = 1e-6);

struct OmpResult {
    std::vector<Eigen::Index> indices;
    CVec coefficients; // least-squares fit on the selected atoms
};

OmpResult omp(const CVec& y, const CMat& a, int n_atoms);

struct AmpOptions {
    int iterations = 50;
    double damping = 0.7;   // weight of the new iterate
    double threshold = 1.5; // soft threshold in units of the residual standard deviation
};

// Complex AMP with soft thresholding applied per subcarrier column and the
// Onsager correction. Baseline only.
SparseEstimate amp_mmv(const MmvProblem& problem, const AmpOptions& options = {});

// Per-subcarrier baselines on an MMV problem.
SparseEstimate omp_mmv(const MmvProblem& problem, int n_atoms);
SparseEstimate sbl_mmv(const MmvProblem& problem);

enum class Algorithm { DcsSomp, Sbl, Gsbl, Tmsbl, Amp };

std::string_view algorithm_name(Algorithm algorithm);

// Leading-order operation counts:
// DCS-SOMP N N_R^2 + J^3, SBL N N_R^3 + N J^3, GSBL N^3 N_R^3 + J^3,
// TMSBL N_R^3 + J^3 + N_R N^3, AMP N_R N J.
std::uint64_t flop_estimate(Algorithm algorithm, std::uint64_t n_ris, std::uint64_t n_subcarriers,
                            std::uint64_t n_blocks);

} // namespace rislocate
