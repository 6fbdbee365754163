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

namespace rislocate {

// Square DFT beamspace dictionary. Column l is the unit-norm steering vector
// at spatial frequency grid(l) = -(n - 1) / (2n) + l / n.
struct DftDictionary {
    int n = 0;
    RVec grid;
    CMat matrix;

    // Physical angle of column l (0-based) for the given spacing ratio d / lambda.
    double angle(int l, double spacing) const;
};

DftDictionary dft_dictionary(int n);

// Stage-1 sensing: vec(W^H U_M H_v U_B^H F) = combined * vec(H_v), where
// phi = F^T kron W^H and dictionary = conj(U_B) kron U_M. Column i of the
// combined matrix pairs BS grid index i / N_M with UE grid index i % N_M.
struct Stage1Operator {
    CMat phi;
    CMat dictionary;
    CMat combined;
    int n_bs = 0;
    int n_ue = 0;

    int bs_index(Eigen::Index column) const { return static_cast<int>(column / n_ue); }
    int ue_index(Eigen::Index column) const { return static_cast<int>(column % n_ue); }
};

Stage1Operator stage1_operator(const CMat& precoder, const CMat& combiner, const DftDictionary& dict_bs,
                               const DftDictionary& dict_ue);

// Stage-2 sensing Psi = Omega U_R (J x N_R) and its group form Psi kron I_N.
struct Stage2Operator {
    CMat psi;
    int n_subcarriers = 1;

    Eigen::Index rows() const { return psi.rows() * n_subcarriers; }
    Eigen::Index cols() const { return psi.cols() * n_subcarriers; }

    // (Psi kron I_N) x without forming the Kronecker product. x is vec(H^T),
    // i.e. rows of H stacked, length N_R * N.
    CVec apply(const CVec& x) const;

    // (Psi kron I_N)^H y, y of length J * N.
    CVec apply_adjoint(const CVec& y) const;

    CMat materialize() const;
};

// phase_matrix rows are the RIS phase vectors of the J training blocks.
Stage2Operator stage2_operator(const CMat& phase_matrix, const DftDictionary& dict_ris, int n_subcarriers);

// Grid angle for a 1-based index: asin((index - (n - 1) / 2 - 1) / (n * spacing)).
// Throws GridAngleError when the argument leaves [-1, 1].
double grid_to_angle(int index, int n, double spacing);

// 1-based index of the grid point whose spatial frequency is closest to
// spacing * sin(angle), clamped to [1, n].
int nearest_grid_index(double angle, int n, double spacing);

} // namespace rislocate
