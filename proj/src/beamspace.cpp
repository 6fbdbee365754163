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

#include "rislocate/beamspace.hpp"

#include "rislocate/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rislocate {

double DftDictionary::angle(int l, double spacing) const { return grid_to_angle(l + 1, n, spacing); }

DftDictionary dft_dictionary(int n) {
    if (n < 2) throw InvalidArgument("DFT dictionary needs n >= 2");
    DftDictionary d;
    d.n = n;
    d.grid.resize(n);
    d.matrix.resize(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int l = 0; l < n; ++l) {
        const double q = -(n - 1.0) / (2.0 * n) + static_cast<double>(l) / n;
        d.grid(l) = q;
        for (int k = 0; k < n; ++k) d.matrix(k, l) = std::polar(scale, -2.0 * std::numbers::pi * q * k);
    }
    return d;
}

Stage1Operator stage1_operator(const CMat& precoder, const CMat& combiner, const DftDictionary& dict_bs,
                               const DftDictionary& dict_ue) {
    if (precoder.rows() != dict_bs.n || combiner.rows() != dict_ue.n)
        throw ShapeError("stage1_operator: precoder/combiner rows must match the dictionary sizes");
    Stage1Operator op;
    op.n_bs = dict_bs.n;
    op.n_ue = dict_ue.n;
    op.phi = Eigen::kroneckerProduct(precoder.transpose(), combiner.adjoint());
    op.dictionary = Eigen::kroneckerProduct(dict_bs.matrix.conjugate(), dict_ue.matrix);
    // Same product as phi * dictionary, formed from the small factors.
    op.combined = Eigen::kroneckerProduct(precoder.transpose() * dict_bs.matrix.conjugate(),
                                          combiner.adjoint() * dict_ue.matrix);
    return op;
}

CVec Stage2Operator::apply(const CVec& x) const {
    if (x.size() != cols()) throw ShapeError("Stage2Operator::apply: length mismatch");
    const Eigen::Map<const CMat> h_t(x.data(), n_subcarriers, psi.cols());
    const CMat y_t = h_t * psi.transpose();
    return Eigen::Map<const CVec>(y_t.data(), y_t.size());
}

CVec Stage2Operator::apply_adjoint(const CVec& y) const {
    if (y.size() != rows()) throw ShapeError("Stage2Operator::apply_adjoint: length mismatch");
    const Eigen::Map<const CMat> y_t(y.data(), n_subcarriers, psi.rows());
    const CMat x_t = y_t * psi.conjugate();
    return Eigen::Map<const CVec>(x_t.data(), x_t.size());
}

CMat Stage2Operator::materialize() const {
    return Eigen::kroneckerProduct(psi, CMat::Identity(n_subcarriers, n_subcarriers));
}

Stage2Operator stage2_operator(const CMat& phase_matrix, const DftDictionary& dict_ris, int n_subcarriers) {
    if (phase_matrix.cols() != dict_ris.n) throw ShapeError("stage2_operator: phase matrix needs N_R columns");
    if (n_subcarriers < 1) throw InvalidArgument("stage2_operator: n_subcarriers must be positive");
    for (Eigen::Index t = 0; t < phase_matrix.rows(); ++t)
        for (Eigen::Index i = 0; i < phase_matrix.cols(); ++i)
            if (std::abs(std::abs(phase_matrix(t, i)) - 1.0) >= 1e-12)
                throw InvalidRisConfigError("stage2_operator: phase entries must be unit modulus");
    return {phase_matrix * dict_ris.matrix, n_subcarriers};
}

double grid_to_angle(int index, int n, double spacing) {
    if (n < 1 || index < 1 || index > n)
        throw InvalidArgument("grid index " + std::to_string(index) + " outside [1, " + std::to_string(n) + "]");
    if (!(spacing > 0.0)) throw InvalidArgument("spacing ratio must be positive");
    const double arg = (index - (n - 1) / 2.0 - 1.0) / (n * spacing);
    if (std::abs(arg) > 1.0)
        throw GridAngleError("grid index " + std::to_string(index) + " maps outside the visible region");
    return std::asin(arg);
}

int nearest_grid_index(double angle, int n, double spacing) {
    if (n < 1) throw InvalidArgument("grid size must be positive");
    const double pos = spacing * std::sin(angle) * n + (n - 1) / 2.0;
    const long l = std::lround(pos);
    return static_cast<int>(std::clamp<long>(l, 0, n - 1)) + 1;
}

} // namespace rislocate
