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

#include "rislocate/linalg.hpp"

#include "rislocate/errors.hpp"

#include <cmath>
#include <string>

namespace rislocate {

cd complex_gaussian(double variance, Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

CMat complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, Rng& rng) {
    CMat out(rows, cols);
    if (variance == 0.0) {
        out.setZero();
        return out;
    }
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    // Column-major fill keeps the draw order independent of Eigen internals.
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            out(r, c) = cd(re, im);
        }
    return out;
}

CMat hermitian_inverse(const CMat& a, double max_condition) {
    if (a.rows() != a.cols()) throw ShapeError("hermitian_inverse: matrix must be square");
    const Eigen::Index n = a.rows();
    if (n == 0) return a;
    const CMat herm = 0.5 * (a + a.adjoint());

    Eigen::SelfAdjointEigenSolver<CMat> eig(herm, Eigen::EigenvaluesOnly);
    const RVec ev = eig.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    const double bottom = ev.minCoeff();
    if (!(top > 0.0) || bottom <= 0.0 || top / bottom > max_condition) {
        throw IllPosedError("covariance is singular or ill-conditioned (condition " +
                            (bottom > 0.0 ? std::to_string(top / bottom) : std::string("inf")) + ")");
    }

    Eigen::LLT<CMat> llt(herm);
    if (llt.info() == Eigen::Success) return llt.solve(CMat::Identity(n, n));

    const double jitter = 1e-12 * herm.diagonal().real().cwiseAbs().maxCoeff();
    Eigen::LLT<CMat> jittered(herm + jitter * CMat::Identity(n, n));
    if (jittered.info() != Eigen::Success) throw IllPosedError("Cholesky factorization failed after jitter");
    return jittered.solve(CMat::Identity(n, n));
}

CMat hermitian_sqrt(const CMat& a) {
    const CMat herm = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> eig(herm);
    const RVec root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
}

Rng derive_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(a), hi(a), lo(b), hi(b), lo(c), hi(c)};
    return Rng(seq);
}

} // namespace rislocate
