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

#include <Eigen/Dense>

#include <complex>
#include <random>

namespace rislocate {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Every random draw in the library goes through this engine so that a run is
// a pure function of its seed.
using Rng = std::mt19937_64;

// i.i.d. circularly symmetric complex Gaussian entries with the given variance.
CMat complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, Rng& rng);

cd complex_gaussian(double variance, Rng& rng);

// Inverse of a Hermitian positive (semi-)definite matrix. Falls back to a
// 1e-12 relative diagonal jitter when the Cholesky factorization fails and
// throws IllPosedError when the condition number exceeds max_condition.
CMat hermitian_inverse(const CMat& a, double max_condition = 1e14);

// Principal square root of a Hermitian PSD matrix (negative eigenvalues clamped).
CMat hermitian_sqrt(const CMat& a);

// Seed sequence from a list of integers; used to derive independent,
// reproducible per-trial streams.
Rng derive_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

} // namespace rislocate
