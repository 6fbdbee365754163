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
#include "rislocate/channel.hpp"
#include "rislocate/errors.hpp"
#include "rislocate/solvers.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace rislocate;
using Catch::Matchers::WithinAbs;

namespace {

CMat phase_sensing(int j_blocks, int n_ris, Rng& rng) {
    CMat omega(j_blocks, n_ris);
    for (int t = 0; t < j_blocks; ++t) omega.row(t) = random_phase_vector(n_ris, rng).transpose();
    return stage2_operator(omega, dft_dictionary(n_ris), 1).psi;
}

struct Planted {
    MmvProblem problem;
    int row = 0;
};

// One active row with a delay phase ramp across subcarriers. An infinite SNR
// gives exact observations with a modelled noise variance of 1e-8 times the
// signal power, which keeps the posterior within the conditioning guard.
Planted planted(const CMat& psi, int n_sub, double snr_db, Rng& rng) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(psi.cols()) - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Planted p;
    p.row = pick(rng);
    CMat h = CMat::Zero(psi.cols(), n_sub);
    const double tau = unit(rng);
    for (int n = 0; n < n_sub; ++n) h(p.row, n) = std::polar(1.0 + unit(rng), -2 * std::numbers::pi * n * tau);
    const CMat clean = psi * h;
    const double power = clean.squaredNorm() / static_cast<double>(clean.size());
    const double noise = std::isinf(snr_db) ? 1e-8 * power : power / std::pow(10.0, snr_db / 10.0);
    p.problem.observations = std::isinf(snr_db) ? clean : CMat(clean + complex_gaussian(psi.rows(), n_sub, noise, rng));
    p.problem.sensing = psi;
    p.problem.noise_cov_diag = RVec::Constant(psi.rows(), noise);
    return p;
}

int dominant(const CMat& h) {
    Eigen::Index best = 0;
    h.rowwise().squaredNorm().maxCoeff(&best);
    return static_cast<int>(best);
}

} // namespace

TEST_CASE("MmvProblem validation", "[solvers]") {
    MmvProblem p;
    p.observations = CMat::Ones(4, 2);
    p.sensing = CMat::Ones(4, 3);
    p.noise_cov_diag = RVec::Ones(4);
    CHECK_NOTHROW(p.validate());
    p.noise_cov_diag(1) = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p.noise_cov_diag = RVec::Ones(3);
    CHECK_THROWS_AS(p.validate(), ShapeError);
}

TEST_CASE("dcs_somp recovers a planted on-grid atom", "[solvers]") {
    Rng rng(1);
    const auto d = dft_dictionary(8);
    std::vector<CMat> ops;
    std::vector<CVec> obs;
    const Eigen::Index planted_col = 8 * 5 + 2; // BS index 6, UE index 3 (1-based)
    for (int n = 0; n < 4; ++n) {
        const CMat f = complex_gaussian(8, 16, 1.0, rng);
        const CMat w = complex_gaussian(8, 16, 1.0, rng);
        ops.push_back(stage1_operator(f, w, d, d).combined);
        obs.push_back(ops.back().col(planted_col) * std::polar(1.0, 0.3 * n));
    }
    const auto r = dcs_somp(obs, ops, 1, 8, 8, 0.5);
    REQUIRE(r.atoms.size() == 1);
    CHECK(r.atoms[0] == planted_col);
    CHECK(r.bs_index[0] == 6);
    CHECK(r.ue_index[0] == 3);
    CHECK(r.bs_angles[0] == grid_to_angle(6, 8, 0.5));
    CHECK(r.residual_norm < 1e-10);
}

TEST_CASE("dcs_somp two orthogonal atoms in correlation order", "[solvers]") {
    const auto d = dft_dictionary(8);
    const CMat op = stage1_operator(CMat::Identity(8, 8), CMat::Identity(8, 8), d, d).combined;
    const CVec y = 0.5 * op.col(10) + 2.0 * op.col(45);
    const std::vector<CVec> obs{y};
    const std::vector<CMat> ops{op};
    const auto r = dcs_somp(obs, ops, 2, 8, 8, 0.5);
    REQUIRE(r.atoms.size() == 2);
    CHECK(r.atoms[0] == 45);
    CHECK(r.atoms[1] == 10);
    CHECK(r.residual_norm < 1e-10);

    CHECK_THROWS_AS(dcs_somp(obs, ops, 3, 8, 8, 0.5), ResidualCollapseError);
    const std::vector<CVec> zero{CVec::Zero(64)};
    CHECK_THROWS_AS(dcs_somp(zero, ops, 1, 8, 8, 0.5), ResidualCollapseError);
}

TEST_CASE("gsbl planted single group dominates", "[solvers]") {
    Rng rng(2);
    const CMat psi = phase_sensing(16, 8, rng);
    auto p = planted(psi, 4, INFINITY, rng);
    const auto est = gsbl(p.problem);
    const RVec g = est.hyperparameters;
    double others = 0.0;
    for (Eigen::Index j = 0; j < g.size(); ++j)
        if (j != p.row) others = std::max(others, g(j));
    CHECK(dominant(est.channel_matrix) == p.row);
    CHECK(g(p.row) > 1e3 * others);
}

TEST_CASE("gsbl identity sensing returns the observations", "[solvers]") {
    Rng rng(3);
    MmvProblem p;
    p.sensing = CMat::Identity(6, 6);
    p.observations = complex_gaussian(6, 1, 1.0, rng);
    p.noise_cov_diag = RVec::Constant(6, 1e-12);
    CHECK((gsbl(p).channel_matrix - p.observations).norm() < 1e-6);
    CHECK((tmsbl(p).channel_matrix - p.observations).norm() < 1e-6);
}

TEST_CASE("zero observations give zero estimates", "[solvers]") {
    MmvProblem p;
    Rng rng(4);
    p.sensing = phase_sensing(16, 8, rng);
    p.observations = CMat::Zero(16, 3);
    p.noise_cov_diag = RVec::Ones(16);
    const auto g = gsbl(p);
    CHECK(g.hyperparameters.maxCoeff() < 1e-8);
    CHECK(g.channel_matrix.cwiseAbs().maxCoeff() < 1e-8);
    CHECK(tmsbl(p).channel_matrix.cwiseAbs().maxCoeff() < 1e-8);
    CHECK(amp_mmv(p).channel_matrix.norm() == 0.0);
    CHECK(sbl_smv(CVec::Zero(16), p.sensing, 1.0, 100).norm() == 0.0);
}

TEST_CASE("tmsbl with one subcarrier reduces to the MMV-SBL update", "[solvers]") {
    Rng rng(5);
    const CMat psi = phase_sensing(12, 6, rng);
    auto p = planted(psi, 1, 10.0, rng);
    p.problem.max_iterations = 1;
    const auto est = tmsbl(p.problem);

    // Hand-coded first iteration from gamma = 1, M = 1.
    const RVec r_inv = p.problem.noise_cov_diag.cwiseInverse();
    const CMat sigma =
        (CMat::Identity(6, 6) + psi.adjoint() * r_inv.asDiagonal() * psi).inverse();
    const CVec h = sigma * psi.adjoint() * r_inv.asDiagonal() * p.problem.observations.col(0);
    for (int j = 0; j < 6; ++j) {
        const double expected = sigma(j, j).real() + std::norm(h(j));
        if (est.hyperparameters(j) > 0.0) CHECK_THAT(est.hyperparameters(j), WithinAbs(expected, 1e-10 * expected));
    }
    CHECK((est.channel_matrix.col(0) - h).norm() < 1e-10 * h.norm());
}

TEST_CASE("tmsbl planted group matches gsbl", "[solvers]") {
    Rng rng(6);
    int agree = 0, correct = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const CMat psi = phase_sensing(64, 8, rng);
        const auto p = planted(psi, 10, 0.0, rng);
        const int t = dominant(tmsbl(p.problem).channel_matrix);
        if (t == dominant(gsbl(p.problem).channel_matrix)) ++agree;
        if (t == p.row) ++correct;
    }
    CHECK(agree >= 95);
    CHECK(correct >= 95);
}

TEST_CASE("property: tmsbl correlation is Hermitian with unit Frobenius norm", "[solvers][property]") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = planted(phase_sensing(32, 8, rng), 6, trial % 2 ? 0.0 : 20.0, rng);
        const auto est = tmsbl(p.problem);
        CHECK_THAT(est.correlation.norm(), WithinAbs(1.0, 1e-12));
        CHECK((est.correlation - est.correlation.adjoint()).norm() < 1e-12);
        CHECK(est.hyperparameters.minCoeff() >= 0.0);
    }
}

TEST_CASE("property: SBL residual is non-increasing on noiseless planted data", "[solvers][property]") {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = planted(phase_sensing(24, 8, rng), 4, INFINITY, rng);
        for (const auto& est : {tmsbl(p.problem), gsbl(p.problem)}) {
            const auto& h = est.residual_history;
            REQUIRE(!h.empty());
            const double slack = 1e-9 * p.problem.observations.norm();
            for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] <= h[k - 1] + slack);
        }
    }
}

TEST_CASE("sbl_smv examples", "[solvers]") {
    Rng rng(9);
    const CVec y = complex_gaussian(5, 1, 1.0, rng);
    CHECK((sbl_smv(y, CMat::Identity(5, 5), 0.0, 100) - y).norm() < 1e-6);

    int hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const CMat a = phase_sensing(32, 8, rng);
        const auto p = planted(a, 1, 20.0, rng);
        const CVec x = sbl_smv(p.problem.observations.col(0), a, p.problem.noise_cov_diag(0), 100);
        Eigen::Index best = 0;
        x.cwiseAbs().maxCoeff(&best);
        if (best == p.row) ++hits;
    }
    CHECK(hits >= 99);
}

TEST_CASE("omp examples", "[solvers]") {
    const auto d = dft_dictionary(8);
    const CVec y = cd(2.0, 1.0) * d.matrix.col(3);
    const auto one = omp(y, d.matrix, 1);
    CHECK(one.indices == std::vector<Eigen::Index>{3});
    CHECK((y - d.matrix.col(3) * one.coefficients(0)).norm() < 1e-10);

    const CVec y2 = 3.0 * d.matrix.col(1) + cd(0.0, 1.0) * d.matrix.col(6);
    const auto two = omp(y2, d.matrix, 2);
    CHECK(two.indices == std::vector<Eigen::Index>{1, 6});

    const CMat low = d.matrix.leftCols(2) * CMat::Ones(2, 4); // rank 1
    CHECK_THROWS_AS(omp(low.col(0), low, 2), ResidualCollapseError);
}

TEST_CASE("property: OMP support is scale equivariant", "[solvers][property]") {
    Rng rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        const CMat a = complex_gaussian(12, 20, 1.0, rng);
        const CVec y = complex_gaussian(12, 1, 1.0, rng);
        CHECK(omp(y, a, 3).indices == omp(7.5 * y, 7.5 * a, 3).indices);
    }
}

TEST_CASE("amp recovers supports with Gaussian sensing at 20 dB", "[solvers]") {
    Rng rng(11);
    int hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const CMat psi = complex_gaussian(64, 8, 1.0, rng);
        const auto p = planted(psi, 10, 20.0, rng);
        if (dominant(amp_mmv(p.problem).channel_matrix) == p.row) ++hits;
    }
    CHECK(hits >= 90);
}

TEST_CASE("amp is worse than tmsbl on RIS-phase sensing", "[nmse]") {
    Rng rng(12);
    double err_amp = 0.0, err_tmsbl = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const CMat psi = phase_sensing(64, 8, rng);
        CMat h = CMat::Zero(8, 10);
        h.row(trial % 8) = complex_gaussian(1, 10, 1.0, rng);
        const CMat clean = psi * h;
        const double noise = clean.squaredNorm() / clean.size();
        MmvProblem p;
        p.observations = clean + complex_gaussian(64, 10, noise, rng);
        p.sensing = psi;
        p.noise_cov_diag = RVec::Constant(64, noise);
        err_amp += (amp_mmv(p).channel_matrix - h).squaredNorm() / h.squaredNorm();
        err_tmsbl += (tmsbl(p).channel_matrix - h).squaredNorm() / h.squaredNorm();
    }
    CHECK(err_amp > err_tmsbl);
}

TEST_CASE("amp rejects a single block", "[solvers]") {
    MmvProblem p;
    p.observations = CMat::Ones(1, 2);
    p.sensing = CMat::Ones(1, 3);
    p.noise_cov_diag = RVec::Ones(1);
    CHECK_THROWS_AS(amp_mmv(p), InvalidArgument);
}

TEST_CASE("flop_estimate order expressions", "[solvers]") {
    CHECK(flop_estimate(Algorithm::Tmsbl, 8, 10, 60) == 224512);
    CHECK(flop_estimate(Algorithm::Sbl, 8, 10, 60) == 2165120);
    CHECK(flop_estimate(Algorithm::Amp, 8, 10, 60) == 4800);
    CHECK(flop_estimate(Algorithm::DcsSomp, 8, 10, 60) == 216640);
    CHECK(flop_estimate(Algorithm::Gsbl, 8, 10, 60) == 728000);
    for (auto a : {Algorithm::DcsSomp, Algorithm::Sbl, Algorithm::Gsbl, Algorithm::Tmsbl, Algorithm::Amp}) {
        CHECK(flop_estimate(a, 1, 1, 1) >= 1);
        CHECK(flop_estimate(a, 1, 1, 1) <= 3);
    }
}
