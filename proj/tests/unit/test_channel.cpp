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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace rislocate;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

Scene los_only() {
    Scene s;
    s.scatterers_br.clear();
    s.scatterers_rm.clear();
    return s;
}

double frobenius_rel(const CMat& a, const CMat& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

} // namespace

TEST_CASE("steering_vector examples", "[channel]") {
    for (int n : {1, 3, 8}) {
        const CVec a = steering_vector(n, 0.0, 0.5);
        for (int k = 0; k < n; ++k) CHECK(std::abs(a(k) - cd(1.0 / std::sqrt(n), 0.0)) < 1e-15);
    }
    const CVec a = steering_vector(2, kPi / 2, 0.5);
    CHECK(std::abs(a(0) - cd(std::sqrt(0.5), 0.0)) < 1e-15);
    CHECK(std::abs(a(1) - cd(-std::sqrt(0.5), 0.0)) < 1e-12);
    CHECK_THROWS_AS(steering_vector(0, 0.0, 0.5), InvalidArgument);
}

TEST_CASE("grid steering vectors are mutually orthogonal", "[channel]") {
    const auto dict = dft_dictionary(8);
    for (int l = 0; l < 8; ++l) {
        const CVec a = steering_vector(8, std::asin(dict.grid(l) / 0.5), 0.5);
        for (int k = 0; k < 8; ++k) {
            if (k == l) continue;
            CHECK(std::abs(steering_vector(8, std::asin(dict.grid(k) / 0.5), 0.5).dot(a)) < 1e-10);
        }
    }
}

TEST_CASE("property: steering vectors are unit norm", "[channel][property]") {
    Rng rng(3);
    std::uniform_real_distribution<double> angle(-kPi / 2 + 1e-9, kPi / 2 - 1e-9);
    for (int n = 2; n <= 64; ++n)
        for (int i = 0; i < 20; ++i) CHECK_THAT(steering_vector(n, angle(rng), 0.5).norm(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("path_loss examples", "[channel]") {
    const double lambda = kSpeedOfLight / 60e9;
    CHECK_THAT(lambda, WithinRel(4.99654e-3, 1e-5));
    CHECK_THAT(path_loss(lambda / (4 * kPi), true, -13.0, lambda), WithinAbs(1.0, 1e-12));
    const double d = 4.716991;
    const double los = lambda / (4 * kPi * d);
    CHECK_THAT(path_loss(d, true, -13.0, lambda), WithinRel(los, 1e-14));
    CHECK_THAT(path_loss(d, false, -13.0, lambda), WithinRel(los * std::pow(10.0, -13.0 / 20.0), 1e-14));
    CHECK_THROWS_AS(path_loss(0.0, true, -13.0, lambda), InvalidArgument);
    CHECK_THROWS_AS(path_loss(-1.0, false, -13.0, lambda), InvalidArgument);
}

TEST_CASE("waveform validation enforces the narrowband ratio", "[channel]") {
    WaveformConfig wf;
    CHECK_NOTHROW(wf.validate());
    wf.bandwidth_hz = 3e9;
    CHECK_THROWS_AS(wf.validate(), InvalidArgument);
}

TEST_CASE("segment_channel single LoS path", "[channel]") {
    const Scene s = los_only();
    const ArrayConfig arrays;
    const WaveformConfig wf;
    Rng rng(1);
    const auto geo = segment_paths(s, Segment::BsRis);
    const auto gains = draw_path_gains(geo, wf, rng);
    REQUIRE(gains.fading[0] == cd(1.0, 0.0));

    const CMat h0 = segment_channel(geo, gains, arrays, wf, 0);
    const CMat expected = std::sqrt(64.0) * gains.path_loss[0] *
                          steering_vector(8, geo[0].arrival_angle, 0.5) *
                          steering_vector(8, geo[0].departure_angle, 0.5).adjoint();
    CHECK(frobenius_rel(h0, expected) < 1e-12);
    Eigen::JacobiSVD<CMat> svd(h0);
    CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));

    // Phase ramp across subcarriers is a constant scalar.
    const double period = wf.n_subcarriers * wf.sampling_period();
    const cd step = std::polar(1.0, -2 * kPi * geo[0].toa / period);
    for (int n = 0; n + 1 < wf.n_subcarriers; ++n) {
        const CMat hn = segment_channel(geo, gains, arrays, wf, n);
        const CMat hn1 = segment_channel(geo, gains, arrays, wf, n + 1);
        const CMat ratio = hn1.cwiseQuotient(hn);
        for (Eigen::Index i = 0; i < ratio.size(); ++i) CHECK(std::abs(ratio(i) - step) < 1e-9);
    }
    CHECK_THROWS_AS(segment_channel(geo, gains, arrays, wf, wf.n_subcarriers), InvalidArgument);
}

TEST_CASE("segment_channel two orthogonal on-grid paths has rank 2", "[channel]") {
    const auto dict = dft_dictionary(8);
    std::vector<PathGeometry> geo(2);
    for (int l = 0; l < 2; ++l) {
        geo[l].path_index = l;
        geo[l].distance = 3.0 + l;
        geo[l].toa = geo[l].distance / kSpeedOfLight;
        geo[l].departure_angle = dict.angle(2 + 3 * l, 0.5);
        geo[l].arrival_angle = dict.angle(1 + 4 * l, 0.5);
    }
    PathGains gains;
    gains.fading = {1.0, cd(0.3, 0.4)};
    gains.path_loss = {1.0, 0.5};
    gains.toa = {geo[0].toa, geo[1].toa};
    const CMat h = segment_channel(geo, gains, ArrayConfig{}, WaveformConfig{}, 3);
    Eigen::JacobiSVD<CMat> svd(h);
    CHECK(svd.singularValues()(1) > 1e-12 * svd.singularValues()(0));
    CHECK(svd.singularValues()(2) < 1e-12 * svd.singularValues()(0));

    gains.toa.pop_back();
    CHECK_THROWS_AS(segment_channel(geo, gains, ArrayConfig{}, WaveformConfig{}, 0), ShapeError);
}

TEST_CASE("cascaded channel with unit phases equals the explicit product", "[channel]") {
    Rng rng(5);
    const auto r = ChannelRealization::synthesize(los_only(), ArrayConfig{}, WaveformConfig{}, rng);
    const CVec ones = CVec::Ones(8);
    const CMat h = cascaded_channel(r, ones, 0);

    const auto& br = r.geometry_br[0];
    const auto& rm = r.geometry_rm[0];
    const cd inner = steering_vector(8, rm.departure_angle, 0.5).dot(steering_vector(8, br.arrival_angle, 0.5));
    const cd scalar = std::sqrt(64.0) * std::sqrt(64.0) * r.gains_br.path_loss[0] * r.gains_rm.path_loss[0] * inner;
    const CMat expected = scalar * steering_vector(8, rm.arrival_angle, 0.5) *
                          steering_vector(8, br.departure_angle, 0.5).adjoint();
    CHECK(frobenius_rel(h, expected) < 1e-12);

    CVec bad = ones;
    bad(3) = 1.01;
    CHECK_THROWS_AS(cascaded_channel(r, bad, 0), InvalidRisConfigError);
}

TEST_CASE("aligned RIS phases maximize the inner phase sum", "[channel]") {
    const double theta = -0.38, phi = -2.13;
    const CVec a_t = steering_vector(8, theta, 0.5), a_p = steering_vector(8, phi, 0.5);
    const auto gain = [&](const CVec& w) { return std::abs(a_t.dot(w.asDiagonal() * a_p)); };
    CVec aligned(8);
    for (int i = 0; i < 8; ++i) aligned(i) = std::polar(1.0, std::arg(a_t(i) * std::conj(a_p(i))));
    CHECK_THAT(gain(aligned), WithinAbs(1.0, 1e-12));
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) CHECK(gain(random_phase_vector(8, rng)) <= gain(aligned) + 1e-12);
}

TEST_CASE("zero gains give a zero cascaded channel", "[channel]") {
    Rng rng(2);
    auto geo_br = segment_paths(los_only(), Segment::BsRis);
    auto geo_rm = segment_paths(los_only(), Segment::RisUe);
    auto g_br = draw_path_gains(geo_br, WaveformConfig{}, rng);
    auto g_rm = draw_path_gains(geo_rm, WaveformConfig{}, rng);
    g_br.fading[0] = 0.0;
    const auto r = ChannelRealization::from_ground_truth(geo_br, geo_rm, g_br, g_rm, ArrayConfig{}, WaveformConfig{});
    CHECK(cascaded_channel(r, random_phase_vector(8, rng), 2).norm() == 0.0);
}

TEST_CASE("property: cascaded channel matches the per-segment product", "[channel][property]") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto r = ChannelRealization::synthesize(Scene{}, ArrayConfig{}, WaveformConfig{}, rng);
        const CVec w = random_phase_vector(8, rng);
        for (int n = 0; n < 10; ++n) {
            const CMat expected = r.h_rm[n] * w.asDiagonal() * r.h_br[n];
            CHECK(frobenius_rel(cascaded_channel(r, w, n), expected) < 1e-12);
        }
    }
}

TEST_CASE("property: rebuilding from ground truth is exact", "[channel][property]") {
    Rng rng(19);
    const auto r = ChannelRealization::synthesize(Scene{}, ArrayConfig{}, WaveformConfig{}, rng);
    const auto again = ChannelRealization::from_ground_truth(r.geometry_br, r.geometry_rm, r.gains_br, r.gains_rm,
                                                             r.arrays, r.waveform);
    for (std::size_t n = 0; n < r.h_br.size(); ++n) {
        CHECK(again.h_br[n] == r.h_br[n]);
        CHECK(again.h_rm[n] == r.h_rm[n]);
    }
}

TEST_CASE("effective channel entry form", "[channel]") {
    Rng rng(23);
    // Equal sines give a zero difference frequency.
    Scene s = los_only();
    s.ris = {0.0, 0.0};
    s.bs = {-3.0, 1.0};
    s.ue = {3.0, 1.0};
    const auto r = ChannelRealization::synthesize(s, ArrayConfig{}, WaveformConfig{}, rng);
    REQUIRE(std::abs(std::sin(r.geometry_br[0].arrival_angle) - std::sin(r.geometry_rm[0].departure_angle)) < 1e-15);
    const CVec w = random_phase_vector(8, rng);
    const double rho = 8.0 * 8.0 * r.gains_br.path_loss[0] * r.gains_rm.path_loss[0];
    const cd phase_br = std::polar(1.0, -2 * kPi * 4 * r.geometry_br[0].toa / (10 * 1e-8));
    const cd phase_rm = std::polar(1.0, -2 * kPi * 4 * r.geometry_rm[0].toa / (10 * 1e-8));
    const cd expected = rho * phase_br * phase_rm * w.sum() / 8.0;
    CHECK(std::abs(effective_channel(r, w, 4)(0, 0) - expected) < 1e-12 * std::abs(expected));
}

TEST_CASE("effective channel baseline scene with unit phases", "[channel]") {
    Rng rng(29);
    const auto r = ChannelRealization::synthesize(los_only(), ArrayConfig{}, WaveformConfig{}, rng);
    const double diff = std::sin(r.geometry_br[0].arrival_angle) - std::sin(r.geometry_rm[0].departure_angle);
    cd sum = 0.0;
    for (int i = 0; i < 8; ++i) sum += std::polar(1.0, -2 * kPi * 0.5 * diff * i);
    const cd expected = 8.0 * r.gains_rm.path_loss[0] * 8.0 * r.gains_br.path_loss[0] * sum / 8.0;
    const cd got = effective_channel(r, CVec::Ones(8), 0)(0, 0);
    CHECK(std::abs(got - expected) < 1e-12 * std::abs(expected));
}

TEST_CASE("property: effective channel entry and product forms agree", "[channel][property]") {
    Rng rng(31);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_real_distribution<double> coord(0.0, 5.0);
        Scene s;
        s.bs = {coord(rng), coord(rng)};
        s.ris = {coord(rng), coord(rng)};
        s.ue = {coord(rng), coord(rng)};
        s.scatterers_br = {{coord(rng), coord(rng)}};
        s.scatterers_rm = {{coord(rng), coord(rng)}};
        const auto r = ChannelRealization::synthesize(s, ArrayConfig{}, WaveformConfig{}, rng);
        const CVec w = random_phase_vector(8, rng);
        try {
            const CMat entry = effective_channel(r, w, trial % 10);
            CHECK(frobenius_rel(entry, effective_channel_product(r, w, trial % 10)) < 1e-12);
            ++checked;
        } catch (const SpatialFrequencyOverflowError&) {
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("effective channel reports spatial-frequency overflow", "[channel]") {
    Scene s = los_only();
    s.ris = {0.0, 0.0};
    s.bs = {-1.0, -5.0}; // arrival sine about -0.98
    s.ue = {0.2, 5.0};   // departure sine about +1
    Rng rng(1);
    const auto r = ChannelRealization::synthesize(s, ArrayConfig{}, WaveformConfig{}, rng);
    CHECK_THROWS_AS(effective_channel(r, CVec::Ones(8), 0), SpatialFrequencyOverflowError);
}

TEST_CASE("effective channel matches beam-projected cascade", "[channel]") {
    Rng rng(37);
    const auto r = ChannelRealization::synthesize(Scene{}, ArrayConfig{}, WaveformConfig{}, rng);
    const CVec w = random_phase_vector(8, rng);
    std::vector<double> aod, aoa;
    for (const auto& g : r.geometry_br) aod.push_back(g.departure_angle);
    for (const auto& g : r.geometry_rm) aoa.push_back(g.arrival_angle);
    const CMat f = steering_matrix(8, aod, 0.5);
    const CMat wc = steering_matrix(8, aoa, 0.5);
    // With exact steering beams: W^H H F = (W^H A_M) H_eff (A_B^H F).
    const CMat h_eff = effective_channel(r, w, 5);
    const CMat observed = wc.adjoint() * cascaded_channel(r, w, 5) * f;
    const CMat predicted = (wc.adjoint() * wc) * h_eff * (f.adjoint() * f);
    CHECK(frobenius_rel(observed, predicted) < 1e-6);
}

TEST_CASE("observe_block examples", "[channel]") {
    Rng rng(41);
    const CMat h = complex_gaussian(8, 8, 1.0, rng);
    const CMat f = complex_gaussian(8, 3, 1.0, rng);
    const CMat w = complex_gaussian(8, 2, 1.0, rng);
    CHECK((observe_block(h, f, w, 4.0, 0.0, rng) - 2.0 * w.adjoint() * h * f).norm() < 1e-12);

    const CMat q = CMat(Eigen::HouseholderQR<CMat>(complex_gaussian(4, 4, 1.0, rng)).householderQ());
    CHECK((observe_block(CMat::Identity(4, 4), CMat::Identity(4, 4), q, 9.0, 0.0, rng) - 3.0 * q.adjoint()).norm() <
          1e-12);

    CHECK_THROWS_AS(observe_block(h, f, w, 1.0, -1.0, rng), InvalidArgument);
    CHECK_THROWS_AS(observe_block(h, complex_gaussian(7, 3, 1.0, rng), w, 1.0, 1.0, rng), ShapeError);
}

TEST_CASE("observe_block noise covariance follows the combiner", "[channel]") {
    Rng rng(43);
    const double sigma2 = 0.7;
    const CMat w = complex_gaussian(4, 2, 1.0, rng);
    const CMat zero = CMat::Zero(4, 1);
    CMat cov = CMat::Zero(2, 2);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const CMat y = observe_block(zero, CMat::Ones(1, 1), w, 1.0, sigma2, rng);
        cov += y * y.adjoint();
    }
    cov /= draws;
    const CMat expected = sigma2 * w.adjoint() * w;
    CHECK((cov - expected).norm() < 0.05 * expected.norm());
}

TEST_CASE("quantize_phases keeps unit modulus on the level grid", "[channel]") {
    Rng rng(47);
    const CVec w = random_phase_vector(16, rng);
    const CVec q = quantize_phases(w, 2);
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        CHECK_THAT(std::abs(q(i)), WithinAbs(1.0, 1e-15));
        const double level = std::arg(q(i)) / (kPi / 2);
        CHECK_THAT(level, WithinAbs(std::round(level), 1e-12));
        CHECK(std::abs(std::arg(q(i) * std::conj(w(i)))) <= kPi / 4 + 1e-12);
    }
    CHECK_THROWS_AS(quantize_phases(w, 0), InvalidArgument);
}
