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

#include "rislocate/channel.hpp"

#include "rislocate/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rislocate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> departures(std::span<const PathGeometry> g) {
    std::vector<double> out;
    out.reserve(g.size());
    for (const auto& p : g) out.push_back(p.departure_angle);
    return out;
}

std::vector<double> arrivals(std::span<const PathGeometry> g) {
    std::vector<double> out;
    out.reserve(g.size());
    for (const auto& p : g) out.push_back(p.arrival_angle);
    return out;
}

void check_subcarrier(int n, const WaveformConfig& waveform) {
    if (n < 0 || n >= waveform.n_subcarriers)
        throw InvalidArgument("subcarrier index " + std::to_string(n) + " out of range");
}

void check_phase_vector(const CVec& phase, int n_ris) {
    if (phase.size() != n_ris) throw ShapeError("RIS phase vector length must equal the RIS element count");
    for (Eigen::Index i = 0; i < phase.size(); ++i)
        if (std::abs(std::abs(phase(i)) - 1.0) >= 1e-12)
            throw InvalidRisConfigError("RIS phase entry " + std::to_string(i) + " is not unit modulus");
}

} // namespace

void ArrayConfig::validate() const {
    if (n_bs < 2 || n_ue < 2 || n_ris < 2) throw InvalidArgument("array element counts must be at least 2");
    if (!(spacing > 0.0)) throw InvalidArgument("element spacing must be positive");
}

void WaveformConfig::validate() const {
    if (!(carrier_hz > 0.0) || !(bandwidth_hz > 0.0)) throw InvalidArgument("carrier and bandwidth must be positive");
    if (bandwidth_hz / carrier_hz >= 0.05)
        throw InvalidArgument("narrowband assumption violated: bandwidth / carrier must stay below 0.05");
    if (n_subcarriers < 1 || n_blocks < 1 || n_stage1_symbols < 1)
        throw InvalidArgument("subcarrier, block and symbol counts must be positive");
    if (!(transmit_energy > 0.0)) throw InvalidArgument("transmit energy must be positive");
    if (!(noise_variance >= 0.0)) throw InvalidArgument("noise variance must be non-negative");
}

CVec PathGains::tapped(int n, const WaveformConfig& waveform) const {
    const double period = waveform.n_subcarriers * waveform.sampling_period();
    CVec out(static_cast<Eigen::Index>(size()));
    for (std::size_t l = 0; l < size(); ++l)
        out(static_cast<Eigen::Index>(l)) =
            fading[l] * path_loss[l] * std::polar(1.0, -kTwoPi * n * toa[l] / period);
    return out;
}

CVec steering_vector(int n_elements, double angle, double spacing) {
    if (n_elements < 1) throw InvalidArgument("steering vector needs at least one element");
    const double freq = spacing * std::sin(angle);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_elements));
    CVec a(n_elements);
    for (int k = 0; k < n_elements; ++k) a(k) = std::polar(scale, -kTwoPi * freq * k);
    return a;
}

CMat steering_matrix(int n_elements, std::span<const double> angles, double spacing) {
    CMat a(n_elements, static_cast<Eigen::Index>(angles.size()));
    for (std::size_t l = 0; l < angles.size(); ++l)
        a.col(static_cast<Eigen::Index>(l)) = steering_vector(n_elements, angles[l], spacing);
    return a;
}

double path_loss(double distance, bool is_los, double reflection_loss_db, double wavelength) {
    if (!(distance > 0.0)) throw InvalidArgument("path loss needs a positive distance");
    const double free_space = wavelength / (4.0 * std::numbers::pi * distance);
    if (is_los) return free_space;
    return free_space * std::pow(10.0, reflection_loss_db / 20.0);
}

PathGains draw_path_gains(std::span<const PathGeometry> geometry, const WaveformConfig& waveform, Rng& rng) {
    PathGains g;
    if (!geometry.empty()) g.segment = geometry.front().segment;
    for (const auto& p : geometry) {
        const bool los = p.path_index == 0;
        g.fading.push_back(los ? cd(1.0, 0.0) : complex_gaussian(1.0, rng));
        g.path_loss.push_back(path_loss(p.distance, los, waveform.reflection_loss_db, waveform.wavelength()));
        g.toa.push_back(p.toa);
    }
    return g;
}

CMat segment_channel(std::span<const PathGeometry> geometry, const PathGains& gains, const ArrayConfig& arrays,
                     const WaveformConfig& waveform, int n) {
    check_subcarrier(n, waveform);
    if (geometry.size() != gains.size() || gains.path_loss.size() != gains.size() || gains.toa.size() != gains.size())
        throw ShapeError("path geometry and gains describe different path sets");
    if (geometry.empty()) throw ShapeError("segment needs at least one path");
    const bool br = geometry.front().segment == Segment::BsRis;
    const int n_tx = br ? arrays.n_bs : arrays.n_ris;
    const int n_rx = br ? arrays.n_ris : arrays.n_ue;

    const auto dep = departures(geometry);
    const auto arr = arrivals(geometry);
    const CMat a_tx = steering_matrix(n_tx, dep, arrays.spacing);
    const CMat a_rx = steering_matrix(n_rx, arr, arrays.spacing);
    const CVec sigma = std::sqrt(static_cast<double>(n_tx) * n_rx) * gains.tapped(n, waveform);
    return a_rx * sigma.asDiagonal() * a_tx.adjoint();
}

ChannelRealization ChannelRealization::from_ground_truth(std::vector<PathGeometry> geometry_br,
                                                         std::vector<PathGeometry> geometry_rm, PathGains gains_br,
                                                         PathGains gains_rm, const ArrayConfig& arrays,
                                                         const WaveformConfig& waveform) {
    ChannelRealization r;
    r.arrays = arrays;
    r.waveform = waveform;
    r.geometry_br = std::move(geometry_br);
    r.geometry_rm = std::move(geometry_rm);
    r.gains_br = std::move(gains_br);
    r.gains_rm = std::move(gains_rm);
    r.h_br.reserve(static_cast<std::size_t>(waveform.n_subcarriers));
    r.h_rm.reserve(static_cast<std::size_t>(waveform.n_subcarriers));
    for (int n = 0; n < waveform.n_subcarriers; ++n) {
        r.h_br.push_back(segment_channel(r.geometry_br, r.gains_br, arrays, waveform, n));
        r.h_rm.push_back(segment_channel(r.geometry_rm, r.gains_rm, arrays, waveform, n));
    }
    return r;
}

ChannelRealization ChannelRealization::synthesize(const Scene& scene, const ArrayConfig& arrays,
                                                  const WaveformConfig& waveform, Rng& rng) {
    scene.validate();
    arrays.validate();
    waveform.validate();
    auto geo_br = segment_paths(scene, Segment::BsRis);
    auto geo_rm = segment_paths(scene, Segment::RisUe);
    auto gains_br = draw_path_gains(geo_br, waveform, rng);
    auto gains_rm = draw_path_gains(geo_rm, waveform, rng);
    return from_ground_truth(std::move(geo_br), std::move(geo_rm), std::move(gains_br), std::move(gains_rm), arrays,
                             waveform);
}

double ChannelRealization::reference_gain() const {
    return std::abs(gains_br.fading.at(0)) * gains_br.path_loss.at(0) * std::abs(gains_rm.fading.at(0)) *
           gains_rm.path_loss.at(0);
}

CVec random_phase_vector(int n_ris, Rng& rng) {
    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    CVec w(n_ris);
    for (int i = 0; i < n_ris; ++i) w(i) = std::polar(1.0, uniform(rng));
    return w;
}

CVec quantize_phases(const CVec& phases, int bits) {
    if (bits < 1 || bits > 16) throw InvalidArgument("phase quantizer bit depth must be in [1, 16]");
    const double step = kTwoPi / static_cast<double>(1 << bits);
    CVec out(phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        const double level = std::round(std::arg(phases(i)) / step);
        out(i) = std::polar(1.0, level * step);
    }
    return out;
}

CMat cascaded_channel(const ChannelRealization& realization, const CVec& phase_vector, int n) {
    check_subcarrier(n, realization.waveform);
    check_phase_vector(phase_vector, realization.arrays.n_ris);
    const auto idx = static_cast<std::size_t>(n);
    return realization.h_rm[idx] * phase_vector.asDiagonal() * realization.h_br[idx];
}

CMat effective_channel(const ChannelRealization& realization, const CVec& phase_vector, int n) {
    check_subcarrier(n, realization.waveform);
    check_phase_vector(phase_vector, realization.arrays.n_ris);
    const auto& arrays = realization.arrays;
    const auto& waveform = realization.waveform;
    const double gain_br = std::sqrt(static_cast<double>(arrays.n_bs) * arrays.n_ris);
    const double gain_rm = std::sqrt(static_cast<double>(arrays.n_ris) * arrays.n_ue);
    const CVec rho_br = gain_br * realization.gains_br.tapped(n, waveform);
    const CVec rho_rm = gain_rm * realization.gains_rm.tapped(n, waveform);
    const double norm = 1.0 / std::sqrt(static_cast<double>(arrays.n_ris));

    CMat h(rho_rm.size(), rho_br.size());
    for (Eigen::Index a = 0; a < rho_rm.size(); ++a) {
        for (Eigen::Index b = 0; b < rho_br.size(); ++b) {
            const double diff = std::sin(realization.geometry_br[static_cast<std::size_t>(b)].arrival_angle) -
                                std::sin(realization.geometry_rm[static_cast<std::size_t>(a)].departure_angle);
            if (std::abs(diff) > 1.0)
                throw SpatialFrequencyOverflowError("sine difference " + std::to_string(diff) +
                                                    " has no real difference angle");
            const CVec steer = steering_vector(arrays.n_ris, std::asin(diff), arrays.spacing);
            h(a, b) = rho_rm(a) * (phase_vector.array() * steer.array()).sum() * norm * rho_br(b);
        }
    }
    return h;
}

CMat effective_channel_product(const ChannelRealization& realization, const CVec& phase_vector, int n) {
    check_subcarrier(n, realization.waveform);
    check_phase_vector(phase_vector, realization.arrays.n_ris);
    const auto& arrays = realization.arrays;
    const auto& waveform = realization.waveform;
    const double gain_br = std::sqrt(static_cast<double>(arrays.n_bs) * arrays.n_ris);
    const double gain_rm = std::sqrt(static_cast<double>(arrays.n_ris) * arrays.n_ue);
    const CVec rho_br = gain_br * realization.gains_br.tapped(n, waveform);
    const CVec rho_rm = gain_rm * realization.gains_rm.tapped(n, waveform);
    const CMat a_phi = steering_matrix(arrays.n_ris, arrivals(realization.geometry_br), arrays.spacing);
    const CMat a_theta = steering_matrix(arrays.n_ris, departures(realization.geometry_rm), arrays.spacing);
    return rho_rm.asDiagonal() * (a_theta.adjoint() * phase_vector.asDiagonal() * a_phi) * rho_br.asDiagonal();
}

CMat observe_block(const CMat& channel, const CMat& precoder, const CMat& combiner, double transmit_energy,
                   double noise_variance, Rng& rng) {
    if (channel.cols() != precoder.rows() || channel.rows() != combiner.rows())
        throw ShapeError("observe_block: channel, precoder and combiner are not conformable");
    if (!(noise_variance >= 0.0)) throw InvalidArgument("noise variance must be non-negative");
    if (!(transmit_energy >= 0.0)) throw InvalidArgument("transmit energy must be non-negative");
    CMat y = std::sqrt(transmit_energy) * (combiner.adjoint() * channel * precoder);
    if (noise_variance > 0.0)
        y += combiner.adjoint() * complex_gaussian(channel.rows(), precoder.cols(), noise_variance, rng);
    return y;
}

} // namespace rislocate
