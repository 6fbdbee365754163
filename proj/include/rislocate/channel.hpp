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

#include "rislocate/geometry.hpp"
#include "rislocate/linalg.hpp"

#include <span>
#include <vector>

namespace rislocate {

struct ArrayConfig {
    int n_bs = 8;
    int n_ue = 8;
    int n_ris = 8;
    double spacing = 0.5; // element spacing over carrier wavelength

    void validate() const;
};

struct WaveformConfig {
    double carrier_hz = 60e9;
    double bandwidth_hz = 100e6;
    int n_subcarriers = 10;
    int n_blocks = 64;
    int n_stage1_symbols = 32;
    double transmit_energy = 1.0;
    double noise_variance = 1.0;
    double reflection_loss_db = -13.0;

    double sampling_period() const { return 1.0 / bandwidth_hz; }
    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    double snr() const { return transmit_energy / noise_variance; }

    // Narrowband check (B / f_c < 0.05) plus positivity of counts and energies.
    void validate() const;
};

// Per-path complex fading, path-loss amplitude and delay of one segment.
struct PathGains {
    Segment segment = Segment::BsRis;
    std::vector<cd> fading;
    std::vector<double> path_loss;
    std::vector<double> toa;

    std::size_t size() const { return fading.size(); }

    // Diagonal of the per-subcarrier gain matrix without the array factor:
    // beta_l * rho_l * exp(-j 2 pi n tau_l / (N Ts)).
    CVec tapped(int n, const WaveformConfig& waveform) const;
};

// Unit-norm ULA response, a_k = exp(-j 2 pi spacing sin(angle) k) / sqrt(n).
CVec steering_vector(int n_elements, double angle, double spacing);

CMat steering_matrix(int n_elements, std::span<const double> angles, double spacing);

// Free-space amplitude lambda / (4 pi d), scaled by sqrt(reflection loss) for NLoS paths.
double path_loss(double distance, bool is_los, double reflection_loss_db, double wavelength);

// LoS fading fixed to 1; NLoS fading drawn CN(0, 1).
PathGains draw_path_gains(std::span<const PathGeometry> geometry, const WaveformConfig& waveform, Rng& rng);

// H[n] = A_rx(arrival) Sigma[n] A_tx(departure)^H with
// Sigma[n] = sqrt(N_tx N_rx) diag(beta rho exp(-j 2 pi n tau / (N Ts))).
CMat segment_channel(std::span<const PathGeometry> geometry, const PathGains& gains, const ArrayConfig& arrays,
                     const WaveformConfig& waveform, int n);

struct ChannelRealization {
    ArrayConfig arrays;
    WaveformConfig waveform;
    std::vector<PathGeometry> geometry_br;
    std::vector<PathGeometry> geometry_rm;
    PathGains gains_br;
    PathGains gains_rm;
    std::vector<CMat> h_br; // per subcarrier, n_ris x n_bs
    std::vector<CMat> h_rm; // per subcarrier, n_ue x n_ris

    // Builds the per-subcarrier segment channels from stored ground truth.
    static ChannelRealization from_ground_truth(std::vector<PathGeometry> geometry_br,
                                                std::vector<PathGeometry> geometry_rm, PathGains gains_br,
                                                PathGains gains_rm, const ArrayConfig& arrays,
                                                const WaveformConfig& waveform);

    // Geometry from the scene, fresh NLoS fading from rng.
    static ChannelRealization synthesize(const Scene& scene, const ArrayConfig& arrays,
                                         const WaveformConfig& waveform, Rng& rng);

    // |beta_BR,0 rho_BR,0| * |beta_RM,0 rho_RM,0|: LoS-LoS cascade loss
    // without array gains.
    double reference_gain() const;
};

// Unit-modulus RIS reflection vector with uniform phases.
CVec random_phase_vector(int n_ris, Rng& rng);

// Rounds each phase to a 2^bits-level uniform grid.
CVec quantize_phases(const CVec& phases, int bits);

// H^t[n] = H_RM[n] diag(phase) H_BR[n].
CMat cascaded_channel(const ChannelRealization& realization, const CVec& phase_vector, int n);

// Effective L_RM x L_BR channel, entry form:
// Sigma_RM,a[n] Sigma_BR,b[n] omega^T a(theta_diff(a, b)) / sqrt(N_R), with
// theta_diff = asin(sin(phi_BR,b) - sin(theta_RM,a)). The 1/sqrt(N_R) factor
// appears because a(.) is unit norm. Throws SpatialFrequencyOverflowError
// when the sine difference leaves [-1, 1].
CMat effective_channel(const ChannelRealization& realization, const CVec& phase_vector, int n);

// Same quantity via diag(Sigma_RM) A_R^H(theta_RM) Omega A_R(phi_BR) diag(Sigma_BR).
CMat effective_channel_product(const ChannelRealization& realization, const CVec& phase_vector, int n);

// Y = sqrt(P) W^H H F + W^H N with N ~ CN(0, noise_variance) of size rows(H) x cols(F).
CMat observe_block(const CMat& channel, const CMat& precoder, const CMat& combiner, double transmit_energy,
                   double noise_variance, Rng& rng);

} // namespace rislocate
