# SPDX-License-Identifier: Apache-2.0
#
# rislocate: RIS-aided mmWave localization simulator and sparse recovery toolkit
# Copyright (C) 2026 The rislocate authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

import math

import numpy as np
import pytest

import rislocate as rl


def test_geometry_round_trip():
    scene = rl.Scene()
    assert rl.path_distance(scene, rl.Segment.BS_RIS, 0) == pytest.approx(math.hypot(2.5, 4.0))
    g = rl.path_geometry(scene, rl.Segment.RIS_UE, 0)
    assert g.departure_angle == pytest.approx(math.atan2(-1.0, 2.5))
    m = rl.recover_position(scene.ris, g.departure_angle, g.toa)
    np.testing.assert_allclose(m, [5.0, 3.0], atol=1e-9)


def test_errors_map_to_python_exceptions():
    with pytest.raises(rl.InvalidPathError):
        rl.path_distance(rl.Scene(), rl.Segment.BS_RIS, 5)
    with pytest.raises(rl.InvalidArgument):
        rl.recover_position([0.0, 0.0], 0.0, -1.0)
    with pytest.raises(rl.ConfigError):
        rl.parse_config_text("[arrays]\nbogus = 1\n")


def test_dictionary_is_unitary():
    d = rl.dft_dictionary(8)
    assert d.grid[0] == pytest.approx(-7 / 16)
    np.testing.assert_allclose(d.matrix.conj().T @ d.matrix, np.eye(8), atol=1e-10)
    assert np.linalg.norm(rl.steering_vector(8, 0.3)) == pytest.approx(1.0)


def test_tmsbl_recovers_planted_row():
    rng = np.random.default_rng(0)
    omega = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(64, 8)))
    psi = omega @ rl.dft_dictionary(8).matrix
    h = np.zeros((8, 10), dtype=complex)
    h[5] = np.exp(-2j * np.pi * 0.3 * np.arange(10))
    y = psi @ h
    noise = 1e-2 * np.mean(np.abs(y) ** 2)
    y = y + np.sqrt(noise / 2) * (rng.standard_normal(y.shape) + 1j * rng.standard_normal(y.shape))
    for solve in (rl.tmsbl, rl.gsbl, rl.amp):
        est = solve(y, psi, np.full(64, noise))
        assert np.argmax(np.sum(np.abs(est.channel_matrix) ** 2, axis=1)) == 5


def test_complexity_report():
    rows = {r["algorithm"]: r for r in rl.complexity_report(8, 10, 60)}
    assert rows["TMSBL"]["order_estimate"] == 224512
    assert rows["GSBL"]["order_estimate"] == 728000
    assert "5336000" in rows["GSBL"]["note"]
    assert rl.flop_estimate(rl.Algorithm.AMP, 8, 10, 60) == 4800


def test_sweep_is_deterministic():
    config = rl.parse_config_text("[waveform]\nsnr_db = 0\n[solver]\nsolvers = tmsbl, omp\n")
    a = rl.run_sweep(config, seed=3, n_trials=2)
    b = rl.run_sweep(config, seed=3, n_trials=2)
    assert a.to_csv() == b.to_csv()
    assert a.to_csv().splitlines()[0] == "sweep_variable,sweep_value,solver,metric,value,n_trials,n_failed,seed"
    assert len(a.rows) == 6


def test_localize_once_near_truth():
    est = rl.localize_once(rl.Scene(), snr_db=20.0, seed=4)
    assert np.linalg.norm(est["position"] - np.array([5.0, 3.0])) < 1.0
