# Copyright 2026 The hetnet-assoc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import numpy as np
import pytest

import hetnet_assoc as ha


def test_solve_single_link():
    out = ha.solve(np.array([[2.0]]), [1], i_max=20000)
    assert out["r_star"][0] == pytest.approx(2.0, abs=1e-3)
    assert out["alpha"][0, 0] == pytest.approx(1.0, abs=1e-3)
    assert abs(out["theta_max"] - 1.0) <= 1e-3


def test_dual_objective_hand_value():
    d = ha.dual_objective(np.array([0.5]), np.array([0.0]), np.array([[2.0]]), [1])
    assert d == pytest.approx(math.log(4.0) - 0.5, abs=1e-14)


def test_local_alpha_gamma_two():
    alpha, k_star = ha.local_alpha([1.0, 4.0, 16.0], 2, gamma=2.0)
    assert k_star == 2
    assert alpha == pytest.approx([1.0, 2.0 / 3.0, 1.0 / 3.0], abs=1e-15)
    assert not ha.heavy_load_holds([1.0, 4.0, 16.0], 2, gamma=2.0)


def test_game_two_by_two():
    rates = np.array([[2.0, 1.0], [1.0, 2.0]])
    out = ha.run_game(rates, [1, 1], initial=[0, 0], seed=3)
    assert out["converged"]
    assert out["partition"] == [0, 1]
    assert ha.is_nash([0, 0], rates, [1, 1]) == (False, 1, 1)


def test_decompose_and_schedule():
    comps = ha.decompose(np.array([[0.5, 0.5]]), [1, 1])
    assert [w for w, _ in comps] == pytest.approx([0.5, 0.5])
    assert all(s.sum() == 1 for _, s in comps)
    seq = ha.schedule_stream([1.0 / 3.0, 2.0 / 3.0], 300)
    assert seq.count(0) == 100 and seq.count(1) == 200


def test_stats_and_baseline():
    s = ha.stats(np.array([2.0, 8.0]))
    assert s["geo_mean"] == pytest.approx(4.0)
    assert s["arith_mean"] == 5.0
    assert ha.max_peak_rate_assoc(np.array([[1.0, 5.0, 3.0], [2.0, 2.0, 2.0]])) == [1, 0]


def test_realization_is_deterministic():
    a = ha.realization("exp1", seed=4)
    b = ha.realization("exp1", seed=4)
    assert a["topology"] == b["topology"]
    topo = json.loads(a["topology"])
    assert a["rates"].shape == (len(topo["users"]), len(topo["base_stations"]))
    assert np.all(a["rates"] > 0)


def test_invalid_input_raises_value_error():
    with pytest.raises(ValueError):
        ha.solve(np.array([[2.0]]), [0])
    with pytest.raises(ValueError):
        ha.local_alpha([1.0], 0)
