# Copyright 2026 The muclab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest

import muclab

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)


def test_haar_unitary_is_unitary():
    u = muclab.haar_unitary(4, seed=3)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-10)


def test_bit_flip_overlap_and_fisher():
    ch = muclab.Channel([I2, X], np.array([0.5, 0.5]))
    k = muclab.pgm_overlap(ch)
    assert np.allclose(k, np.eye(2), atol=1e-12)
    f = muclab.fisher_matrix(np.eye(2), np.array([0.5, 0.5]))
    assert abs(np.trace(f) - 2.0) < 1e-12
    rep = muclab.audit_trace_bound(f, r=2, d=4)
    assert rep["satisfied"]


def test_apply_mixes_state():
    ch = muclab.Channel([I2, X], np.array([0.5, 0.5]))
    rho = np.diag([1.0, 0.0]).astype(complex)
    assert np.allclose(ch.apply(rho), np.eye(2) / 2)


def test_estimator_single_unitary():
    ch = muclab.Channel([X], np.array([1.0]))
    res = muclab.run_pgm_estimator(ch, 10, seed=1)
    assert list(res["theta_hat"]) == [1.0]


def test_jacobian_gram():
    j = muclab.tensor_jacobian(np.array([0.5, 0.5]), 2)
    assert np.allclose(j.T @ j, [[1.5, 0.5], [0.5, 1.5]], atol=1e-15)


def test_van_trees():
    assert abs(muclab.van_trees_lower_bound(4, 2, 1, 0.1) - 200.0) < 1e-9


def test_errors_raise_value_error():
    with pytest.raises(ValueError):
        muclab.Channel([I2], np.array([0.5, 0.6]))
    with pytest.raises(muclab.MuclabError):
        muclab.van_trees_lower_bound(4, 2, 1, 0.0)


def test_run_config_and_validate(tmp_path):
    cfg = {"kind": "bound", "r": 4, "d": 2, "epsilon": 0.1, "output_path": str(tmp_path)}
    assert muclab.validate_config('{"kind": "bound"}')
    summary = muclab.run_config(cfg)
    assert abs(summary["reference_lower_bound"] - 200.0) < 1e-9
    assert (tmp_path / "bound.csv").exists()


def test_mse_curve_points():
    ch = muclab.Channel.haar(2, 3, seed=5)
    pts = muclab.mse_curve(ch, [100, 1000], 20, root_seed=2)
    assert [p["N"] for p in pts] == [100, 1000]
    assert pts[1]["mean"] < pts[0]["mean"]
