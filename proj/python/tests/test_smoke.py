# Copyright 2026 The crackchain Authors
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

"""Smoke tests of the Python bindings."""

import math

import pytest

import crackchain as cc


def test_lattice_constant_closed_form():
    v = cc.PairPotential.lennard_jones()
    a, e0 = cc.lattice_constant(v, 2)
    expected = (2 * (1 + 2**-12) / (1 + 2**-6)) ** (1 / 6)
    assert a == pytest.approx(expected, abs=1e-10)
    assert e0 == pytest.approx(v(a) + v(2 * a), abs=1e-14)


def test_nearest_neighbor_transfer_matches_oracle():
    v = cc.PairPotential.lennard_jones()
    e0, e_surf = cc.nearest_neighbor_oracle(v, 10.0, 2.5)
    sol = cc.TransferSolution.build(v, 1, 10.0, 0.0, 2.5)
    assert sol.g_R == pytest.approx(e0, rel=1e-8)
    assert e_surf == -e0


def test_ideal_gas():
    model = cc.DefectGasModel.ideal(0.1)
    assert model.u == pytest.approx(1 / 1.1, abs=1e-14)
    assert model.mean_cluster_size == pytest.approx(11.0, abs=1e-12)
    assert abs(model.rate_J(0.1 / 1.1)) < 1e-12
    assert model.renewal_residual() < 1e-12


def test_exact_sample_shapes():
    v = cc.PairPotential.lennard_jones()
    options = cc.TransferOptions()
    options.node_count = 64
    out = cc.sample_exact(v, 2, 20.0, 0.01, 2.5, 300, replicas=2, seed=3,
                          options=options)
    assert len(out["spacings"]) == 2
    for z, sizes in zip(out["spacings"], out["cluster_sizes"]):
        assert len(z) == 299
        assert sum(sizes) == 300
        got, excess = cc.crack_statistics(z, 2.5)
        assert got == sizes
        assert all(e >= 0 for e in excess)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        cc.effective_activity(5.0, 0.0, 2.5, 0.2)
    with pytest.raises(ValueError):
        cc.PairPotential.tabulated([1.0], [0.0])


def test_cli_round_trip():
    code, out, _ = cc.run_cli(["--version"])
    assert code == 0
    assert cc.__version__ in out
    code, _, err = cc.run_cli(["free-energy", "--set", "bogus=1"])
    assert code == 2
    assert "bogus" in err


def test_potential_is_infinite_in_core():
    v = cc.PairPotential.lennard_jones()
    assert math.isinf(v(0.4))
