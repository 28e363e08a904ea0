import csv
import filecmp
import math
import os
import subprocess

import numpy as np
import pytest

import zkblab

EXE = os.environ.get("ZKBLAB_EXE")


def test_kernel_values():
    v = zkblab.eval_V(0.0, 0.0, 1.0)
    assert abs(v.value - 0.115102) < 1e-6
    # the V kernel is self-similar with exponent -3/4
    assert abs(zkblab.eval_V(0.0, 0.0, 16.0).value - v.value / 8.0) < 1e-10
    u = zkblab.eval_U(0.3, -0.2, 2.0)
    d = zkblab.eval_U_minus_V(0.3, -0.2, 2.0)
    assert abs(u.value - zkblab.eval_V(0.3, -0.2, 2.0).value - d.value) < 1e-8
    assert abs(zkblab.decay_bound(0, 1.0, 1.0) - 0.162779) < 1e-6
    assert zkblab.decay_bound(0, 1.0, 16.0) == pytest.approx(0.162779 / 8.0, rel=1e-5)
    assert zkblab.lower_bound_constant(0, 1.0) == pytest.approx(0.115102, rel=1e-5)


def test_grid_and_solver():
    g = zkblab.Grid(8.0, 8.0, 64, 64)
    assert g.dx == 0.25
    u0 = zkblab.initial_data("gaussian", g, 0.5)
    assert u0.shape == (64, 64)
    assert u0.max() == pytest.approx(0.5)
    lin = zkblab.linear_propagate(g, u0, 0.5)
    assert np.sum(lin**2) < np.sum(u0**2)
    snaps = zkblab.solve(g, u0, dt=0.01, times=[0.25, 0.5])
    assert [t for t, _ in snaps] == [0.25, 0.5]
    # small data: the nonlinear flow stays close to the linear one
    assert np.max(np.abs(snaps[-1][1] - lin)) < 1e-2
    with pytest.raises(zkblab.ConfigError):
        zkblab.Grid(8.0, 8.0, 63, 64)


def test_rate_fit():
    t = [1.0, 2.0, 4.0, 8.0, 16.0]
    fit = zkblab.fit_decay_rate(t, [2.0 * s**-0.75 for s in t])
    assert fit["slope"] == pytest.approx(-0.75, abs=1e-12)
    assert zkblab.theory_slopes(1)["linf"] == -1.25


def test_m_functional():
    g = zkblab.Grid(20.0, 20.0, 256, 256)
    u0 = zkblab.initial_data("gaussian", g)
    assert zkblab.eval_M_functional(g, u0, 0, 0.0) == pytest.approx(math.pi, rel=0.02)


@pytest.mark.skipif(not EXE, reason="ZKBLAB_EXE not set")
def test_cli_kernel_table(tmp_path):
    def table(out):
        subprocess.run([EXE, "kernel-table", "--t", "1", "--mu", "1", "--out", str(out),
                        "--set", "table.x=[-2,2,3]", "--set", "table.y=[0,1,2]"],
                       check=True, capture_output=True)
        return out / "kernel_table.csv"

    a, b = table(tmp_path / "a"), table(tmp_path / "b")
    assert filecmp.cmp(a, b, shallow=False)
    rows = list(csv.DictReader(open(a)))
    assert len(rows) == 6
    for r in rows:
        ref = zkblab.eval_U(float(r["x"]), float(r["y"]), 1.0).value
        assert abs(float(r["value"]) - ref) < 1e-6


@pytest.mark.skipif(not EXE, reason="ZKBLAB_EXE not set")
def test_cli_rejects_odd_grid(tmp_path):
    p = subprocess.run([EXE, "info", "--out", str(tmp_path), "--set", "grid.Nx=511"], capture_output=True, text=True)
    assert p.returncode == 2
    assert "grid.Nx" in p.stderr
