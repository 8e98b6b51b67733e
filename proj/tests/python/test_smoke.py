"""Python binding smoke tests: constants, a small form-bound run, resolvent."""

import math

import numpy as np
import pytest

import opcalc


def test_constants():
    assert opcalc.m_d(3) == pytest.approx(1.9750, abs=1e-4)
    assert opcalc.m_d_star(3) == pytest.approx(math.pi / 2, abs=1e-12)
    assert opcalc.kappa_d(3) == pytest.approx(1.5)
    rep = opcalc.intervals(1.0, 3)
    assert rep["r_delta"] == pytest.approx(2.0)
    assert not rep["ic_empty"]


def test_moser_schedule():
    s = opcalc.moser_schedule(3.0, 2.2, 3)
    assert 0 < s["gamma"] < 1
    assert s["r_seq"][0] > 2.0


def test_formbound_small():
    g = opcalc.Grid(3, 16, 8.0)
    rep = opcalc.estimate_delta(g, "strong", "hardy", 0.5, 1, 0.5, 1e-3)
    assert rep["delta_hat"] > 0
    assert rep["iterations"] > 0


def test_resolve_agreement():
    g = opcalc.Grid(3, 16, 8.0)
    x = np.linspace(-8, 8, 16, endpoint=False) + 0.5
    xx, yy, zz = np.meshgrid(x, x, x, indexing="ij")
    f = np.exp(-(xx**2 + yy**2 + zz**2) / 4.0).astype(complex).ravel()
    u1 = opcalc.resolve(g, 1.0 + 0j, "mollified", 0.3, 1, 0.5, f, "direct")
    u2 = opcalc.resolve(g, 1.0 + 0j, "mollified", 0.3, 1, 0.5, f, "hille_lions")
    err = np.linalg.norm(u1 - u2) / np.linalg.norm(f)
    assert err < 1e-5


def test_evolve_contracts():
    g = opcalc.Grid(3, 16, 8.0)
    x = np.linspace(-8, 8, 16, endpoint=False) + 0.5
    xx, yy, zz = np.meshgrid(x, x, x, indexing="ij")
    f = np.exp(-(xx**2 + yy**2 + zz**2) / 4.0).astype(complex).ravel()
    run = opcalc.evolve(g, "zero", 0.0, 1, 0.0, f, 0.5, 8)
    series = run["l2_series"]
    assert all(series[i + 1] <= series[i] + 1e-12 for i in range(len(series) - 1))


def test_hardy_constant():
    mu = opcalc.hardy_constant(0.0, 3)
    assert mu == pytest.approx(0.25, rel=0.02)


def test_bessel_kernel_yukawa():
    rho = 1.3
    val = opcalc.bessel_kernel(1.0, 1.0 + 0j, 3, rho)
    assert val == pytest.approx(math.exp(-rho) / (4 * math.pi * rho), rel=1e-6)
