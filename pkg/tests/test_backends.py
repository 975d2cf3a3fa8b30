"""Compiled and pure-Python kernels must agree bit for bit.

The extension is built with -ffp-contract=off and mirrors the Python
operation order, so results are expected to be identical, not merely close.
"""

import itertools

import numpy as np
import pytest

from qkdcoex import _kernels_py

compiled = pytest.importorskip(
    "qkdcoex._kernels", reason="compiled kernels not built")

ETAS = [0.0, 1e-6, 1e-3, 0.05223961889991197, 0.1, 0.5, 1.0]
Y0S = [0.0, 2.4e-6, 4.49e-5, 1e-3, 1e-2]
EDS = [0.0, 0.01, 0.033, 0.1]


def test_backend_labels():
    assert _kernels_py.BACKEND == "python"
    assert compiled.BACKEND == "compiled"


@pytest.mark.parametrize("x", [0.0, 1e-12, 0.036, 0.11, 0.25, 0.5, 0.75, 1.0])
def test_h2(x):
    assert compiled.h2(x) == _kernels_py.h2(x)


@pytest.mark.parametrize("loss", [0.0, 0.85, 12.82, 24.336, 50.0, 200.0])
def test_transmittance(loss):
    assert (compiled.db_loss_to_transmittance(loss)
            == _kernels_py.db_loss_to_transmittance(loss))


def test_srs_rate_grid():
    rng = np.random.default_rng(5)
    for _ in range(200):
        p = rng.uniform(0.0, 2.0)
        rho = rng.uniform(100.0, 2e4)
        length = rng.uniform(0.0, 200.0)
        alpha = rng.uniform(0.05, 0.9)
        assert (compiled.srs_rate(p, rho, length, alpha)
                == _kernels_py.srs_rate(p, rho, length, alpha))


def test_gain_qber_grid():
    for eta, y0, ed in itertools.product(ETAS, Y0S, EDS):
        for intensity in (0.0, 0.2, 0.4):
            assert (compiled.gain_qber(intensity, eta, y0, 0.5, ed)
                    == _kernels_py.gain_qber(intensity, eta, y0, 0.5, ed))


def test_bounds_grid():
    for eta, y0 in itertools.product(ETAS, Y0S):
        qmu, _ = _kernels_py.gain_qber(0.4, eta, y0, 0.5, 0.033)
        qnu, enu = _kernels_py.gain_qber(0.2, eta, y0, 0.5, 0.033)
        assert (compiled.y1_lower(qmu, qnu, 0.4, 0.2, y0)
                == _kernels_py.y1_lower(qmu, qnu, 0.4, 0.2, y0))
        y1, _ = _kernels_py.y1_lower(qmu, qnu, 0.4, 0.2, y0)
        if y1 > 0.0:
            assert (compiled.e1_upper(enu, qnu, 0.2, y1, y0, 0.5)
                    == _kernels_py.e1_upper(enu, qnu, 0.2, y1, y0, 0.5))


def test_key_point_grid():
    for eta, y0, ed in itertools.product(ETAS, Y0S, EDS):
        a = compiled.key_point(eta, y0, 0.4, 0.2, 0.5, ed, 1.16, 0.5)
        b = _kernels_py.key_point(eta, y0, 0.4, 0.2, 0.5, ed, 1.16, 0.5)
        assert a == b
