"""Adaptive Gauss-Legendre panel integration."""

import numpy as np
import pytest

import quenchkit as qk
from quenchkit.quadrature import integrate_adaptive


def test_polynomial_is_exact():
    out = integrate_adaptive(lambda x: x**3 - 2 * x, 0.0, 2.0, abs_tol=1e-12)
    assert out[0] == pytest.approx(0.0, abs=1e-13)


def test_vector_valued_integrand():
    def f(x):
        return np.stack([np.sin(x), np.cos(x)])

    out = integrate_adaptive(f, 0.0, np.pi, abs_tol=1e-12)
    assert out[0] == pytest.approx(2.0, abs=1e-12)
    assert out[1] == pytest.approx(0.0, abs=1e-12)


def test_split_point_handles_kink():
    # |x - 0.3| has a derivative kink; with the split the panels stay smooth
    out = integrate_adaptive(
        lambda x: np.abs(x - 0.3), 0.0, 1.0, abs_tol=1e-12, split_points=(0.3,)
    )
    exact = 0.3**2 / 2 + 0.7**2 / 2
    assert out[0] == pytest.approx(exact, abs=1e-12)


def test_needle_requires_refinement():
    out = integrate_adaptive(
        lambda x: np.exp(-((x - 0.5) ** 2) / 1e-6), 0.0, 1.0, abs_tol=1e-12
    )
    assert out[0] == pytest.approx(np.sqrt(np.pi * 1e-6), abs=1e-12)


def test_non_convergence_raises():
    rng_state = {"calls": 0}

    def noisy(x):
        rng_state["calls"] += 1
        # deterministic but panel-incoherent values defeat refinement
        return np.sin(1e9 * x) * 1e3

    with pytest.raises(qk.NumericError):
        integrate_adaptive(noisy, 0.0, 1.0, abs_tol=1e-14, max_levels=8)


def test_empty_interval_rejected():
    with pytest.raises(qk.NumericError):
        integrate_adaptive(lambda x: x, 1.0, 1.0, abs_tol=1e-10)
