"""Shared construction helpers for the test suite."""

from __future__ import annotations

import numpy as np

import quenchkit as qk

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)


def rand_hermitian(rng: np.random.Generator, dim: int, op_norm: float | None = None) -> qk.HermitianOperator:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (a + a.conj().T) / 2
    if op_norm is not None:
        current = np.max(np.abs(np.linalg.eigvalsh(h)))
        h *= op_norm / current
    return qk.HermitianOperator(h)


def rand_hermitian_with_range(rng: np.random.Generator, dim: int, spectral_range: float) -> qk.HermitianOperator:
    """Random Hermitian rescaled so max(eig) - min(eig) equals spectral_range."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (a + a.conj().T) / 2
    w = np.linalg.eigvalsh(h)
    h *= spectral_range / (w[-1] - w[0])
    return qk.HermitianOperator(h)


def rand_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_density(rng: np.random.Generator, dim: int, min_eig: float = 0.02) -> qk.DensityOperator:
    p = rng.uniform(min_eig, 1.0, size=dim)
    p /= p.sum()
    u = rand_unitary(rng, dim)
    rho = (u * p) @ u.conj().T
    return qk.DensityOperator((rho + rho.conj().T) / 2)


def rand_quench(
    rng: np.random.Generator,
    dim: int,
    beta: float,
    beta_dg: float,
    spectral_range: float = 2.0,
) -> qk.QuenchSpec:
    """Random linear quench with H1 of unit operator norm, so beta*|dg| is the
    expansion-strength knob."""
    h0 = rand_hermitian_with_range(rng, dim, spectral_range)
    h1 = rand_hermitian(rng, dim, op_norm=1.0)
    g0 = rng.uniform(-0.5, 0.5)
    dg = beta_dg / beta
    return qk.QuenchSpec.linear(h0, h1, g0=g0, dg=dg)


def fit_loglog_slope(x, y) -> float:
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])
