"""Adaptive composite Gauss-Legendre quadrature for smooth-per-panel integrands."""

from __future__ import annotations

import numpy as np

from .errors import NumericError

_NODE_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _NODE_CACHE:
        x, w = np.polynomial.legendre.leggauss(order)
        _NODE_CACHE[order] = (x, w)
    return _NODE_CACHE[order]


def _panel_estimates(f, lo: np.ndarray, hi: np.ndarray, order: int) -> np.ndarray:
    """Gauss-Legendre estimates on a batch of panels, shape (n_panels, n_out)."""
    x, w = _nodes(order)
    half = (hi - lo)[:, None] / 2
    mid = (hi + lo)[:, None] / 2
    pts = mid + half * x[None, :]
    vals = np.asarray(f(pts.ravel()), dtype=float)
    n_out = 1 if vals.ndim == 1 else vals.shape[0]
    vals = vals.reshape(n_out, len(lo), order)
    return np.einsum("opn,n,p->po", vals, w, half[:, 0])


def integrate_adaptive(
    f,
    a: float,
    b: float,
    *,
    abs_tol: float = 1e-10,
    split_points: tuple[float, ...] = (),
    order: int = 32,
    max_levels: int = 40,
) -> np.ndarray:
    """Integrate a vectorized (possibly vector-valued) f over [a, b].

    ``f`` receives a flat array of abscissae and returns either a matching
    flat array or an (n_out, n_points) array; the return value is an array of
    n_out integrals. Panels are bisected until the whole-vs-halves defect of
    every component drops below its share of ``abs_tol``. Known interior
    kinks should be passed as ``split_points`` so panels never straddle them
    (Gauss nodes are open, so the kink abscissa itself is never evaluated).
    """
    edges = sorted({a, b, *[s for s in split_points if a < s < b]})
    lo = np.array(edges[:-1], dtype=float)
    hi = np.array(edges[1:], dtype=float)
    width_total = b - a
    if width_total <= 0:
        raise NumericError(f"empty integration interval [{a}, {b}]")

    coarse = _panel_estimates(f, lo, hi, order)
    total = np.zeros(coarse.shape[1], dtype=float)
    for _ in range(max_levels):
        mid = (lo + hi) / 2
        left = _panel_estimates(f, lo, mid, order)
        right = _panel_estimates(f, mid, hi, order)
        refined = left + right
        defect = np.max(np.abs(refined - coarse), axis=1)
        budget = abs_tol * (hi - lo) / width_total
        done = defect <= budget
        total += np.sum(refined[done], axis=0)
        if np.all(done):
            return total
        keep = ~done
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        coarse = np.concatenate([left[keep], right[keep]])
    raise NumericError(
        f"quadrature did not converge to abs_tol={abs_tol} within {max_levels} bisection levels"
    )
