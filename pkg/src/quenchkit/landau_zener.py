"""Two-level avoided-crossing model with closed-form quench thermodynamics.

The Hamiltonian is (g - delta/2) sigma_z + b sigma_x, a qubit whose gap
2*eps(g) = 2*sqrt(b^2 + (g - delta/2)^2) is minimal at the avoided crossing
g = delta/2. For a field quench dg the second-order entropy shares are

    Lambda_cl = (1/2) beta^2 dg^2 sech^2(beta eps0) cos^2(theta),
    Lambda_qu = (1/2) beta^2 dg^2 [tanh(beta eps0)/(beta eps0)] sin^2(theta),

with mixing angle (cos theta, sin theta) = ((g - delta/2)/eps, b/eps).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .operators import HermitianOperator
from .quench import QuenchSpec, entropy_production_exact
from .special import parallel_map, sech2, tanh_over_x

SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class LZParams:
    """Gap parameter delta, transverse coupling b > 0, field g."""

    delta: float
    b: float
    g: float

    def __post_init__(self):
        if not self.b > 0:
            raise ValidationError(
                f"b must be positive (b = {self.b} makes the mixing angle "
                "discontinuous at the crossing)"
            )


def lz_hamiltonian(p: LZParams) -> HermitianOperator:
    """The 2x2 matrix [[g - delta/2, b], [b, delta/2 - g]]."""
    a = p.g - p.delta / 2
    return HermitianOperator(a * SIGMA_Z + p.b * SIGMA_X)


def lz_angle(p: LZParams) -> tuple[float, float, float]:
    """(eps, cos_theta, sin_theta) of the diagonalizing rotation."""
    a = p.g - p.delta / 2
    eps = float(np.hypot(a, p.b))
    return eps, a / eps, p.b / eps


def lz_budget_analytic(p: LZParams, dg: float, beta: float) -> tuple[float, float]:
    """Closed-form (Lambda_cl, Lambda_qu) for a small field quench dg."""
    if not np.isfinite(beta) or beta < 0:
        raise ValidationError(f"beta must be finite and non-negative, got {beta}")
    eps, cos_t, sin_t = lz_angle(p)
    pref = 0.5 * beta * beta * dg * dg
    lcl = pref * sech2(beta * eps) * cos_t * cos_t
    lqu = pref * tanh_over_x(beta * eps) * sin_t * sin_t
    return lcl, lqu


@dataclass(frozen=True)
class LZSweepRow:
    g0: float
    beta: float
    sigma_scaled: float
    lcl_scaled: float
    lqu_scaled: float


def lz_sweep(
    delta: float, b: float, g0_values, dg: float, betas, threads: int = 1
) -> list[LZSweepRow]:
    """Tabulate (sigma, Lambda_cl, Lambda_qu) over a field grid, each divided
    by (1/2) beta^2 dg^2.

    The Lambda columns use the closed forms (independent of dg once scaled);
    the sigma column is the exact entropy production at the given dg, so its
    gap from lcl + lqu shows the size of the dropped higher-order terms.
    Grid points are independent, so they may be fanned out over ``threads``.
    """
    g0_values = [float(g) for g in g0_values]
    betas = [float(bb) for bb in betas]
    if not g0_values or not betas:
        raise ValidationError("sweep grids must be non-empty")

    def one(task: tuple[float, float]) -> LZSweepRow:
        beta, g0 = task
        p = LZParams(delta=delta, b=b, g=g0)
        eps, cos_t, sin_t = lz_angle(p)
        lcl_scaled = sech2(beta * eps) * cos_t * cos_t
        lqu_scaled = tanh_over_x(beta * eps) * sin_t * sin_t
        scale = 0.5 * beta * beta * dg * dg
        if scale > 0:
            q = QuenchSpec.direct(lz_hamiltonian(p), HermitianOperator(dg * SIGMA_Z))
            sigma_scaled = entropy_production_exact(q, beta)[0] / scale
        else:
            # beta = 0 limit: sigma/scale -> lcl_scaled + lqu_scaled = 1
            sigma_scaled = lcl_scaled + lqu_scaled
        return LZSweepRow(
            g0=g0,
            beta=beta,
            sigma_scaled=sigma_scaled,
            lcl_scaled=lcl_scaled,
            lqu_scaled=lqu_scaled,
        )

    tasks = [(beta, g0) for beta in betas for g0 in g0_values]
    return parallel_map(one, tasks, threads)
