"""Transverse-field XY chain backend (periodic chain, J = 1, even N).

After fermionization the chain splits into independent (k, -k) momentum
pairs with single-particle energies

    eps_k(g, gamma) = sqrt((g - cos k)^2 + gamma^2 sin^2 k)

and Bogoliubov angle (cos theta_k, sin theta_k) =
((g - cos k)/eps_k, gamma sin k / eps_k). The per-site entropy shares of a
small quench (dg, dgamma) are momentum integrals (thermodynamic limit) or
midpoint sums over k = (2n+1) pi / N (finite chain):

    Lcl/(N beta^2) = int_0^pi dk/2pi sech^2(beta eps_k)
                         (dgamma sin k sin theta_k + dg cos theta_k)^2
    Lqu/(N beta^2) = int_0^pi dk/2pi [tanh(beta eps_k)/(beta eps_k)]
                         (dg sin theta_k - dgamma sin k cos theta_k)^2

Each (k, -k) pair also gets an explicit 4-dimensional Hamiltonian so the
generic machinery in :mod:`quenchkit.quench` can cross-check every formula
mode by mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GaplessModeError, NumericError, ValidationError
from .operators import HermitianOperator
from .quadrature import integrate_adaptive
from .quench import QuenchSpec, entropy_production_exact, lambda_classical, lambda_quantum
from .special import parallel_map, sech2, tanh_over_x

GAPLESS_EPS = 1e-14
QUAD_ABS_TOL = 1e-10


@dataclass(frozen=True)
class XYParams:
    """Chain parameters: field g, anisotropy gamma, quench (dg, dgamma),
    inverse temperature beta, and chain length n (None = thermodynamic limit)."""

    g: float
    gamma: float
    beta: float = 0.0
    dg: float = 0.0
    dgamma: float = 0.0
    n: int | None = None

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ValidationError(f"beta must be finite and non-negative, got {self.beta}")
        if self.n is not None and (self.n < 2 or self.n % 2 != 0):
            raise ValidationError(f"chain length must be even and >= 2, got {self.n}")


@dataclass(frozen=True)
class ModeAngles:
    """Bogoliubov data of one quasi-momentum."""

    k: float
    eps: float
    cos_theta: float
    sin_theta: float


def _angle_arrays(g: float, gamma: float, k: np.ndarray):
    a = g - np.cos(k)
    b = gamma * np.sin(k)
    eps = np.hypot(a, b)
    if np.min(eps) < GAPLESS_EPS:
        raise GaplessModeError(
            f"gapless mode hit: eps_k < {GAPLESS_EPS} at k ~ {float(k[np.argmin(eps)]):.6f}"
        )
    return eps, a / eps, b / eps


def mode_angles(p: XYParams, k: float) -> ModeAngles:
    """Dispersion and mixing angle at quasi-momentum k in (0, pi)."""
    if not 0.0 < k < np.pi:
        raise ValidationError(f"k must lie in (0, pi), got {k}")
    eps, ct, st = _angle_arrays(p.g, p.gamma, np.array([k]))
    return ModeAngles(k=float(k), eps=float(eps[0]), cos_theta=float(ct[0]), sin_theta=float(st[0]))


def momentum_grid(n: int) -> np.ndarray:
    """Positive quasi-momenta (2m+1) pi / n, m = 0 .. n/2 - 1."""
    if n < 2 or n % 2 != 0:
        raise ValidationError(f"chain length must be even and >= 2, got {n}")
    return (2 * np.arange(n // 2) + 1) * np.pi / n


def _integrand_pair(p: XYParams, thermal: bool):
    """Vectorized (lcl, lqu) integrands of Lambda/(N beta^2), including dk/2pi."""

    def f(k: np.ndarray) -> np.ndarray:
        eps, ct, st = _angle_arrays(p.g, p.gamma, k)
        sk = np.sin(k)
        diag_amp = (p.dgamma * sk * st + p.dg * ct) ** 2
        coh_amp = (p.dg * st - p.dgamma * sk * ct) ** 2
        if thermal:
            x = p.beta * eps
            lcl = sech2(x) * diag_amp
            lqu = tanh_over_x(x) * coh_amp
        else:
            lcl = diag_amp
            lqu = coh_amp
        return np.stack([lcl, lqu]) / (2 * np.pi)

    return f


def _split_points(g: float) -> tuple[float, ...]:
    # eps_k has its soft spot at k* = arccos(g) when |g| < 1; keep panels off it
    return (float(np.arccos(g)),) if abs(g) < 1 else ()


def lambdas_thermodynamic(p: XYParams) -> tuple[float, float]:
    """(Lcl, Lqu) per site, divided by beta^2, in the thermodynamic limit."""
    if p.n is not None:
        raise ValidationError("thermodynamic limit requested but a finite n is set")
    vals = integrate_adaptive(
        _integrand_pair(p, thermal=True),
        0.0,
        float(np.pi),
        abs_tol=QUAD_ABS_TOL,
        split_points=_split_points(p.g),
    )
    return float(vals[0]), float(vals[1])


def lambdas_small_beta(p: XYParams) -> tuple[float, float]:
    """High-temperature limit of :func:`lambdas_thermodynamic` (thermal factors -> 1)."""
    vals = integrate_adaptive(
        _integrand_pair(p, thermal=False),
        0.0,
        float(np.pi),
        abs_tol=QUAD_ABS_TOL,
        split_points=_split_points(p.g),
    )
    return float(vals[0]), float(vals[1])


def lambdas_finite_n(p: XYParams) -> tuple[float, float]:
    """Finite-chain (Lcl, Lqu) per site divided by beta^2: midpoint sums of the
    thermal integrands over the positive momentum grid."""
    if p.n is None:
        raise ValidationError("finite-chain evaluation needs n")
    k = momentum_grid(p.n)
    eps, ct, st = _angle_arrays(p.g, p.gamma, k)
    sk = np.sin(k)
    x = p.beta * eps
    lcl = np.sum(sech2(x) * (p.dgamma * sk * st + p.dg * ct) ** 2) / p.n
    lqu = np.sum(tanh_over_x(x) * (p.dg * st - p.dgamma * sk * ct) ** 2) / p.n
    return float(lcl), float(lqu)


def ising_finite_n(p: XYParams) -> tuple[float, float]:
    """High-temperature finite-chain sums for a pure field quench:

        (Lcl, Lqu)/(N beta^2 dg^2) = (1/N) sum_{k>0} (cos^2 theta_k, sin^2 theta_k),

    midpoint Riemann sums of the corresponding integrals over [0, pi]."""
    if p.n is None:
        raise ValidationError("finite-chain evaluation needs n")
    k = momentum_grid(p.n)
    _, ct, st = _angle_arrays(p.g, p.gamma, k)
    return float(np.sum(ct * ct) / p.n), float(np.sum(st * st) / p.n)


def ising_plateau(g0: float) -> float:
    """Plateau reference curve for the scaled high-temperature quantum share
    of the Ising chain: 1/4 throughout |g0| <= 1, 1/(4|g0|) outside."""
    return 0.25 if abs(g0) <= 1 else 0.25 / abs(g0)


def riemann_error_bound(g0: float, n: int) -> float:
    """Upper bound M pi^3 / (6 n^2) on |integral - midpoint sum| for the
    gamma = 1 high-temperature integrands, with curvature bound

        M = 2/(g0+1)^2 for g0 < 0,   M = 2/(g0-1)^2 for g0 >= 0.

    Diverges at the critical fields; |g0 -+ 1| below 1e-9 is rejected."""
    if min(abs(g0 - 1.0), abs(g0 + 1.0)) < 1e-9:
        raise DomainError(f"curvature bound diverges at the critical fields, got g0 = {g0}")
    m = 2.0 / (g0 + 1.0) ** 2 if g0 < 0 else 2.0 / (g0 - 1.0) ** 2
    return m * np.pi**3 / (6.0 * n * n)


def ising_curvature_scan(g0: float, samples: int = 4001) -> tuple[float, float]:
    """(analytic bound M, scanned max |f''|) for f(k) = sin^2 theta_k at gamma = 1.

    The scan uses central differences on an even/periodic extension of f over
    [0, pi], so the boundary curvature (where the maximum is expected) is
    included. Used to confirm numerically that the analytic M really is the
    maximum for a given g0."""
    if min(abs(g0 - 1.0), abs(g0 + 1.0)) < 1e-6:
        raise DomainError(f"curvature bound diverges at the critical fields, got g0 = {g0}")
    m = 2.0 / (g0 + 1.0) ** 2 if g0 < 0 else 2.0 / (g0 - 1.0) ** 2
    k = np.linspace(0.0, np.pi, samples)
    f = np.sin(k) ** 2 / ((g0 - np.cos(k)) ** 2 + np.sin(k) ** 2)
    h = k[1] - k[0]
    # f is even about both endpoints, so reflect for the boundary stencils
    ext = np.concatenate([[f[1]], f, [f[-2]]])
    second = (ext[2:] - 2 * ext[1:-1] + ext[:-2]) / (h * h)
    return float(m), float(np.max(np.abs(second)))


def pair_mode_hamiltonian(p: XYParams, k: float) -> tuple[HermitianOperator, HermitianOperator]:
    """Explicit (k, -k) fermion-pair Hamiltonian and its quench perturbation.

    Basis ordering {|00>, |11>, |01>, |10>} in pair occupations, so the
    pairing block is the leading 2x2:

        H_pair = [[-2(g - cos k), 2 gamma sin k], [2 gamma sin k, 2(g - cos k)]] (+) 0_2

    Its spectrum is {-2 eps_k, 0, 0, +2 eps_k}; that is asserted before
    returning. The perturbation is the exact parameter derivative
    dg * dH/dg + dgamma * dH/dgamma.
    """
    if not 0.0 < k < np.pi:
        raise ValidationError(f"k must lie in (0, pi), got {k}")
    a = p.g - np.cos(k)
    b = p.gamma * np.sin(k)
    h = np.zeros((4, 4), dtype=complex)
    h[0, 0] = -2.0 * a
    h[1, 1] = 2.0 * a
    h[0, 1] = h[1, 0] = 2.0 * b
    dh = np.zeros((4, 4), dtype=complex)
    dh[0, 0] = -2.0 * p.dg
    dh[1, 1] = 2.0 * p.dg
    dh[0, 1] = dh[1, 0] = 2.0 * p.dgamma * np.sin(k)
    eps = float(np.hypot(a, b))
    expected = np.array([-2.0 * eps, 0.0, 0.0, 2.0 * eps])
    got = np.linalg.eigvalsh(h)
    if np.max(np.abs(np.sort(got) - expected)) > 1e-12 * max(1.0, 2.0 * eps):
        raise NumericError(
            f"pair-mode construction produced spectrum {got} instead of "
            f"(-2eps, 0, 0, 2eps) with eps = {eps}"
        )
    return HermitianOperator(h), HermitianOperator(dh)


def pair_budget_sum(p: XYParams) -> tuple[float, float, float]:
    """Chain (Lcl, Lqu, Sigma) per site divided by beta^2, assembled by running
    the generic quench machinery on every (k, -k) pair Hamiltonian and summing.

    The chain thermal state factorizes over pairs, and variances, integrated
    skew information and relative entropies are all additive over independent
    factors, so this is an exact finite-chain evaluation (not a second-order
    shortcut for Sigma). Mainly used to cross-validate the closed-form sums.
    """
    if p.n is None:
        raise ValidationError("pair-mode assembly needs a finite n")
    if p.beta <= 0:
        raise ValidationError("pair-mode assembly needs beta > 0")
    lcl = lqu = sigma = 0.0
    for k in momentum_grid(p.n):
        h_pair, dh_pair = pair_mode_hamiltonian(p, float(k))
        q = QuenchSpec.direct(h_pair, dh_pair)
        lcl += lambda_classical(q, p.beta)
        lqu += lambda_quantum(q, p.beta)
        sigma += entropy_production_exact(q, p.beta)[0]
    norm = p.n * p.beta * p.beta
    return lcl / norm, lqu / norm, sigma / norm


@dataclass(frozen=True)
class XYSweepRow:
    sweep_var: float
    beta: float
    n_or_inf: int | None
    lcl_scaled: float
    lqu_scaled: float
    sigma_scaled: float
    error_bound: float | None


def xy_sweep(
    kind: str,
    sweep_values,
    fixed_value: float,
    betas,
    n: int | None = None,
    threads: int = 1,
) -> list[XYSweepRow]:
    """Tabulate the per-site shares over a parameter grid, scaled by
    N beta^2 dg^2 (field sweep, dgamma = 0) or N beta^2 dgamma^2
    (anisotropy sweep, dg = 0).

    ``kind`` is "field" (sweep g0 at fixed gamma, quench in g) or
    "anisotropy" (sweep gamma0 at fixed g, quench in gamma). With n = None
    the thermodynamic-limit integrals are used, otherwise finite-chain sums.
    Grid points are independent and may be fanned out over ``threads``.
    """
    if kind not in ("field", "anisotropy"):
        raise ValidationError(f"unknown sweep kind {kind!r}")
    sweep_values = [float(v) for v in sweep_values]
    betas = [float(b) for b in betas]
    if not sweep_values or not betas:
        raise ValidationError("sweep grids must be non-empty")

    def one(task: tuple[float, float]) -> XYSweepRow:
        beta, v = task
        if kind == "field":
            p = XYParams(g=v, gamma=fixed_value, beta=beta, dg=1.0, dgamma=0.0, n=n)
        else:
            p = XYParams(g=fixed_value, gamma=v, beta=beta, dg=0.0, dgamma=1.0, n=n)
        lcl, lqu = lambdas_thermodynamic(p) if n is None else lambdas_finite_n(p)
        return XYSweepRow(
            sweep_var=v,
            beta=beta,
            n_or_inf=n,
            lcl_scaled=lcl,
            lqu_scaled=lqu,
            sigma_scaled=lcl + lqu,
            error_bound=None,
        )

    tasks = [(beta, v) for beta in betas for v in sweep_values]
    return parallel_map(one, tasks, threads)
