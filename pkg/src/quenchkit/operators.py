"""Dense Hermitian operator algebra.

Everything here works on explicit complex matrices and goes through
eigendecompositions (numpy.linalg.eigh); Hermitian inputs make that route
stable, so no series or Pade approximations are used for matrix functions.
All functions are pure and never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericError, ValidationError

HERMITICITY_RTOL = 1e-12
DENSITY_TRACE_ATOL = 1e-12
DENSITY_EIG_FLOOR = -1e-12
FULL_RANK_MIN_EIG = 1e-14
DEGENERACY_RTOL = 1e-9


def _as_complex_matrix(entries) -> np.ndarray:
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A dense Hermitian matrix in dimensionless energy units.

    The constructor validates Hermiticity (deviation at most 1e-12 times the
    largest absolute entry) and stores the exactly symmetrized matrix.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_complex_matrix(self.matrix)
        scale = np.max(np.abs(m)) if m.size else 0.0
        dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if dev > HERMITICITY_RTOL * scale:
            raise ValidationError(
                f"matrix is not Hermitian: max deviation {dev:.3e} "
                f"exceeds {HERMITICITY_RTOL:.0e} * {scale:.3e}"
            )
        object.__setattr__(self, "matrix", (m + m.conj().T) / 2)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "HermitianOperator":
        if dim < 1:
            raise ValidationError("dimension must be >= 1")
        return cls(np.eye(dim, dtype=complex))

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        if not isinstance(other, HermitianOperator):
            return NotImplemented
        self._check_dim(other.dim)
        return HermitianOperator(self.matrix + other.matrix)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        if not isinstance(other, HermitianOperator):
            return NotImplemented
        self._check_dim(other.dim)
        return HermitianOperator(self.matrix - other.matrix)

    def __mul__(self, scalar) -> "HermitianOperator":
        s = float(scalar)
        return HermitianOperator(self.matrix * s)

    __rmul__ = __mul__

    def _check_dim(self, other_dim: int) -> None:
        if self.dim != other_dim:
            raise ValidationError(f"dimension mismatch: {self.dim} vs {other_dim}")

    def operator_norm(self) -> float:
        """Largest absolute eigenvalue."""
        return float(np.max(np.abs(np.linalg.eigvalsh(self.matrix)))) if self.dim else 0.0


@dataclass(frozen=True, eq=False)
class EnergyLevel:
    """One (possibly degenerate) eigenvalue with its orthogonal projector."""

    energy: float
    projector: np.ndarray
    degeneracy: int


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues grouped into degenerate levels, H = sum_i e_i P_i.

    ``basis`` holds the eigenvectors as columns, sorted by ascending
    eigenvalue; ``level_slices`` gives the (start, stop) column range of each
    level inside ``basis``.
    """

    levels: tuple[EnergyLevel, ...]
    basis: np.ndarray
    eigenvalues: np.ndarray = field(repr=False)
    level_slices: tuple[tuple[int, int], ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def level_energies(self) -> np.ndarray:
        return np.array([lv.energy for lv in self.levels])

    def is_nondegenerate(self) -> bool:
        return all(lv.degeneracy == 1 for lv in self.levels)

    def reconstruct(self) -> np.ndarray:
        """Rebuild the operator as sum_i e_i P_i."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for lv in self.levels:
            out += lv.energy * lv.projector
        return out


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A density matrix; ``log_partition`` carries ln Z when thermal."""

    matrix: np.ndarray
    log_partition: float | None = None

    def __post_init__(self):
        m = _as_complex_matrix(self.matrix)
        scale = max(np.max(np.abs(m)), 1.0)
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_RTOL * scale:
            raise ValidationError("density matrix is not Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > DENSITY_TRACE_ATOL:
            raise ValidationError(f"density matrix trace {tr} is not 1")
        if float(np.min(np.linalg.eigvalsh(m))) < DENSITY_EIG_FLOOR:
            raise ValidationError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", (m + m.conj().T) / 2)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def spectral_decompose(
    h: HermitianOperator, degeneracy_tol: float = DEGENERACY_RTOL
) -> SpectralDecomposition:
    """Eigendecompose ``h``, merging near-degenerate eigenvalues into levels.

    Eigenvalues closer than ``degeneracy_tol * (spectral range + 1)`` are
    grouped into a single level whose energy is the group mean and whose
    projector spans the group's eigenvectors.
    """
    if not degeneracy_tol > 0:
        raise ValidationError("degeneracy_tol must be positive")
    try:
        w, v = np.linalg.eigh(h.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    threshold = degeneracy_tol * (float(w[-1] - w[0]) + 1.0)
    groups: list[list[int]] = [[0]]
    for a in range(1, len(w)):
        if w[a] - w[a - 1] < threshold:
            groups[-1].append(a)
        else:
            groups.append([a])
    levels = []
    slices = []
    for idx in groups:
        start, stop = idx[0], idx[-1] + 1
        vg = v[:, start:stop]
        proj = vg @ vg.conj().T
        proj = (proj + proj.conj().T) / 2
        levels.append(
            EnergyLevel(energy=float(np.mean(w[start:stop])), projector=proj, degeneracy=stop - start)
        )
        slices.append((start, stop))
    return SpectralDecomposition(
        levels=tuple(levels), basis=v, eigenvalues=w, level_slices=tuple(slices)
    )


def thermal_state(spec: SpectralDecomposition, beta: float) -> DensityOperator:
    """Gibbs state exp(-beta H)/Z built from a spectral decomposition.

    Weights are computed from energies shifted by the ground level so that
    nothing overflows; ln Z is returned exactly, shift included.
    """
    if not np.isfinite(beta) or beta < 0:
        raise ValidationError(f"beta must be finite and non-negative, got {beta}")
    energies = spec.level_energies
    e_min = float(np.min(energies))
    weights = np.exp(-beta * (energies - e_min))
    z_shifted = float(np.sum(weights * np.array([lv.degeneracy for lv in spec.levels])))
    log_z = float(np.log(z_shifted) - beta * e_min)
    rho = np.zeros((spec.dim, spec.dim), dtype=complex)
    for lv, wgt in zip(spec.levels, weights):
        rho += (wgt / z_shifted) * lv.projector
    return DensityOperator(matrix=rho, log_partition=log_z)


def dephase(rho: DensityOperator, spec: SpectralDecomposition) -> DensityOperator:
    """Remove coherences between distinct energy levels of ``spec``.

    Implemented by rotating to the eigenbasis and keeping only the diagonal
    blocks, which is algebraically sum_i P_i rho P_i. Idempotent and
    trace-preserving; within-level (degenerate) coherences survive.
    """
    if rho.dim != spec.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {spec.dim}")
    v = spec.basis
    m = v.conj().T @ rho.matrix @ v
    out = np.zeros_like(m)
    for start, stop in spec.level_slices:
        out[start:stop, start:stop] = m[start:stop, start:stop]
    back = v @ out @ v.conj().T
    return DensityOperator(matrix=(back + back.conj().T) / 2, log_partition=None)


def _population_entropy_term(p: np.ndarray) -> float:
    """sum p ln p with the 0 ln 0 = 0 convention."""
    pos = p[p > 1e-300]
    return float(np.sum(pos * np.log(pos)))


def relative_entropy(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Quantum relative entropy S(rho||sigma) = tr rho (ln rho - ln sigma).

    ``sigma`` must be full rank (its smallest eigenvalue at least 1e-14);
    thermal states always qualify at the betas this package targets.

    The cross term tr(rho ln sigma) is accumulated as
    sum_j <j|rho|j> ln q_j over sigma's eigenbasis, with the basis weights
    built from the all-positive overlap sums sum_i p_i |<j|i>|^2; that keeps
    every contribution cancellation-free, so tiny occupations multiplying
    large log-populations stay accurate at large beta.
    """
    if rho.dim != sigma.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    q, w_sig = np.linalg.eigh(sigma.matrix)
    if float(np.min(q)) < FULL_RANK_MIN_EIG:
        raise DomainError(
            f"second argument is numerically singular (min eigenvalue {np.min(q):.3e})"
        )
    p, v_rho = np.linalg.eigh(rho.matrix)
    overlaps = np.abs(w_sig.conj().T @ v_rho) ** 2
    weights = overlaps @ np.clip(p, 0.0, None)
    cross = float(np.dot(weights, np.log(q)))
    return _population_entropy_term(p) - cross


def variance(rho: DensityOperator, x: HermitianOperator) -> float:
    """Var_rho[X] = tr(X^2 rho) - tr(X rho)^2."""
    if rho.dim != x.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {x.dim}")
    xr = x.matrix @ rho.matrix
    mean = float(np.real(np.trace(xr)))
    second = float(np.real(np.trace(x.matrix @ xr)))
    return second - mean * mean


def _log_mean(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Logarithmic mean (a-b)/(ln a - ln b) for positive entries.

    Near a = b the quotient is 0/0; below a relative gap of 1e-8 the
    second-order expansion around the arithmetic mean is used instead.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m = (a + b) / 2
    r = a - b
    near = np.abs(r) < 1e-8 * np.maximum(a, b)
    out = np.empty_like(m)
    safe = ~near
    out[safe] = r[safe] / (np.log(a[safe]) - np.log(b[safe]))
    out[near] = m[near] * (1.0 - (r[near] / m[near]) ** 2 / 12.0)
    return out


def integrated_skew_information(rho: DensityOperator, x: HermitianOperator) -> float:
    """Wigner-Yanase-Dyson skew information integrated over the order y in [0,1].

    In the eigenbasis of rho (eigenvalues p_i) the closed form is

        sum_{i<j} |X_ij|^2 [ (p_i + p_j) - 2 L(p_i, p_j) ],

    with L the logarithmic mean. The result sits between 0 and Var_rho[X].
    Requires full-rank rho.
    """
    if rho.dim != x.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {x.dim}")
    p, v = np.linalg.eigh(rho.matrix)
    if float(np.min(p)) < FULL_RANK_MIN_EIG:
        raise DomainError(
            f"density matrix is numerically rank-deficient (min eigenvalue {np.min(p):.3e})"
        )
    xe = v.conj().T @ x.matrix @ v
    pi = p[:, None]
    pj = p[None, :]
    weight = (pi + pj) - 2.0 * _log_mean(np.broadcast_to(pi, xe.shape), np.broadcast_to(pj, xe.shape))
    mags = np.abs(xe) ** 2
    total = np.sum(np.triu(mags * weight, k=1))
    return float(total)


def split_perturbation(
    dh: HermitianOperator, spec0: SpectralDecomposition
) -> tuple[HermitianOperator, HermitianOperator]:
    """Split dH into its level-diagonal and coherent parts w.r.t. ``spec0``.

    Returns (dH_diag, dH_coh) with dH_diag = sum_i P_i dH P_i and
    dH_coh = dH - dH_diag. The coherent part is traceless and has no
    matrix elements inside any level block.
    """
    if dh.dim != spec0.dim:
        raise ValidationError(f"dimension mismatch: {dh.dim} vs {spec0.dim}")
    v = spec0.basis
    m = v.conj().T @ dh.matrix @ v
    diag_blocks = np.zeros_like(m)
    for start, stop in spec0.level_slices:
        diag_blocks[start:stop, start:stop] = m[start:stop, start:stop]
    d_part = v @ diag_blocks @ v.conj().T
    d_part = (d_part + d_part.conj().T) / 2
    dh_d = HermitianOperator(d_part)
    dh_c = HermitianOperator(dh.matrix - d_part)
    return dh_d, dh_c
