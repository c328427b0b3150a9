"""Operator-core tests: decomposition, Gibbs states, dephasing, entropies.

Derived expectations are checked against independently coded oracles:
scipy's logm for the relative entropy, fractional matrix powers plus
Gauss-Legendre quadrature for the skew information, eigenvalue sampling for
the variance, and explicit projector sums for dephasing.
"""

import numpy as np
import pytest
from scipy.linalg import fractional_matrix_power, logm

import quenchkit as qk
from helpers import SIGMA_X, SIGMA_Z, rand_density, rand_hermitian, rand_unitary


class TestHermitianOperator:
    def test_rejects_non_hermitian(self):
        with pytest.raises(qk.ValidationError):
            qk.HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(qk.ValidationError):
            qk.HermitianOperator(np.zeros((2, 3)))

    def test_algebra_and_dim(self):
        a = qk.HermitianOperator(SIGMA_Z)
        b = qk.HermitianOperator(SIGMA_X)
        assert a.dim == 2
        combo = a + 2.0 * b
        assert np.allclose(combo.matrix, SIGMA_Z + 2 * SIGMA_X)
        assert np.allclose((a - a).matrix, 0)

    def test_dimension_mismatch(self):
        with pytest.raises(qk.ValidationError):
            qk.HermitianOperator(SIGMA_Z) + qk.HermitianOperator.identity(3)


class TestSpectralDecompose:
    def test_identity_single_level(self):
        spec = qk.spectral_decompose(qk.HermitianOperator.identity(3))
        assert len(spec.levels) == 1
        lv = spec.levels[0]
        assert lv.energy == pytest.approx(1.0)
        assert lv.degeneracy == 3
        assert np.allclose(lv.projector, np.eye(3), atol=1e-12)

    def test_sigma_z_levels(self):
        spec = qk.spectral_decompose(qk.HermitianOperator(SIGMA_Z))
        assert [lv.energy for lv in spec.levels] == pytest.approx([-1.0, 1.0])
        # -1 eigenstate is |1>, +1 eigenstate is |0>
        assert np.allclose(spec.levels[0].projector, np.diag([0.0, 1.0]), atol=1e-12)
        assert np.allclose(spec.levels[1].projector, np.diag([1.0, 0.0]), atol=1e-12)

    def test_avoided_crossing_point(self):
        h = qk.lz_hamiltonian(qk.LZParams(delta=1.0, b=0.01, g=0.5))
        spec = qk.spectral_decompose(h)
        assert spec.level_energies == pytest.approx([-0.01, 0.01])

    def test_degenerate_grouping(self):
        spec = qk.spectral_decompose(qk.HermitianOperator(np.diag([1.0, 1.0, 2.0])))
        assert [lv.degeneracy for lv in spec.levels] == [2, 1]
        assert np.trace(spec.levels[0].projector) == pytest.approx(2.0)

    @pytest.mark.parametrize("seed", range(6))
    def test_random_invariants(self, seed):
        rng = np.random.default_rng(seed)
        d = rng.integers(2, 9)
        h = rand_hermitian(rng, d)
        spec = qk.spectral_decompose(h)
        total = sum(lv.projector for lv in spec.levels)
        assert np.max(np.abs(total - np.eye(d))) < 1e-10
        for a, la in enumerate(spec.levels):
            for b, lb in enumerate(spec.levels):
                prod = la.projector @ lb.projector
                target = la.projector if a == b else 0.0
                assert np.max(np.abs(prod - target)) < 1e-10
        rebuilt = spec.reconstruct()
        rel = np.linalg.norm(rebuilt - h.matrix) / np.linalg.norm(h.matrix)
        assert rel < 1e-10
        energies = spec.level_energies
        assert np.all(np.diff(energies) > 0)

    def test_bad_tolerance(self):
        with pytest.raises(qk.ValidationError):
            qk.spectral_decompose(qk.HermitianOperator(SIGMA_Z), degeneracy_tol=0.0)


class TestThermalState:
    def test_infinite_temperature(self):
        rng = np.random.default_rng(3)
        h = rand_hermitian(rng, 4)
        rho = qk.thermal_state(qk.spectral_decompose(h), 0.0)
        assert np.allclose(rho.matrix, np.eye(4) / 4, atol=1e-12)

    def test_ground_state_limit(self):
        spec = qk.spectral_decompose(qk.HermitianOperator(SIGMA_Z))
        rho = qk.thermal_state(spec, 50.0)
        assert np.max(np.abs(rho.matrix - np.diag([0.0, 1.0]))) < 1e-12

    def test_qubit_gibbs(self):
        spec = qk.spectral_decompose(qk.HermitianOperator(SIGMA_Z))
        rho = qk.thermal_state(spec, 1.0)
        z = 2 * np.cosh(1.0)
        assert np.allclose(rho.matrix, np.diag([np.exp(-1.0), np.exp(1.0)]) / z, atol=1e-14)
        assert rho.log_partition == pytest.approx(np.log(z), abs=1e-14)

    def test_log_partition_with_shift(self):
        rng = np.random.default_rng(11)
        h = rand_hermitian(rng, 5)
        beta = 3.7
        rho = qk.thermal_state(qk.spectral_decompose(h), beta)
        w = np.linalg.eigvalsh(h.matrix)
        direct = np.log(np.sum(np.exp(-beta * (w - w.min())))) - beta * w.min()
        assert rho.log_partition == pytest.approx(direct, abs=1e-12)

    @pytest.mark.parametrize("beta", [-1.0, np.inf, np.nan])
    def test_rejects_bad_beta(self, beta):
        spec = qk.spectral_decompose(qk.HermitianOperator(SIGMA_Z))
        with pytest.raises(qk.ValidationError):
            qk.thermal_state(spec, beta)


class TestDephase:
    def test_diagonal_state_unchanged(self):
        spec = qk.spectral_decompose(qk.HermitianOperator(SIGMA_Z))
        rho = qk.DensityOperator(np.diag([0.3, 0.7]))
        out = qk.dephase(rho, spec)
        assert np.allclose(out.matrix, rho.matrix, atol=1e-14)

    def test_plus_state_to_maximally_mixed(self):
        spec = qk.spectral_decompose(qk.HermitianOperator(SIGMA_Z))
        plus = qk.DensityOperator(np.full((2, 2), 0.5, dtype=complex))
        out = qk.dephase(plus, spec)
        assert np.allclose(out.matrix, np.eye(2) / 2, atol=1e-14)

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_projector_sum_oracle(self, seed):
        rng = np.random.default_rng(100 + seed)
        rho = rand_density(rng, 4)
        spec = qk.spectral_decompose(rand_hermitian(rng, 4))
        expected = sum(lv.projector @ rho.matrix @ lv.projector for lv in spec.levels)
        out = qk.dephase(rho, spec)
        assert np.max(np.abs(out.matrix - expected)) < 1e-12

    def test_idempotent_and_trace_preserving(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            d = rng.integers(2, 7)
            rho = rand_density(rng, d)
            spec = qk.spectral_decompose(rand_hermitian(rng, d))
            once = qk.dephase(rho, spec)
            twice = qk.dephase(once, spec)
            assert np.max(np.abs(twice.matrix - once.matrix)) < 1e-12
            assert np.trace(once.matrix).real == pytest.approx(1.0, abs=1e-13)

    def test_dimension_mismatch(self):
        spec = qk.spectral_decompose(qk.HermitianOperator(SIGMA_Z))
        with pytest.raises(qk.ValidationError):
            qk.dephase(rand_density(np.random.default_rng(0), 3), spec)


class TestRelativeEntropy:
    def test_self_is_zero(self):
        rho = rand_density(np.random.default_rng(1), 3)
        assert abs(qk.relative_entropy(rho, rho)) < 1e-12

    def test_maximally_mixed_pair(self):
        mm = qk.DensityOperator(np.eye(2) / 2)
        assert abs(qk.relative_entropy(mm, mm)) < 1e-14

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_logm_oracle(self, seed):
        rng = np.random.default_rng(40 + seed)
        rho = rand_density(rng, 3)
        sigma = rand_density(rng, 3)
        oracle = np.trace(rho.matrix @ (logm(rho.matrix) - logm(sigma.matrix))).real
        assert qk.relative_entropy(rho, sigma) == pytest.approx(oracle, abs=1e-10)

    def test_nonnegative_and_faithful(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            d = rng.integers(2, 6)
            rho = rand_density(rng, d)
            sigma = rand_density(rng, d)
            s = qk.relative_entropy(rho, sigma)
            assert s >= -1e-12
            distinct = np.linalg.norm(rho.matrix - sigma.matrix) >= 1e-8
            assert (s > 1e-10) == distinct

    def test_singular_sigma_rejected(self):
        pure = qk.DensityOperator(np.diag([1.0, 0.0]))
        mixed = qk.DensityOperator(np.eye(2) / 2)
        with pytest.raises(qk.DomainError):
            qk.relative_entropy(mixed, pure)


class TestVariance:
    def test_pure_eigenstate_zero(self):
        x = qk.HermitianOperator(SIGMA_Z)
        rho = qk.DensityOperator(np.diag([1.0, 0.0]))
        assert abs(qk.variance(rho, x)) < 1e-14

    def test_maximally_mixed_sigma_z(self):
        rho = qk.DensityOperator(np.eye(2) / 2)
        assert qk.variance(rho, qk.HermitianOperator(SIGMA_Z)) == pytest.approx(1.0)

    def test_sampling_oracle(self):
        rng = np.random.default_rng(2024)
        rho = rand_density(rng, 5)
        x = rand_hermitian(rng, 5)
        exact = qk.variance(rho, x)
        xvals, v = np.linalg.eigh(x.matrix)
        probs = np.real(np.diag(v.conj().T @ rho.matrix @ v))
        probs = np.clip(probs, 0.0, None)
        probs /= probs.sum()
        n = 1_000_000
        draws = rng.choice(xvals, size=n, p=probs)
        mc = draws.var()
        centered = (draws - draws.mean()) ** 2
        se = np.sqrt(max(centered.var(), 1e-300) / n)
        assert abs(mc - exact) < 4 * se


class TestIntegratedSkewInformation:
    def test_commuting_is_zero(self):
        rho = qk.DensityOperator(np.diag([0.6, 0.3, 0.1]))
        x = qk.HermitianOperator(np.diag([2.0, -1.0, 0.5]))
        assert abs(qk.integrated_skew_information(rho, x)) < 1e-14

    def test_maximally_mixed_is_zero(self):
        rng = np.random.default_rng(8)
        x = rand_hermitian(rng, 4)
        rho = qk.DensityOperator(np.eye(4) / 4)
        assert abs(qk.integrated_skew_information(rho, x)) < 1e-13

    @pytest.mark.parametrize("p", [0.1, 0.33, 0.71, 0.9])
    def test_qubit_closed_form(self, p):
        rho = qk.DensityOperator(np.diag([p, 1 - p]))
        x = qk.HermitianOperator(SIGMA_X)
        expected = 1.0 - 2.0 * (2 * p - 1) / np.log(p / (1 - p))
        assert qk.integrated_skew_information(rho, x) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("seed", range(3))
    def test_quadrature_oracle(self, seed):
        # 64-point Gauss-Legendre in the order y of -1/2 tr([rho^y, X][rho^(1-y), X])
        rng = np.random.default_rng(300 + seed)
        d = 4
        rho = rand_density(rng, d)
        x = rand_hermitian(rng, d)
        nodes, weights = np.polynomial.legendre.leggauss(64)
        ys = 0.5 * (nodes + 1.0)
        total = 0.0
        for y, w in zip(ys, 0.5 * weights):
            ry = fractional_matrix_power(rho.matrix, y)
            r1y = fractional_matrix_power(rho.matrix, 1.0 - y)
            c1 = ry @ x.matrix - x.matrix @ ry
            c2 = r1y @ x.matrix - x.matrix @ r1y
            total += w * (-0.5) * np.trace(c1 @ c2).real
        assert qk.integrated_skew_information(rho, x) == pytest.approx(total, abs=1e-10)

    def test_bounded_by_variance(self):
        rng = np.random.default_rng(77)
        for _ in range(10):
            d = rng.integers(2, 7)
            rho = rand_density(rng, d)
            x = rand_hermitian(rng, d)
            skew = qk.integrated_skew_information(rho, x)
            assert -1e-10 <= skew <= qk.variance(rho, x) + 1e-10

    def test_near_degenerate_populations(self):
        # exercises the logarithmic-mean series branch
        eps = 1e-10
        rho = qk.DensityOperator(np.diag([0.5 + eps, 0.5 - eps]))
        x = qk.HermitianOperator(SIGMA_X)
        assert qk.integrated_skew_information(rho, x) == pytest.approx(0.0, abs=1e-12)

    def test_rank_deficient_rejected(self):
        rho = qk.DensityOperator(np.diag([1.0, 0.0]))
        with pytest.raises(qk.DomainError):
            qk.integrated_skew_information(rho, qk.HermitianOperator(SIGMA_X))


class TestSplitPerturbation:
    def test_commuting_quench_no_coherent_part(self):
        spec = qk.spectral_decompose(qk.HermitianOperator(SIGMA_Z))
        dh_d, dh_c = qk.split_perturbation(qk.HermitianOperator(0.3 * SIGMA_Z), spec)
        assert np.max(np.abs(dh_c.matrix)) < 1e-14
        assert np.allclose(dh_d.matrix, 0.3 * SIGMA_Z)

    def test_fully_off_diagonal(self):
        spec = qk.spectral_decompose(qk.HermitianOperator(SIGMA_Z))
        dh_d, dh_c = qk.split_perturbation(qk.HermitianOperator(SIGMA_X), spec)
        assert np.max(np.abs(dh_d.matrix)) < 1e-14
        assert np.allclose(dh_c.matrix, SIGMA_X)

    @pytest.mark.parametrize("g", [0.0, 0.2, 0.7, 1.2])
    def test_avoided_crossing_angle_form(self, g):
        # dH = dg * sigma_z splits into dg cos(theta) * sigma_z-tilde along the
        # energy axis and -dg sin(theta) * sigma_x-tilde across it
        p = qk.LZParams(delta=1.0, b=0.05, g=g)
        dg = 0.01
        spec = qk.spectral_decompose(qk.lz_hamiltonian(p))
        _, cos_t, sin_t = qk.lz_angle(p)
        half = np.arctan2(sin_t, cos_t) / 2
        psi_plus = np.array([np.cos(half), np.sin(half)])
        psi_minus = np.array([-np.sin(half), np.cos(half)])
        sz_tilde = np.outer(psi_plus, psi_plus) - np.outer(psi_minus, psi_minus)
        sx_tilde = np.outer(psi_minus, psi_plus) + np.outer(psi_plus, psi_minus)
        dh_d, dh_c = qk.split_perturbation(qk.HermitianOperator(dg * SIGMA_Z), spec)
        assert np.max(np.abs(dh_d.matrix - dg * cos_t * sz_tilde)) < 1e-12
        assert np.max(np.abs(dh_c.matrix - (-dg * sin_t * sx_tilde))) < 1e-12

    def test_exact_sum_and_traceless(self):
        rng = np.random.default_rng(13)
        for _ in range(6):
            d = rng.integers(2, 8)
            spec = qk.spectral_decompose(rand_hermitian(rng, d))
            dh = rand_hermitian(rng, d)
            dh_d, dh_c = qk.split_perturbation(dh, spec)
            assert np.max(np.abs(dh_d.matrix + dh_c.matrix - dh.matrix)) < 1e-13
            assert abs(np.trace(dh_c.matrix)) < 1e-12
            for lv in spec.levels:
                block = lv.projector @ dh_c.matrix @ lv.projector
                assert np.max(np.abs(block)) < 1e-11

    def test_dimension_mismatch(self):
        spec = qk.spectral_decompose(qk.HermitianOperator(SIGMA_Z))
        with pytest.raises(qk.ValidationError):
            qk.split_perturbation(qk.HermitianOperator.identity(3), spec)


def test_gibbs_entropy_identity():
    # S(rho_beta || I/d) must equal ln d - S_vN(rho_beta)
    rng = np.random.default_rng(21)
    for _ in range(5):
        d = rng.integers(2, 7)
        spec = qk.spectral_decompose(rand_hermitian(rng, d))
        rho = qk.thermal_state(spec, rng.uniform(0.1, 3.0))
        mm = qk.DensityOperator(np.eye(d) / d)
        p = np.linalg.eigvalsh(rho.matrix)
        p = p[p > 1e-300]
        vn = -np.sum(p * np.log(p))
        assert qk.relative_entropy(rho, mm) == pytest.approx(np.log(d) - vn, abs=1e-10)


def test_density_operator_validation():
    with pytest.raises(qk.ValidationError):
        qk.DensityOperator(np.diag([0.6, 0.6]))
    with pytest.raises(qk.ValidationError):
        qk.DensityOperator(np.diag([1.5, -0.5]))
    u = rand_unitary(np.random.default_rng(0), 3)
    rho = qk.DensityOperator((u * [0.5, 0.3, 0.2]) @ u.conj().T)
    assert rho.dim == 3
