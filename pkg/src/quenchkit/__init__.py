"""quenchkit: entropy production of sudden quantum quenches.

Exact entropy-production budgets for arbitrary finite-dimensional Hermitian
Hamiltonians, the second-order split into population (classical) and
coherence (quantum) shares, closed-form Landau-Zener and transverse-field XY
backends, and a two-point-measurement trajectory simulator with fluctuation
theorem diagnostics. Energies are dimensionless with k_B = 1; entropies are
in nats.
"""

from .errors import (
    ConsistencyError,
    DomainError,
    ExpansionValidityWarning,
    GaplessModeError,
    NumericError,
    QuenchKitError,
    ValidationError,
)
from .landau_zener import LZParams, lz_angle, lz_budget_analytic, lz_hamiltonian, lz_sweep
from .operators import (
    DensityOperator,
    EnergyLevel,
    HermitianOperator,
    SpectralDecomposition,
    dephase,
    integrated_skew_information,
    relative_entropy,
    spectral_decompose,
    split_perturbation,
    thermal_state,
    variance,
)
from .quench import (
    EntropyBudget,
    QuenchSpec,
    alternative_splitting,
    entropy_budget,
    entropy_production_exact,
    high_temperature_limits,
    lambda_classical,
    lambda_quantum,
)
from .tpm import (
    FTReport,
    TrajectoryEnsemble,
    TrajectoryRecord,
    enumerate_paths,
    fluctuation_report,
    perturbative_final_energies,
    postselect_lambda_cl,
    sample_trajectories,
    sigma_from_lcl,
)
from .xy_chain import (
    ModeAngles,
    XYParams,
    ising_curvature_scan,
    ising_finite_n,
    ising_plateau,
    lambdas_finite_n,
    lambdas_small_beta,
    lambdas_thermodynamic,
    mode_angles,
    momentum_grid,
    pair_budget_sum,
    pair_mode_hamiltonian,
    riemann_error_bound,
    xy_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "DensityOperator",
    "DomainError",
    "EnergyLevel",
    "EntropyBudget",
    "ExpansionValidityWarning",
    "FTReport",
    "GaplessModeError",
    "HermitianOperator",
    "LZParams",
    "ModeAngles",
    "NumericError",
    "QuenchKitError",
    "QuenchSpec",
    "SpectralDecomposition",
    "TrajectoryEnsemble",
    "TrajectoryRecord",
    "ValidationError",
    "XYParams",
    "alternative_splitting",
    "dephase",
    "entropy_budget",
    "entropy_production_exact",
    "enumerate_paths",
    "fluctuation_report",
    "high_temperature_limits",
    "integrated_skew_information",
    "ising_curvature_scan",
    "ising_finite_n",
    "ising_plateau",
    "lambda_classical",
    "lambda_quantum",
    "lambdas_finite_n",
    "lambdas_small_beta",
    "lambdas_thermodynamic",
    "lz_angle",
    "lz_budget_analytic",
    "lz_hamiltonian",
    "lz_sweep",
    "mode_angles",
    "momentum_grid",
    "pair_budget_sum",
    "pair_mode_hamiltonian",
    "perturbative_final_energies",
    "postselect_lambda_cl",
    "relative_entropy",
    "riemann_error_bound",
    "sample_trajectories",
    "sigma_from_lcl",
    "spectral_decompose",
    "split_perturbation",
    "thermal_state",
    "variance",
    "xy_sweep",
]
