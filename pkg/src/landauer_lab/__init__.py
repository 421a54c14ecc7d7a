"""Qubit-cavity simulator and verification suite for Landauer's principle.

A single resonant cavity mode acts as the reservoir, a (p, x) qubit as the
system.  The package computes perturbative (first and second order) and exact
joint evolution, evaluates heat and entropy changes, and certifies which
reservoir states keep the bound dQ >= T_R dS: the expectation of the
annihilation operator must vanish and the occupation must sit exactly on the
Bose-Einstein value.  Canonical thermal pure quantum (CTPQ) draws satisfy
both only after ensemble averaging, which the certificates quantify.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DimensionError,
    LandauerLabError,
    NumericalError,
    PerturbationBreakdownError,
    ScenarioError,
    ShapeError,
    StateError,
    TruncationError,
)
from .landauer import (
    EntropyPair,
    LandauerVerdict,
    ScanGrid,
    default_grid,
    entropy_production,
    perturbed_eigenvalues,
    production_surface,
    qubit_eigenvalues,
    scan_bound,
    von_neumann_entropy,
)
from .linalg import (
    HermitianEigenDecomposition,
    annihilation_op,
    backend_name,
    expm_hermitian_generator,
    herm_eig,
    kron,
    number_op,
    partial_trace,
)
from .oracle import JointEvolutionResult, evolve_exact, heat_exact
from .perturbation import (
    CouplingConfig,
    PerturbativeReport,
    QubitCorrection,
    first_order_heat,
    first_order_qubit,
    i_minus,
    perturbation_report,
    perturbative_final_states,
    resonance_integral,
    second_order_heat,
    second_order_qubit,
    second_order_strength,
)
from .policy import DEFAULT_POLICY, NumericPolicy, resolve_policy
from .rng import SplitMix64
from .scenario import ScenarioDoc, parse_scenario, parse_scenario_dict
from .states import (
    CavitySpec,
    QubitState,
    ReservoirMoments,
    build_cavity,
    build_qubit,
    ctpq_amplitudes,
    ctpq_analytic_moments,
    default_n_max,
    n_bar,
    required_levels,
    reservoir_moments,
)
from .theorems import (
    EnsembleStats,
    Evidence,
    TheoremCertificate,
    cavity_label,
    ctpq_ensemble,
    ctpq_failure_frequency,
    ctpq_single_run,
    verify_theorem1,
    verify_theorem2,
)

__all__ = [name for name in dir() if not name.startswith("_")]
