"""Exact joint evolution of qubit + mode: the ground truth the perturbative
engine is checked against.

The rectangular switching window makes the total Hamiltonian time independent,
so the evolution is a single matrix exponential; the reduced qubit state is
reported in the interaction picture (free rotation undone) so its
off-diagonals compare directly with the perturbative corrections.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, StateError, TruncationError
from .linalg import (
    annihilation_op,
    expm_hermitian_generator,
    hermitianize,
    kron,
    number_op,
    partial_trace,
)
from .perturbation import CouplingConfig
from .policy import DEFAULT_POLICY, NumericPolicy
from .states import QubitState

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)   # |e><g|
SIGMA_MINUS = SIGMA_PLUS.conj().T


@dataclass(frozen=True)
class JointEvolutionResult:
    qubit_final: np.ndarray       # 2x2, interaction picture
    field_final: np.ndarray       # n_max x n_max
    delta_Q_exact: float
    unitarity_defect: float


def joint_hamiltonian(
    cfg: CouplingConfig, n_max: int, model: str = "rwa"
) -> np.ndarray:
    """H0 + interaction on the 2*n_max product space.

    model="rwa" keeps the excitation-conserving coupling
    lambda (e^{-i theta} sigma+ a u + h.c.); model="full" adds the
    counter-rotating lambda (e^{-i theta} sigma+ a^dag u* + h.c.).
    """
    if model not in ("rwa", "full"):
        raise DimensionError(f"unknown oracle model {model!r}")
    a = annihilation_op(n_max)
    eye_f = np.eye(n_max, dtype=complex)
    eye_q = np.eye(2, dtype=complex)
    h0 = 0.5 * cfg.Omega * kron(SIGMA_Z, eye_f) + cfg.omega * kron(eye_q, number_op(n_max))
    phase = cmath.exp(-1j * cfg.theta)
    raising = cfg.lam * phase * cfg.u * kron(SIGMA_PLUS, a)
    h_int = raising + raising.conj().T
    if model == "full":
        counter = cfg.lam * phase * np.conj(cfg.u) * kron(SIGMA_PLUS, a.conj().T)
        h_int = h_int + counter + counter.conj().T
    return h0 + h_int


def free_hamiltonian(cfg: CouplingConfig, n_max: int) -> np.ndarray:
    eye_f = np.eye(n_max, dtype=complex)
    eye_q = np.eye(2, dtype=complex)
    return 0.5 * cfg.Omega * kron(SIGMA_Z, eye_f) + cfg.omega * kron(eye_q, number_op(n_max))


def evolve_exact(
    q: QubitState,
    cavity: np.ndarray,
    cfg: CouplingConfig,
    model: str = "rwa",
    policy: NumericPolicy = DEFAULT_POLICY,
) -> JointEvolutionResult:
    """Evolve the product state for duration T and reduce both subsystems."""
    n_max = cavity.shape[0]
    if abs(np.trace(cavity) - 1.0) > 1e-9:
        raise StateError("cavity state is not unit trace")
    headroom = policy.truncation_headroom
    top_mass = float(np.sum(np.diagonal(cavity)[n_max - headroom:]).real)
    if top_mass >= 10.0 * policy.truncation_tail:
        raise TruncationError(
            f"initial occupation {top_mass} of the top {headroom} levels; "
            "increase n_max before evolving"
        )

    h = joint_hamiltonian(cfg, n_max, model)
    u_op = expm_hermitian_generator(h, cfg.T, policy)
    defect = float(np.max(np.abs(u_op.conj().T @ u_op - np.eye(2 * n_max))))

    rho0 = kron(q.matrix, cavity, policy)
    rho_t = u_op @ rho0 @ u_op.conj().T
    # undo the free rotation: rho_I = e^{+i H0 T} rho_T e^{-i H0 T}
    rot = expm_hermitian_generator(free_hamiltonian(cfg, n_max), -cfg.T, policy)
    rho_i = rot @ rho_t @ rot.conj().T

    qubit_final = hermitianize(partial_trace(rho_i, (2, n_max), keep="A"))
    field_final = hermitianize(partial_trace(rho_i, (2, n_max), keep="B"))

    top_final = float(field_final[n_max - 1, n_max - 1].real)
    if top_final > policy.final_top_occupation:
        raise TruncationError(
            f"final top-level occupation {top_final} exceeds "
            f"{policy.final_top_occupation}; truncation leaked"
        )

    delta_q = heat_exact(cavity, field_final, cfg.omega)
    return JointEvolutionResult(
        qubit_final=qubit_final,
        field_final=field_final,
        delta_Q_exact=delta_q,
        unitarity_defect=defect,
    )


def heat_exact(field_before: np.ndarray, field_after: np.ndarray, omega: float) -> float:
    """omega * (Tr[n rho'] - Tr[n rho]), the heat transferred to the field."""
    if field_before.shape != field_after.shape:
        raise DimensionError(
            f"field dimensions differ: {field_before.shape} vs {field_after.shape}"
        )
    num = number_op(field_before.shape[0])
    return float(
        omega * (np.trace(num @ field_after) - np.trace(num @ field_before)).real
    )
