"""Dense complex linear algebra and Hilbert-space composition primitives.

Matrices are plain ``numpy.ndarray`` of dtype complex128.  The Hermitian
eigensolver is a cyclic Jacobi; the compiled extension is used when present
and the pure NumPy twin (``_jacobi_py``) otherwise.  Set
``LANDAUER_LAB_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError, NumericalError, ShapeError
from .policy import DEFAULT_POLICY, NumericPolicy

from . import _jacobi_py

if os.environ.get("LANDAUER_LAB_BACKEND", "").lower() == "python":
    _kernel = _jacobi_py
else:
    try:
        from . import _jacobi as _kernel  # type: ignore[no-redef]
    except ImportError:
        _kernel = _jacobi_py


def backend_name() -> str:
    """'compiled' when the Cython kernel is active, else 'python'."""
    return "python" if _kernel is _jacobi_py else "compiled"


def as_complex_matrix(m) -> np.ndarray:
    """Validate and return a square C-contiguous complex128 copy of ``m``."""
    a = np.array(m, dtype=complex, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise NumericalError("matrix contains non-finite entries")
    return a


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_POLICY.hermiticity_tol) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol * max(1.0, np.linalg.norm(m, 1)))


def hermitianize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2.0


def kron(a, b, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Kronecker product with a guard on the joint dimension."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    joint = a.shape[0] * b.shape[0]
    if joint > policy.max_joint_dim:
        raise DimensionError(
            f"joint dimension {joint} exceeds configured maximum {policy.max_joint_dim}"
        )
    return np.kron(a, b)


def partial_trace(joint, dims: tuple[int, int], keep: str = "A") -> np.ndarray:
    """Trace out one tensor factor of a (d_A * d_B)-dimensional operator.

    ``keep`` selects the surviving subsystem, "A" (first factor) or "B".
    """
    joint = as_complex_matrix(joint)
    d_a, d_b = dims
    if d_a < 1 or d_b < 1 or joint.shape[0] != d_a * d_b:
        raise DimensionError(
            f"joint dimension {joint.shape[0]} incompatible with factors {dims}"
        )
    blocks = joint.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.trace(blocks, axis1=1, axis2=3)
    if keep == "B":
        return np.trace(blocks, axis1=0, axis2=2)
    raise DimensionError(f"keep must be 'A' or 'B', got {keep!r}")


@dataclass(frozen=True)
class HermitianEigenDecomposition:
    """Eigenvalues in ascending order and unitary eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def herm_eig(
    m, policy: NumericPolicy = DEFAULT_POLICY
) -> HermitianEigenDecomposition:
    """Diagonalize a Hermitian matrix with the cyclic Jacobi kernel."""
    a = as_complex_matrix(m)
    scale = max(1.0, float(np.linalg.norm(a, 1)))
    if np.max(np.abs(a - a.conj().T)) > policy.hermiticity_tol * scale:
        raise ShapeError("matrix is not Hermitian within tolerance")
    a = hermitianize(a)
    n = a.shape[0]
    v = np.eye(n, dtype=complex, order="C")
    sweeps, converged = _kernel.jacobi_sweeps(
        a, v, policy.jacobi_tol, policy.jacobi_max_sweeps
    )
    if not converged:
        raise NumericalError(
            f"Jacobi eigensolver failed to converge in {policy.jacobi_max_sweeps} sweeps"
        )
    w = np.diagonal(a).real.copy()
    order = np.argsort(w, kind="stable")
    return HermitianEigenDecomposition(w[order], np.ascontiguousarray(v[:, order]))


def expm_hermitian_generator(
    h, t: float, policy: NumericPolicy = DEFAULT_POLICY
) -> np.ndarray:
    """exp(-i h t) for Hermitian ``h`` (exact via eigendecomposition)."""
    dec = herm_eig(h, policy)
    v = dec.eigenvectors
    return (v * np.exp(-1j * dec.eigenvalues * t)) @ v.conj().T


def annihilation_op(n_max: int) -> np.ndarray:
    """Truncated bosonic annihilation operator, a[n-1, n] = sqrt(n)."""
    if n_max < 2:
        raise ConfigError(f"annihilation operator needs n_max >= 2, got {n_max}")
    return np.diag(np.sqrt(np.arange(1, n_max, dtype=float)), k=1).astype(complex)


def number_op(n_max: int) -> np.ndarray:
    """Truncated number operator diag(0, 1, ..., n_max-1)."""
    if n_max < 2:
        raise ConfigError(f"number operator needs n_max >= 2, got {n_max}")
    return np.diag(np.arange(n_max, dtype=float)).astype(complex)
