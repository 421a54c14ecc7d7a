"""Central numeric policy.

Every tolerance used by the package lives here so tests and the CLI tune a
single record instead of scattering magic numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class NumericPolicy:
    # matrix structure checks
    hermiticity_tol: float = 1e-10
    unitarity_tol: float = 1e-10
    trace_tol: float = 1e-12
    psd_floor: float = 1e-12

    # Fock-space truncation
    truncation_tail: float = 1e-12
    truncation_headroom: int = 3
    final_top_occupation: float = 1e-9
    max_joint_dim: int = 4096

    # eigensolver
    jacobi_tol: float = 1e-14
    jacobi_max_sweeps: int = 60

    # Landauer bookkeeping
    production_floor: float = 1e-12      # scaled by lambda^2 |I|^2 in scans
    discriminant_floor: float = -1e-14
    closed_form_tol: float = 1e-12

    # perturbative assembly: PSD slack scales like (lambda |I|)^3
    perturbation_psd_scale: float = 10.0

    def strict(self) -> "NumericPolicy":
        """Tightened profile for the --tolerance-profile strict flag."""
        return replace(
            self,
            trace_tol=1e-13,
            production_floor=1e-13,
            final_top_occupation=1e-10,
            closed_form_tol=1e-13,
        )


DEFAULT_POLICY = NumericPolicy()


def resolve_policy(profile: str = "default") -> NumericPolicy:
    if profile == "default":
        return DEFAULT_POLICY
    if profile == "strict":
        return DEFAULT_POLICY.strict()
    raise ValueError(f"unknown tolerance profile: {profile!r}")
