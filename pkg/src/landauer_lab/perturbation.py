"""First- and second-order reduced-state corrections and perturbative heat.

Conventions
-----------
The correction to the qubit is always expressed as

    final = initial + [[dp, -dd], [-conj(dd), -dp]]

so ``dp`` is the change of the excited-level weight.  For monopole angle
``theta`` (coupling operator cos(theta) sigma_x + sin(theta) sigma_y) every
first-order quantity is a function of

    w = <a> e^{-i theta} conj(I_minus),

which reproduces the sigma_x case at theta = 0 and the sigma_y case at
theta = pi/2.  Counter-rotating (I_plus) contributions are dropped here; the
exact oracle quantifies them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, PerturbationBreakdownError
from .policy import DEFAULT_POLICY, NumericPolicy
from .states import QubitState, ReservoirMoments, reservoir_moments


@dataclass(frozen=True)
class CouplingConfig:
    """Coupling strength, frequencies, window and monopole angle.

    ``u`` is the constant mode amplitude at the (static) qubit position; the
    switching profile is the rectangular window chi = 1 on [0, T].
    """

    lam: float
    Omega: float
    omega: float
    T: float
    u: complex = 1.0 + 0.0j
    theta: float = 0.0
    chi: str = "constant"

    def __post_init__(self):
        if self.lam < 0:
            raise ConfigError(f"coupling lambda={self.lam} must be >= 0")
        for name in ("Omega", "omega", "T"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name}={getattr(self, name)} must be positive")
        if self.chi != "constant":
            raise ConfigError(f"unsupported switching profile {self.chi!r}")

    @property
    def is_resonant(self) -> bool:
        return self.omega == self.Omega

    def require_resonant(self):
        if not self.is_resonant:
            raise ConfigError(
                f"perturbative engine requires resonance omega == Omega "
                f"(got omega={self.omega}, Omega={self.Omega})"
            )


def resonance_integral(cfg: CouplingConfig, sign: int) -> complex:
    """I_sign = integral_0^T exp(i (omega + sign*Omega) tau) u dtau.

    Closed form with the removable limit u*T at omega + sign*Omega = 0; the
    resonant I_minus is exactly u*T.
    """
    if sign not in (+1, -1):
        raise ConfigError(f"sign must be +1 or -1, got {sign}")
    delta = cfg.omega + sign * cfg.Omega
    if delta == 0.0:
        return complex(cfg.u) * cfg.T
    return complex(cfg.u) * (cmath.exp(1j * delta * cfg.T) - 1.0) / (1j * delta)


def i_minus(cfg: CouplingConfig) -> complex:
    return resonance_integral(cfg, -1)


@dataclass(frozen=True)
class QubitCorrection:
    """Traceless correction [[dp, -dd], [-conj(dd), -dp]] to the qubit."""

    delta_p: float
    delta_d: complex
    order: str  # "first", "second" or "total"

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.delta_p, -self.delta_d],
             [-np.conj(self.delta_d), -self.delta_p]],
            dtype=complex,
        )

    def __add__(self, other: "QubitCorrection") -> "QubitCorrection":
        return QubitCorrection(
            self.delta_p + other.delta_p, self.delta_d + other.delta_d, "total"
        )


ZERO_CORRECTION = QubitCorrection(0.0, 0.0 + 0.0j, "total")


def _rotated_amplitude(moments: ReservoirMoments, cfg: CouplingConfig) -> complex:
    return moments.mean_a * cmath.exp(-1j * cfg.theta) * np.conj(i_minus(cfg))


def first_order_qubit(
    q: QubitState, moments: ReservoirMoments, cfg: CouplingConfig
) -> QubitCorrection:
    """Order-lambda reduced-qubit correction.

    dp = 2 lambda x Im(w) and dd = i lambda (1-2p) w, which puts the
    correction matrix in the sigma_x form at theta = 0 (diagonal
    +-2 lambda x Im(<a> I*), off-diagonal -i lambda (1-2p) <a> I*).
    """
    cfg.require_resonant()
    w = _rotated_amplitude(moments, cfg)
    delta_p = 2.0 * cfg.lam * q.x * w.imag
    delta_d = 1j * cfg.lam * (1.0 - 2.0 * q.p) * w
    return QubitCorrection(delta_p, delta_d, "first")


def first_order_heat(
    q: QubitState, moments: ReservoirMoments, cfg: CouplingConfig
) -> float:
    """Order-lambda heat into the field: -2 lambda x omega Im(w)."""
    cfg.require_resonant()
    w = _rotated_amplitude(moments, cfg)
    return -2.0 * cfg.lam * q.x * cfg.omega * w.imag


def second_order_strength(cfg: CouplingConfig) -> float:
    """lambda^2 |I_minus|^2, the scale of every second-order quantity."""
    return cfg.lam**2 * abs(i_minus(cfg)) ** 2


def second_order_qubit(
    q: QubitState, moments: ReservoirMoments, cfg: CouplingConfig
) -> QubitCorrection:
    """Order-lambda^2 correction; independent of the monopole angle.

    dp = lambda^2 |I|^2 ((1-2p) <n> - p)
    dd = lambda^2 |I|^2 x (<n> + 1/2)
    """
    cfg.require_resonant()
    s = second_order_strength(cfg)
    delta_p = s * ((1.0 - 2.0 * q.p) * moments.mean_n - q.p)
    delta_d = s * q.x * (moments.mean_n + 0.5)
    return QubitCorrection(delta_p, complex(delta_d), "second")


def second_order_heat(
    q: QubitState, moments: ReservoirMoments, cfg: CouplingConfig
) -> float:
    """Order-lambda^2 heat: lambda^2 |I|^2 omega ((2p-1) <n> + p)."""
    cfg.require_resonant()
    s = second_order_strength(cfg)
    return s * cfg.omega * ((2.0 * q.p - 1.0) * moments.mean_n + q.p)


@dataclass(frozen=True)
class PerturbativeReport:
    """Correction plus energy bookkeeping for one configuration."""

    correction: QubitCorrection
    delta_Q: float
    delta_E_qubit: float
    resonance_integral: complex

    def __post_init__(self):
        if self.correction.order == "first":
            if abs(self.delta_E_qubit + self.delta_Q) > 1e-12 * max(
                1.0, abs(self.delta_Q)
            ):
                raise PerturbationBreakdownError(
                    "first-order energy bookkeeping violated: "
                    f"dE={self.delta_E_qubit}, dQ={self.delta_Q}"
                )


def perturbation_report(
    q: QubitState, moments: ReservoirMoments, cfg: CouplingConfig, order: int = 2
) -> PerturbativeReport:
    """Assemble corrections and heats up to the requested order."""
    if order not in (1, 2):
        raise ConfigError(f"report order must be 1 or 2, got {order}")
    corr = first_order_qubit(q, moments, cfg)
    heat = first_order_heat(q, moments, cfg)
    if order == 2:
        corr = corr + second_order_qubit(q, moments, cfg)
        heat += second_order_heat(q, moments, cfg)
    delta_e = cfg.Omega * corr.delta_p
    return PerturbativeReport(
        correction=corr,
        delta_Q=heat,
        delta_E_qubit=delta_e,
        resonance_integral=i_minus(cfg),
    )


def perturbative_final_states(
    q: QubitState,
    cavity: np.ndarray,
    cfg: CouplingConfig,
    order: int = 2,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> tuple[np.ndarray, float]:
    """Assembled perturbative qubit state and total perturbative heat.

    The assembled 2x2 matrix keeps unit trace by construction; eigenvalues
    may undershoot zero by O(lambda^3), which is clipped.  A violation larger
    than the lambda^3 scale raises PerturbationBreakdownError.
    """
    if order not in (0, 1, 2):
        raise ConfigError(f"order must be 0, 1 or 2, got {order}")
    if order == 0 or cfg.lam == 0.0:
        return q.matrix, 0.0
    moments = reservoir_moments(cavity)
    corr = first_order_qubit(q, moments, cfg)
    heat = first_order_heat(q, moments, cfg)
    if order == 2:
        corr = corr + second_order_qubit(q, moments, cfg)
        heat += second_order_heat(q, moments, cfg)
    final = q.matrix + corr.matrix

    half_span = math.sqrt(
        ((1.0 - 2.0 * q.p - 2.0 * corr.delta_p) / 2.0) ** 2
        + abs(q.x - corr.delta_d) ** 2
    )
    lo, hi = 0.5 - half_span, 0.5 + half_span
    # lambda^3-scale slack, capped so a genuinely broken expansion still raises
    slack = (
        policy.perturbation_psd_scale * min(cfg.lam * abs(i_minus(cfg)), 1.0) ** 3
        + policy.psd_floor
    )
    if lo < -slack or hi > 1.0 + slack:
        raise PerturbationBreakdownError(
            f"assembled state eigenvalues ({lo}, {hi}) unphysical beyond "
            f"lambda^3-scale tolerance {slack}; reduce lambda or the duration"
        )
    if lo < 0.0:
        # clip the spectrum, keep the eigenbasis and unit trace
        shrink = 0.5 / half_span
        final = np.eye(2, dtype=complex) * 0.5 + (final - np.eye(2, dtype=complex) * 0.5) * shrink
    return final, heat
