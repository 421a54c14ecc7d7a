"""Thermodynamic bookkeeping: entropies, eigenvalue closed forms, entropy
production and (p, x, theta)-scan verdicts on the bound dQ >= T_R dS.

Sign convention: dS = S(initial) - S(final), the entropy *decrease* of the
qubit, so the bound reads production = dQ - T_R * dS >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericalError
from .linalg import herm_eig
from .perturbation import (
    CouplingConfig,
    QubitCorrection,
    i_minus,
    second_order_strength,
)
from .policy import DEFAULT_POLICY, NumericPolicy
from .states import QubitState, ReservoirMoments


def qubit_eigenvalues(p: float, x: float) -> tuple[float, float]:
    """(p_minus, p_plus) = 1/2 -+ 1/2 sqrt(4p^2 + 4x^2 - 4p + 1)."""
    root = math.sqrt(max(0.0, (1.0 - 2.0 * p) ** 2 + 4.0 * x * x))
    return 0.5 - 0.5 * root, 0.5 + 0.5 * root


def perturbed_eigenvalues(
    p: float,
    x: float,
    delta_p: float,
    delta_d: complex,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> tuple[float, float]:
    """Eigenvalues of the corrected matrix via the closed-form discriminant

    4p^2 + 4x^2 - 4p + 1 - 8x Re(dd) + (8p - 4) dp + 4 dp^2 + 4 |dd|^2,

    which is exact (a sum of two squares) for the convention
    final = initial + [[dp, -dd], [-conj(dd), -dp]].
    """
    disc = (
        (1.0 - 2.0 * p) ** 2
        + 4.0 * x * x
        - 8.0 * x * complex(delta_d).real
        + (8.0 * p - 4.0) * delta_p
        + 4.0 * delta_p * delta_p
        + 4.0 * abs(delta_d) ** 2
    )
    if disc < policy.discriminant_floor:
        raise NumericalError(f"perturbed discriminant {disc} is negative")
    root = math.sqrt(max(0.0, disc))
    return 0.5 - 0.5 * root, 0.5 + 0.5 * root


def entropy_from_eigenvalues(eigenvalues) -> float:
    """-sum l ln l with 0 ln 0 := 0 and eigenvalues clipped to [0, 1]."""
    w = np.clip(np.asarray(eigenvalues, dtype=float), 0.0, 1.0)
    nz = w[w > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def von_neumann_entropy(rho: np.ndarray, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """von Neumann entropy in nats of a PSD unit-trace matrix."""
    w = herm_eig(rho, policy).eigenvalues
    if w[0] < -policy.psd_floor:
        raise NumericalError(f"state has negative eigenvalue {w[0]}")
    return entropy_from_eigenvalues(w)


@dataclass(frozen=True)
class EntropyPair:
    S_initial: float
    S_final: float

    @property
    def delta_S(self) -> float:
        return self.S_initial - self.S_final


@dataclass(frozen=True)
class LandauerVerdict:
    """Outcome of a bound check at one point or over a scan grid.

    For scans the delta_Q / delta_S / entropy_production fields refer to the
    grid point minimizing the production; ``witness`` is set when the bound is
    violated there.
    """

    delta_Q: float
    T_R: float
    delta_S: float
    entropy_production: float
    holds: bool
    witness: tuple[float, float, float] | None = None  # (p, x, theta)
    scan_meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "delta_Q": self.delta_Q,
            "T_R": self.T_R,
            "delta_S": self.delta_S,
            "entropy_production": self.entropy_production,
            "holds": self.holds,
            "witness": list(self.witness) if self.witness else None,
            "scan_meta": self.scan_meta,
        }


def entropy_production(
    q: QubitState,
    correction: QubitCorrection,
    delta_Q: float,
    T_R: float,
    tolerance: float | None = None,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> LandauerVerdict:
    """Single-point verdict from the closed-form entropy pair."""
    if T_R <= 0:
        raise ConfigError(f"T_R={T_R} must be positive")
    s_init = entropy_from_eigenvalues(qubit_eigenvalues(q.p, q.x))
    s_final = entropy_from_eigenvalues(
        perturbed_eigenvalues(q.p, q.x, correction.delta_p, correction.delta_d, policy)
    )
    delta_s = s_init - s_final
    production = delta_Q - T_R * delta_s
    tol = policy.production_floor if tolerance is None else tolerance
    holds = production >= -tol
    return LandauerVerdict(
        delta_Q=delta_Q,
        T_R=T_R,
        delta_S=delta_s,
        entropy_production=production,
        holds=holds,
        witness=None if holds else (q.p, q.x, 0.0),
        scan_meta={"kind": "single-point", "tolerance": tol},
    )


@dataclass(frozen=True)
class ScanGrid:
    """p values, per-p coherence fractions, and monopole angles."""

    p_values: tuple[float, ...]
    x_count: int
    thetas: tuple[float, ...]

    def __post_init__(self):
        if not self.p_values or self.x_count < 1 or not self.thetas:
            raise ConfigError("scan grid must contain at least one point per axis")
        if self.x_count % 2 == 0:
            raise ConfigError("x_count must be odd so the grid contains x = 0")

    def describe(self) -> dict:
        return {
            "p_min": min(self.p_values),
            "p_max": max(self.p_values),
            "p_count": len(self.p_values),
            "x_count": self.x_count,
            "thetas": list(self.thetas),
        }


def default_grid() -> ScanGrid:
    """49 p-points on [0.01, 0.49], 41 coherence points, 3 angles."""
    p_values = tuple(np.linspace(0.01, 0.49, 49).round(12))
    return ScanGrid(p_values=p_values, x_count=41, thetas=(0.0, math.pi / 4, math.pi / 2))


def _entropy_array(p_minus: np.ndarray, p_plus: np.ndarray) -> np.ndarray:
    lo = np.clip(p_minus, 0.0, 1.0)
    hi = np.clip(p_plus, 0.0, 1.0)
    out = np.zeros_like(lo)
    mask = lo > 0.0
    out[mask] -= lo[mask] * np.log(lo[mask])
    mask = hi > 0.0
    out[mask] -= hi[mask] * np.log(hi[mask])
    return out


@dataclass(frozen=True)
class ProductionSurface:
    """Per-grid-point production data; axes are (theta, p, x)."""

    p: np.ndarray           # (P,)
    x: np.ndarray           # (P, X)
    thetas: tuple[float, ...]
    delta_Q: np.ndarray     # (Theta, P, X)
    delta_S: np.ndarray     # (Theta, P, X)
    production: np.ndarray  # (Theta, P, X)
    x_zero_col: int


def production_surface(
    moments: ReservoirMoments,
    cfg: CouplingConfig,
    T_R: float,
    grid: ScanGrid | None = None,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> ProductionSurface:
    """Entropy production over the grid from the perturbative corrections.

    Second-order terms always contribute; first-order terms enter whenever
    <a> != 0 (they dominate at small lambda).
    """
    if T_R <= 0:
        raise ConfigError(f"T_R={T_R} must be positive")
    cfg.require_resonant()
    if grid is None:
        grid = default_grid()

    p = np.asarray(grid.p_values)[:, None]             # (P, 1)
    fractions = np.linspace(-1.0, 1.0, grid.x_count)[None, :]
    x = np.sqrt(p * (1.0 - p)) * fractions             # (P, X)

    s = second_order_strength(cfg)
    i_conj = np.conj(i_minus(cfg))

    dp2 = s * ((1.0 - 2.0 * p) * moments.mean_n - p)   # (P, 1)
    dd2 = s * x * (moments.mean_n + 0.5)               # (P, X)
    dq2 = s * cfg.omega * ((2.0 * p - 1.0) * moments.mean_n + p)

    s_init = _entropy_array(*_eig22(p, x))

    shape = (len(grid.thetas), x.shape[0], x.shape[1])
    all_dq = np.empty(shape)
    all_ds = np.empty(shape)
    all_prod = np.empty(shape)
    for k, theta in enumerate(grid.thetas):
        w = moments.mean_a * np.exp(-1j * theta) * i_conj
        dp1 = 2.0 * cfg.lam * x * w.imag
        dd1 = 1j * cfg.lam * (1.0 - 2.0 * p) * w
        dq1 = -2.0 * cfg.lam * x * cfg.omega * w.imag

        dp_t = dp1 + dp2
        dd_t = dd1 + dd2
        disc = (
            (1.0 - 2.0 * p) ** 2
            + 4.0 * x * x
            - 8.0 * x * dd_t.real
            + (8.0 * p - 4.0) * dp_t
            + 4.0 * dp_t * dp_t
            + 4.0 * np.abs(dd_t) ** 2
        )
        if float(disc.min()) < policy.discriminant_floor:
            raise NumericalError("negative discriminant encountered on the grid")
        root = np.sqrt(np.maximum(disc, 0.0))
        s_final = _entropy_array(0.5 - 0.5 * root, 0.5 + 0.5 * root)
        all_dq[k] = dq1 + dq2
        all_ds[k] = s_init - s_final
        all_prod[k] = all_dq[k] - T_R * all_ds[k]

    return ProductionSurface(
        p=np.asarray(grid.p_values),
        x=x,
        thetas=grid.thetas,
        delta_Q=all_dq,
        delta_S=all_ds,
        production=all_prod,
        x_zero_col=grid.x_count // 2,
    )


def scan_bound(
    moments: ReservoirMoments,
    cfg: CouplingConfig,
    T_R: float,
    grid: ScanGrid | None = None,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> LandauerVerdict:
    """Evaluate the entropy production over the grid at perturbative order 2.

    Records the argmin witness, and for <a> = 0 reservoirs verifies the claim
    that dS is maximized at the x = 0 column for every p.
    """
    if grid is None:
        grid = default_grid()
    surface = production_surface(moments, cfg, T_R, grid, policy)

    s = second_order_strength(cfg)
    tol = policy.production_floor * max(s, 1e-300)
    first_order_active = moments.mean_a != 0.0

    idx = np.unravel_index(int(np.argmin(surface.production)), surface.production.shape)
    min_production = float(surface.production[idx])
    wp = float(surface.p[idx[1]])
    wx = float(surface.x[idx[1], idx[2]])
    wtheta = float(surface.thetas[idx[0]])

    x_claim = "skipped"
    if not first_order_active:
        delta_s = surface.delta_S[0]
        row_max = delta_s.max(axis=1)
        slack = 1e-12 * max(1.0, float(np.max(np.abs(delta_s))))
        ok = bool(np.all(delta_s[:, surface.x_zero_col] >= row_max - slack))
        x_claim = "ok" if ok else "violated"

    holds = min_production >= -tol
    meta = {
        "kind": "grid-scan",
        "grid": grid.describe(),
        "tolerance": tol,
        "order": "first+second" if first_order_active else "second",
        "argmin": {"p": wp, "x": wx, "theta": wtheta},
        "mean_a": [moments.mean_a.real, moments.mean_a.imag],
        "mean_n": moments.mean_n,
        "x_max_claim": x_claim,
    }
    return LandauerVerdict(
        delta_Q=float(surface.delta_Q[idx]),
        T_R=T_R,
        delta_S=float(surface.delta_S[idx]),
        entropy_production=min_production,
        holds=holds,
        witness=None if holds else (wp, wx, wtheta),
        scan_meta=meta,
    )


def _eig22(p: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    root = np.sqrt((1.0 - 2.0 * p) ** 2 + 4.0 * x * x)
    return np.broadcast_arrays(0.5 - 0.5 * root, 0.5 + 0.5 * root)
