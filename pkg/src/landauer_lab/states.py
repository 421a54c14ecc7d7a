"""Initial qubit and cavity states, and the reservoir moments they induce.

The cavity is the single resonant mode of the field; everything a
verification needs from it is the pair of moments <a> and <a^dag a>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import StateError, TruncationError
from .linalg import annihilation_op, number_op
from .policy import DEFAULT_POLICY, NumericPolicy
from .rng import SplitMix64

VALID_CAVITY_KINDS = ("thermal", "fock", "coherent", "ctpq", "mixture")


def n_bar(omega: float, T_R: float) -> float:
    """Bose-Einstein mean occupation 1/(exp(omega/T_R) - 1)."""
    return 1.0 / math.expm1(omega / T_R)


@dataclass(frozen=True)
class QubitState:
    """(p, x) parameterization of the 2x2 matrix [[p, x], [x, 1-p]].

    ``p`` is the excited-level weight, constrained to (0, 1/2); ``x`` is the
    real coherence bounded by sqrt(p(1-p)).  The boundaries p in {0, 1/2} and
    |x| = sqrt(p(1-p)) are accepted only with ``allow_degenerate``.
    """

    p: float
    x: float
    allow_degenerate: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.p) and math.isfinite(self.x)):
            raise StateError("qubit parameters must be finite")
        if self.allow_degenerate:
            if not 0.0 <= self.p <= 0.5:
                raise StateError(f"p={self.p} outside [0, 1/2]")
        elif not 0.0 < self.p < 0.5:
            raise StateError(f"p={self.p} outside the open interval (0, 1/2)")
        bound = math.sqrt(self.p * (1.0 - self.p))
        if abs(self.x) > bound + 1e-15:
            raise StateError(
                f"coherence x={self.x} violates |x| <= sqrt(p(1-p)) = {bound}"
            )

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.p, self.x], [self.x, 1.0 - self.p]], dtype=complex)

    @property
    def coherence_bound(self) -> float:
        return math.sqrt(self.p * (1.0 - self.p))


def build_qubit(p: float, x: float, allow_degenerate: bool = False) -> np.ndarray:
    return QubitState(p, x, allow_degenerate).matrix


@dataclass(frozen=True)
class ReservoirMoments:
    """<a> and <a^dag a> of a reservoir state."""

    mean_a: complex
    mean_n: float

    def __post_init__(self):
        if self.mean_n < -1e-10:
            raise StateError(f"mean_n={self.mean_n} is negative")
        # Cauchy-Schwarz |<a>|^2 <= <a^dag a> holds for every state.
        if abs(self.mean_a) ** 2 > self.mean_n + 1e-9 * max(1.0, self.mean_n):
            raise StateError(
                f"moments violate Cauchy-Schwarz: |{self.mean_a}|^2 > {self.mean_n}"
            )


@dataclass(frozen=True)
class CavitySpec:
    """Declarative recipe for the resonant-mode reservoir state.

    Exactly one of the per-kind parameter sets is populated; use the
    classmethod constructors.  ``omega`` is the mode frequency (hbar = 1,
    k_B = 1 throughout).
    """

    kind: str
    omega: float
    T_R: float | None = None                 # thermal
    n: int | None = None                     # fock
    alpha: complex | None = None             # coherent
    beta: float | None = None                # ctpq
    seed: int | None = None                  # ctpq
    levels: int | None = None                # ctpq
    components: tuple | None = field(default=None)  # mixture: ((weight, vector), ...)

    def __post_init__(self):
        if self.kind not in VALID_CAVITY_KINDS:
            raise StateError(
                f"unknown cavity kind {self.kind!r}; valid kinds: {', '.join(VALID_CAVITY_KINDS)}"
            )
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise StateError(f"omega={self.omega} must be positive")
        if self.kind == "thermal":
            if self.T_R is None or self.T_R <= 0:
                raise StateError("thermal cavity requires T_R > 0")
        elif self.kind == "fock":
            if self.n is None or self.n < 0:
                raise StateError("fock cavity requires occupation n >= 0")
        elif self.kind == "coherent":
            if self.alpha is None:
                raise StateError("coherent cavity requires amplitude alpha")
        elif self.kind == "ctpq":
            if self.beta is None or self.beta <= 0:
                raise StateError("ctpq cavity requires beta > 0")
            if self.seed is None:
                raise StateError("ctpq cavity requires an RNG seed")
            if self.levels is None or self.levels < 2:
                raise StateError("ctpq cavity requires levels >= 2")
        elif self.kind == "mixture":
            if not self.components:
                raise StateError("mixture cavity requires components")
            weights = [w for w, _ in self.components]
            if any(w <= 0 for w in weights):
                raise StateError("mixture weights must be positive")
            if abs(sum(weights) - 1.0) > 1e-9:
                raise StateError(f"mixture weights sum to {sum(weights)}, expected 1")
            if any(np.linalg.norm(np.asarray(v)) == 0 for _, v in self.components):
                raise StateError("mixture component vectors must be non-zero")

    # -- constructors -------------------------------------------------------

    @classmethod
    def thermal(cls, T_R: float, omega: float = 1.0) -> "CavitySpec":
        return cls(kind="thermal", omega=omega, T_R=T_R)

    @classmethod
    def fock(cls, n: int, omega: float = 1.0) -> "CavitySpec":
        return cls(kind="fock", omega=omega, n=n)

    @classmethod
    def coherent(cls, alpha: complex, omega: float = 1.0) -> "CavitySpec":
        return cls(kind="coherent", omega=omega, alpha=complex(alpha))

    @classmethod
    def ctpq(cls, beta: float, seed: int, levels: int, omega: float = 1.0) -> "CavitySpec":
        return cls(kind="ctpq", omega=omega, beta=beta, seed=seed, levels=levels)

    @classmethod
    def mixture(cls, components, omega: float = 1.0) -> "CavitySpec":
        comps = tuple((float(w), tuple(complex(c) for c in v)) for w, v in components)
        return cls(kind="mixture", omega=omega, components=comps)

    @classmethod
    def phase_averaged_coherent(
        cls, alpha: complex, omega: float = 1.0, tail: float = DEFAULT_POLICY.truncation_tail
    ) -> "CavitySpec":
        """Coherent state averaged over its phase: a Poissonian Fock mixture."""
        mu = abs(complex(alpha)) ** 2
        levels = _poisson_levels(mu, tail)
        weights = np.array([math.exp(-mu) * mu**k / math.factorial(k) for k in range(levels)])
        weights /= weights.sum()
        comps = []
        for k, w in enumerate(weights):
            vec = [0.0] * levels
            vec[k] = 1.0
            comps.append((float(w), vec))
        return cls.mixture(comps, omega=omega)

    # -- serialization (scenario documents) ---------------------------------

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "omega": self.omega}
        if self.kind == "thermal":
            d["T_R"] = self.T_R
        elif self.kind == "fock":
            d["n"] = self.n
        elif self.kind == "coherent":
            d["alpha"] = [self.alpha.real, self.alpha.imag]
        elif self.kind == "ctpq":
            d.update(beta=self.beta, seed=self.seed, levels=self.levels)
        elif self.kind == "mixture":
            d["components"] = [
                {"weight": w, "vector": [[c.real, c.imag] for c in v]}
                for w, v in self.components
            ]
        return d


def _poisson_levels(mu: float, tail: float) -> int:
    if mu == 0.0:
        return 1
    term = math.exp(-mu)
    cum = term
    k = 0
    while 1.0 - cum >= tail and k < 10_000:
        k += 1
        term *= mu / k
        cum += term
    return k + 1


def truncation_tail_mass(spec: CavitySpec, n_max: int) -> float:
    """Probability mass the spec carries at levels >= n_max."""
    if spec.kind == "thermal":
        r = math.exp(-spec.omega / spec.T_R)
        return r**n_max
    if spec.kind == "fock":
        return 0.0 if n_max > spec.n else 1.0
    if spec.kind == "coherent":
        mu = abs(spec.alpha) ** 2
        if mu == 0.0:
            return 0.0
        term = math.exp(-mu)
        cum = term
        for k in range(1, n_max):
            term *= mu / k
            cum += term
        return max(0.0, 1.0 - cum)
    if spec.kind == "ctpq":
        # amplitudes live on levels < spec.levels by construction
        return 0.0 if n_max >= spec.levels else 1.0
    if spec.kind == "mixture":
        mass = 0.0
        for w, v in spec.components:
            vec = np.asarray(v, dtype=complex)
            nrm = np.linalg.norm(vec)
            if len(vec) > n_max:
                mass += w * float(np.sum(np.abs(vec[n_max:] / nrm) ** 2))
        return mass
    raise StateError(f"unknown cavity kind {spec.kind!r}")


def required_levels(spec: CavitySpec, policy: NumericPolicy = DEFAULT_POLICY) -> int:
    """Smallest truncation whose discarded tail mass is below policy."""
    if spec.kind == "thermal":
        r = math.exp(-spec.omega / spec.T_R)
        return max(2, math.ceil(math.log(policy.truncation_tail) / math.log(r)))
    if spec.kind == "fock":
        return max(2, spec.n + 1)
    if spec.kind == "coherent":
        return max(2, _poisson_levels(abs(spec.alpha) ** 2, policy.truncation_tail))
    if spec.kind == "ctpq":
        return spec.levels
    if spec.kind == "mixture":
        return max(2, max(len(v) for _, v in spec.components))
    raise StateError(f"unknown cavity kind {spec.kind!r}")


def default_n_max(spec: CavitySpec, policy: NumericPolicy = DEFAULT_POLICY) -> int:
    """Truncation with evolution headroom above the populated levels."""
    return required_levels(spec, policy) + policy.truncation_headroom


def ctpq_amplitudes(seed: int, levels: int) -> np.ndarray:
    """The frozen random z-sequence of a CTPQ draw (see rng module)."""
    return SplitMix64(seed).complex_normal(levels)


def build_cavity(
    spec: CavitySpec, n_max: int | None = None, policy: NumericPolicy = DEFAULT_POLICY
) -> np.ndarray:
    """Density matrix of the reservoir state on the first n_max Fock levels."""
    if n_max is None:
        n_max = default_n_max(spec, policy)
    if n_max < 2:
        raise TruncationError(f"n_max={n_max} too small for a mode")
    if truncation_tail_mass(spec, n_max) >= policy.truncation_tail:
        raise TruncationError(
            f"tail mass above level {n_max - 1} exceeds {policy.truncation_tail} "
            f"for cavity kind {spec.kind!r}"
        )

    if spec.kind == "thermal":
        r = math.exp(-spec.omega / spec.T_R)
        w = r ** np.arange(n_max)
        w /= w.sum()
        return np.diag(w).astype(complex)
    if spec.kind == "fock":
        rho = np.zeros((n_max, n_max), dtype=complex)
        rho[spec.n, spec.n] = 1.0
        return rho
    if spec.kind == "coherent":
        ks = np.arange(n_max)
        log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, n_max)))))
        amp = np.exp(-abs(spec.alpha) ** 2 / 2.0 + ks * np.log(spec.alpha) - log_fact / 2.0) \
            if spec.alpha != 0 else np.eye(n_max, 1, dtype=complex).ravel()
        amp = amp.astype(complex)
        amp /= np.linalg.norm(amp)
        return np.outer(amp, amp.conj())
    if spec.kind == "ctpq":
        z = ctpq_amplitudes(spec.seed, spec.levels)
        amp = np.zeros(n_max, dtype=complex)
        amp[: spec.levels] = z * np.exp(-spec.beta * spec.omega * np.arange(spec.levels) / 2.0)
        nrm = np.linalg.norm(amp)
        if nrm == 0.0:
            raise StateError("ctpq amplitudes vanished")
        amp /= nrm
        return np.outer(amp, amp.conj())
    if spec.kind == "mixture":
        rho = np.zeros((n_max, n_max), dtype=complex)
        for w, v in spec.components:
            vec = np.zeros(n_max, dtype=complex)
            vv = np.asarray(v, dtype=complex)
            vec[: len(vv)] = vv
            vec /= np.linalg.norm(vec)
            rho += w * np.outer(vec, vec.conj())
        return rho
    raise StateError(f"unknown cavity kind {spec.kind!r}")


def reservoir_moments(rho_f: np.ndarray, n_max: int | None = None) -> ReservoirMoments:
    """<a> and <a^dag a> of a density matrix in the Fock basis."""
    dim = rho_f.shape[0]
    if n_max is not None and n_max != dim:
        raise TruncationError(f"matrix dimension {dim} != declared n_max {n_max}")
    a = annihilation_op(dim)
    num = number_op(dim)
    mean_a = complex(np.trace(rho_f @ a))
    mean_n = float(np.trace(rho_f @ num).real)
    return ReservoirMoments(mean_a=mean_a, mean_n=max(0.0, mean_n))


def ctpq_analytic_moments(z: np.ndarray, beta: float, omega: float) -> ReservoirMoments:
    """Closed-form CTPQ moments evaluated directly from the z-sequence.

    With weights w_i = exp(-beta omega i),
        <a>        = sum_i conj(z_i) z_{i+1} sqrt(i+1) exp(-beta omega (2i+1)/2) / sum_i |z_i|^2 w_i
        <a^dag a>  = sum_i |z_i|^2 w_i i / sum_i |z_i|^2 w_i
    """
    z = np.asarray(z, dtype=complex)
    if z.ndim != 1 or len(z) == 0 or not np.any(z):
        raise StateError("ctpq z-sequence must be a non-zero vector")
    i = np.arange(len(z))
    w = np.exp(-beta * omega * i)
    denom = float(np.sum(np.abs(z) ** 2 * w))
    num_n = float(np.sum(np.abs(z) ** 2 * w * i))
    num_a = complex(
        np.sum(np.conj(z[:-1]) * z[1:] * np.sqrt(i[:-1] + 1.0)
               * np.exp(-beta * omega * (2 * i[:-1] + 1) / 2.0))
    )
    return ReservoirMoments(mean_a=num_a / denom, mean_n=num_n / denom)
