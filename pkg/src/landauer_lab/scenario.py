"""Scenario documents: a small YAML schema driving batch runs.

Example
-------
::

    scenario: thermal-baseline
    coupling: {lambda: 0.01, Omega: 1.0, omega: 1.0, T: 10.0, theta: 0.0}
    cavity:   {kind: thermal, T_R: 1.4426950408889634}
    qubit:    {p: 0.25, x: 0.1}        # or  qubit: {grid: default}
    bound:    {T_R: 1.4426950408889634}
    engine:   both                     # perturbative | exact-rwa | exact-full | both
    outputs:  [summary, csv, json]
    seed:     42

Complex values (``u``, ``alpha``) are written as a number or ``[re, im]``.
Validation collects every field problem before failing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import yaml

from .errors import ScenarioError, StateError
from .landauer import ScanGrid, default_grid
from .perturbation import CouplingConfig
from .states import CavitySpec, QubitState, VALID_CAVITY_KINDS

ENGINES = ("perturbative", "exact-rwa", "exact-full", "both")
OUTPUT_KINDS = ("summary", "csv", "json")
_TOP_KEYS = {"scenario", "coupling", "cavity", "qubit", "bound", "engine",
             "outputs", "seed", "samples"}


@dataclass(frozen=True)
class ScenarioDoc:
    name: str
    coupling: CouplingConfig
    cavity: CavitySpec
    qubit: QubitState | None          # point scenarios
    grid: ScanGrid | None             # grid scenarios
    T_R: float
    engine: str
    outputs: tuple[str, ...]
    seed: int | None
    samples: int | None

    def resolved_dict(self) -> dict:
        """Self-describing echo embedded in reports."""
        d = {
            "scenario": self.name,
            "coupling": {
                "lambda": self.coupling.lam,
                "Omega": self.coupling.Omega,
                "omega": self.coupling.omega,
                "T": self.coupling.T,
                "u": [self.coupling.u.real, self.coupling.u.imag],
                "theta": self.coupling.theta,
            },
            "cavity": self.cavity.to_dict(),
            "bound": {"T_R": self.T_R},
            "engine": self.engine,
            "outputs": list(self.outputs),
        }
        if self.qubit is not None:
            d["qubit"] = {"p": self.qubit.p, "x": self.qubit.x}
        else:
            d["qubit"] = {"grid": self.grid.describe()}
        if self.seed is not None:
            d["seed"] = self.seed
        if self.samples is not None:
            d["samples"] = self.samples
        return d

    def with_seed(self, seed: int) -> "ScenarioDoc":
        cavity = self.cavity
        if cavity.kind == "ctpq":
            cavity = replace(cavity, seed=seed)
        return replace(self, seed=seed, cavity=cavity)


def _as_complex(value, field: str, errors: list[str]) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) for v in value
    ):
        return complex(value[0], value[1])
    errors.append(f"{field}: expected a number or [re, im], got {value!r}")
    return 1.0 + 0.0j


def _get_number(d: dict, key: str, field: str, errors: list[str],
                default=None, required: bool = False):
    if key not in d:
        if required:
            errors.append(f"{field}: required field missing")
        return default
    v = d[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        errors.append(f"{field}: expected a number, got {v!r}")
        return default
    return float(v)


def _parse_cavity(raw, errors: list[str], default_omega: float) -> CavitySpec | None:
    if not isinstance(raw, dict):
        errors.append("cavity: expected a mapping")
        return None
    kind = raw.get("kind")
    if kind not in VALID_CAVITY_KINDS:
        errors.append(
            f"cavity.kind: unknown kind {kind!r}; valid kinds: {', '.join(VALID_CAVITY_KINDS)}"
        )
        return None
    omega = _get_number(raw, "omega", "cavity.omega", errors, default=default_omega)
    try:
        if kind == "thermal":
            t_r = _get_number(raw, "T_R", "cavity.T_R", errors, required=True)
            return CavitySpec.thermal(t_r, omega) if t_r is not None else None
        if kind == "fock":
            n = raw.get("n")
            if not isinstance(n, int) or isinstance(n, bool) or n < 0:
                errors.append(f"cavity.n: expected a non-negative integer, got {n!r}")
                return None
            return CavitySpec.fock(n, omega)
        if kind == "coherent":
            if "alpha" not in raw:
                errors.append("cavity.alpha: required field missing")
                return None
            return CavitySpec.coherent(_as_complex(raw["alpha"], "cavity.alpha", errors), omega)
        if kind == "ctpq":
            beta = _get_number(raw, "beta", "cavity.beta", errors, required=True)
            seed = raw.get("seed")
            levels = raw.get("levels")
            if not isinstance(seed, int) or isinstance(seed, bool):
                errors.append(f"cavity.seed: expected an integer, got {seed!r}")
                return None
            if not isinstance(levels, int) or isinstance(levels, bool) or levels < 2:
                errors.append(f"cavity.levels: expected an integer >= 2, got {levels!r}")
                return None
            if beta is None:
                return None
            return CavitySpec.ctpq(beta, seed, levels, omega)
        # mixture
        comps = raw.get("components")
        if not isinstance(comps, list) or not comps:
            errors.append("cavity.components: expected a non-empty list")
            return None
        parsed = []
        for k, comp in enumerate(comps):
            if not isinstance(comp, dict) or "weight" not in comp or "vector" not in comp:
                errors.append(f"cavity.components[{k}]: expected {{weight, vector}}")
                return None
            vec = [_as_complex(c, f"cavity.components[{k}].vector", errors)
                   for c in comp["vector"]]
            parsed.append((comp["weight"], vec))
        return CavitySpec.mixture(parsed, omega)
    except StateError as exc:
        errors.append(f"cavity: {exc}")
        return None


def parse_scenario_dict(raw: dict, name: str = "scenario",
                        allow_degenerate: bool = False) -> ScenarioDoc:
    """Validate an already-loaded scenario mapping."""
    errors: list[str] = []
    if not isinstance(raw, dict):
        raise ScenarioError("scenario document must be a mapping")
    unknown = sorted(set(raw) - _TOP_KEYS)
    if unknown:
        errors.append(f"unknown top-level keys: {', '.join(unknown)}")

    name = raw.get("scenario", name)
    if not isinstance(name, str) or not name:
        errors.append("scenario: expected a non-empty string name")
        name = "scenario"

    coupling_raw = raw.get("coupling")
    coupling = None
    if not isinstance(coupling_raw, dict):
        errors.append("coupling: required mapping missing")
    else:
        lam = _get_number(coupling_raw, "lambda", "coupling.lambda", errors, required=True)
        big_omega = _get_number(coupling_raw, "Omega", "coupling.Omega", errors, required=True)
        omega = _get_number(coupling_raw, "omega", "coupling.omega", errors, default=big_omega)
        duration = _get_number(coupling_raw, "T", "coupling.T", errors, required=True)
        theta = _get_number(coupling_raw, "theta", "coupling.theta", errors, default=0.0)
        u = _as_complex(coupling_raw.get("u", 1.0), "coupling.u", errors)
        if None not in (lam, big_omega, omega, duration):
            try:
                coupling = CouplingConfig(
                    lam=lam, Omega=big_omega, omega=omega, T=duration, u=u, theta=theta
                )
            except Exception as exc:
                errors.append(f"coupling: {exc}")

    cavity = _parse_cavity(raw.get("cavity"), errors,
                           coupling.omega if coupling else 1.0)

    qubit = None
    grid = None
    qubit_raw = raw.get("qubit", {"grid": "default"})
    if not isinstance(qubit_raw, dict):
        errors.append("qubit: expected a mapping")
    elif "grid" in qubit_raw:
        gspec = qubit_raw["grid"]
        if gspec == "default":
            grid = default_grid()
        elif isinstance(gspec, dict):
            try:
                p_min = float(gspec.get("p_min", 0.01))
                p_max = float(gspec.get("p_max", 0.49))
                p_count = int(gspec.get("p_count", 49))
                import numpy as np

                grid = ScanGrid(
                    p_values=tuple(np.linspace(p_min, p_max, p_count).round(12)),
                    x_count=int(gspec.get("x_count", 41)),
                    thetas=tuple(float(t) for t in gspec.get(
                        "thetas", (0.0, math.pi / 4, math.pi / 2))),
                )
            except Exception as exc:
                errors.append(f"qubit.grid: {exc}")
        else:
            errors.append(f"qubit.grid: expected 'default' or a mapping, got {gspec!r}")
    else:
        p = _get_number(qubit_raw, "p", "qubit.p", errors, required=True)
        x = _get_number(qubit_raw, "x", "qubit.x", errors, required=True)
        if p is not None and x is not None:
            try:
                qubit = QubitState(p, x, allow_degenerate=allow_degenerate)
            except StateError as exc:
                errors.append(f"qubit: {exc}")

    bound_raw = raw.get("bound", {})
    t_r = None
    if isinstance(bound_raw, dict):
        t_r = _get_number(bound_raw, "T_R", "bound.T_R", errors)
    else:
        errors.append("bound: expected a mapping")
    if t_r is None and cavity is not None:
        if cavity.kind == "thermal":
            t_r = cavity.T_R
        elif cavity.kind == "ctpq":
            t_r = 1.0 / cavity.beta
    if t_r is None:
        errors.append("bound.T_R: required (no thermal/ctpq cavity to default from)")
    elif t_r <= 0:
        errors.append(f"bound.T_R: must be positive, got {t_r}")

    engine = raw.get("engine", "perturbative")
    if engine not in ENGINES:
        errors.append(f"engine: unknown engine {engine!r}; valid: {', '.join(ENGINES)}")
    elif engine in ("perturbative", "both") and coupling is not None \
            and not coupling.is_resonant:
        errors.append(
            f"engine: {engine!r} requires resonance omega == Omega "
            f"(got omega={coupling.omega}, Omega={coupling.Omega})"
        )

    outputs_raw = raw.get("outputs", ["summary"])
    outputs: tuple[str, ...] = ()
    if not isinstance(outputs_raw, list) or not all(
        o in OUTPUT_KINDS for o in outputs_raw
    ):
        errors.append(f"outputs: expected a list drawn from {OUTPUT_KINDS}")
    else:
        outputs = tuple(outputs_raw)

    seed = raw.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        errors.append(f"seed: expected an integer, got {seed!r}")
        seed = None
    samples = raw.get("samples")
    if samples is not None and (not isinstance(samples, int) or isinstance(samples, bool)):
        errors.append(f"samples: expected an integer, got {samples!r}")
        samples = None

    if errors:
        raise ScenarioError("invalid scenario document", errors)
    return ScenarioDoc(
        name=name,
        coupling=coupling,
        cavity=cavity,
        qubit=qubit,
        grid=grid,
        T_R=t_r,
        engine=engine,
        outputs=outputs,
        seed=seed,
        samples=samples,
    )


def parse_scenario(path: str, allow_degenerate: bool = False) -> ScenarioDoc:
    """Load and validate a scenario file; parse errors carry line/column."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ScenarioError(f"scenario parse error{where}: {exc.problem}") from exc
    except yaml.YAMLError as exc:
        raise ScenarioError(f"scenario parse error: {exc}") from exc
    if raw is None:
        raise ScenarioError("scenario document is empty")
    import os

    return parse_scenario_dict(
        raw, name=os.path.splitext(os.path.basename(path))[0],
        allow_degenerate=allow_degenerate,
    )
