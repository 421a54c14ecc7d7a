"""Deterministic CSV / JSON emission.

Numbers are rendered with 17 significant digits so payloads round-trip the
underlying doubles exactly; two runs with the same seeds are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


def fmt_number(x) -> str:
    """17-significant-digit rendering of a float (or passthrough for str)."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.17g}"
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    return str(x)


def csv_payload(header: list[str], rows: list[tuple]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_number(v) for v in row))
    return "\n".join(lines) + "\n"


def write_text(path: str, content: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(content)


def _jsonable(x):
    if isinstance(x, float):
        return float(f"{x:.17g}")
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class RunReport:
    """Everything one scenario run produced, traceable to its inputs."""

    scenario: dict
    tool_version: str
    results: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)
    seeds: dict = field(default_factory=dict)
    wall_clock_s: float | None = None

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {
            "scenario": _jsonable(self.scenario),
            "tool_version": self.tool_version,
            "results": _jsonable(self.results),
            "certificates": _jsonable(self.certificates),
            "seeds": _jsonable(self.seeds),
        }
        if include_timing and self.wall_clock_s is not None:
            d["wall_clock_s"] = self.wall_clock_s
        return d

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True) + "\n"
