"""Scenario-driven batch front end.

Subcommands: ``simulate``, ``verify t1|t2``, ``ctpq-ensemble``, ``sweep``,
``scaling``.  Exit codes are stable: 0 pass, 1 operational error, 2 a
certificate counterexample / bound violation was found.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .errors import LandauerLabError, ScenarioError
from .landauer import (
    entropy_production,
    production_surface,
    scan_bound,
    von_neumann_entropy,
)
from .oracle import evolve_exact
from .perturbation import (
    first_order_heat,
    first_order_qubit,
    i_minus,
    second_order_heat,
    second_order_qubit,
    second_order_strength,
)
from .policy import resolve_policy
from .reporting import RunReport, csv_payload, fmt_number, write_text
from .scenario import ScenarioDoc, parse_scenario
from .states import ReservoirMoments, build_cavity, default_n_max, reservoir_moments
from .theorems import ctpq_ensemble, verify_theorem1, verify_theorem2

LAMBDA_LADDER = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3)

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_COUNTEREXAMPLE = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory for artifacts")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="format of the tabular artifact")
    common.add_argument("--allow-degenerate", action="store_true",
                        help="accept boundary qubit states p in {0, 1/2}")
    common.add_argument("--tolerance-profile", choices=("strict", "default"),
                        default="default")
    common.add_argument("--seed", type=int, default=None,
                        help="override every seed in the scenario document")
    common.add_argument("--svg", action="store_true",
                        help="also emit a production-vs-p SVG for grid scans")

    parser = argparse.ArgumentParser(
        prog="landauer-lab",
        description="Qubit-cavity Landauer-bound simulator and verifier",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", parents=[common],
                           help="run the scenario's engine(s)")
    p_sim.add_argument("scenario")

    p_ver = sub.add_parser("verify", parents=[common],
                           help="check a theorem certificate")
    p_ver.add_argument("theorem", choices=("t1", "t2"))
    p_ver.add_argument("scenario")

    p_ens = sub.add_parser("ctpq-ensemble", parents=[common],
                           help="CTPQ ensemble statistics and certificate")
    p_ens.add_argument("scenario")
    p_ens.add_argument("--samples", type=int, default=None)

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="scan the bound along one parameter")
    p_sweep.add_argument("scenario")
    p_sweep.add_argument("--param", required=True,
                         choices=("mean_n", "lambda", "T", "theta", "T_R"))
    p_sweep.add_argument("--range", required=True, metavar="a:b:n",
                         help="inclusive linear range, e.g. 0.5:1.5:11")

    p_scal = sub.add_parser("scaling", parents=[common],
                            help="lambda ladder vs the exact oracle")
    p_scal.add_argument("scenario")
    return parser


def _load(args) -> tuple[ScenarioDoc, "NumericPolicy"]:
    doc = parse_scenario(args.scenario, allow_degenerate=args.allow_degenerate)
    if args.seed is not None:
        doc = doc.with_seed(args.seed)
    return doc, resolve_policy(args.tolerance_profile)


def _artifact(args, doc: ScenarioDoc, suffix: str) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, f"{doc.name}__{suffix}")


def _emit_report(args, doc: ScenarioDoc, report: RunReport):
    if "json" in doc.outputs or args.format == "json":
        write_text(_artifact(args, doc, "report.json"), report.to_json())


def _production_csv(surface) -> str:
    rows = []
    min_over = surface.production.min(axis=(0, 2))
    at_zero = surface.production[0, :, surface.x_zero_col]
    for i, p in enumerate(surface.p):
        rows.append((float(p), float(at_zero[i]), float(min_over[i])))
    return csv_payload(["p", "production_x0_theta0", "min_production"], rows)


def _production_svg(surface) -> str:
    """Minimal polyline of min production vs p."""
    y = surface.production.min(axis=(0, 2))
    xs = surface.p
    w, h, pad = 640, 360, 40
    y_min, y_max = float(y.min()), float(y.max())
    span = (y_max - y_min) or 1.0
    pts = []
    for xi, yi in zip(xs, y):
        px = pad + (xi - xs[0]) / (xs[-1] - xs[0]) * (w - 2 * pad)
        py = h - pad - (yi - y_min) / span * (h - 2 * pad)
        pts.append(f"{px:.2f},{py:.2f}")
    zero_y = h - pad - (0.0 - y_min) / span * (h - 2 * pad)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">'
        f'<rect width="{w}" height="{h}" fill="white"/>'
        f'<line x1="{pad}" y1="{zero_y:.2f}" x2="{w - pad}" y2="{zero_y:.2f}" '
        f'stroke="#999" stroke-dasharray="4"/>'
        f'<polyline points="{" ".join(pts)}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>'
        f'<text x="{pad}" y="20" font-size="13">min entropy production vs p '
        f'(min {y_min:.3e}, max {y_max:.3e})</text></svg>\n'
    )


def _exact_point(doc: ScenarioDoc, model: str, policy) -> dict:
    cavity = build_cavity(doc.cavity, default_n_max(doc.cavity, policy), policy)
    result = evolve_exact(doc.qubit, cavity, doc.coupling, model=model, policy=policy)
    s_initial = von_neumann_entropy(doc.qubit.matrix, policy)
    s_final = von_neumann_entropy(result.qubit_final, policy)
    delta_s = s_initial - s_final
    production = result.delta_Q_exact - doc.T_R * delta_s
    return {
        "model": model,
        "delta_p_exact": float(result.qubit_final[0, 0].real - doc.qubit.p),
        "delta_Q_exact": result.delta_Q_exact,
        "delta_S_exact": delta_s,
        "entropy_production": production,
        "holds": bool(production >= -1e-10),
        "unitarity_defect": result.unitarity_defect,
        "n_max": cavity.shape[0],
    }


def _perturbative_point(doc: ScenarioDoc, policy) -> dict:
    cavity = build_cavity(doc.cavity, default_n_max(doc.cavity, policy), policy)
    moments = reservoir_moments(cavity)
    corr = first_order_qubit(doc.qubit, moments, doc.coupling) + second_order_qubit(
        doc.qubit, moments, doc.coupling
    )
    heat = first_order_heat(doc.qubit, moments, doc.coupling) + second_order_heat(
        doc.qubit, moments, doc.coupling
    )
    tol = resolve_policy("default").production_floor * second_order_strength(doc.coupling)
    verdict = entropy_production(doc.qubit, corr, heat, doc.T_R,
                                 tolerance=tol, policy=policy)
    return {
        "mean_a": [moments.mean_a.real, moments.mean_a.imag],
        "mean_n": moments.mean_n,
        "delta_p": corr.delta_p,
        "delta_d": [corr.delta_d.real, corr.delta_d.imag],
        "delta_Q": heat,
        "verdict": verdict.to_dict(),
    }


def _scaling_rows(doc: ScenarioDoc, model: str, policy) -> tuple[list[tuple], float]:
    cavity = build_cavity(doc.cavity, default_n_max(doc.cavity, policy), policy)
    moments = reservoir_moments(cavity)
    rows = []
    for lam in LAMBDA_LADDER:
        cfg = replace(doc.coupling, lam=lam)
        corr = first_order_qubit(doc.qubit, moments, cfg) + second_order_qubit(
            doc.qubit, moments, cfg
        )
        result = evolve_exact(doc.qubit, cavity, cfg, model=model, policy=policy)
        dp_exact = float(result.qubit_final[0, 0].real - doc.qubit.p)
        rows.append((lam, corr.delta_p, dp_exact, abs(corr.delta_p - dp_exact)))
    errs = np.array([r[3] for r in rows])
    lams = np.array([r[0] for r in rows])
    mask = errs > 0
    slope = float(np.polyfit(np.log(lams[mask]), np.log(errs[mask]), 1)[0]) \
        if mask.sum() >= 2 else float("nan")
    return rows, slope


def _cmd_simulate(args) -> int:
    doc, policy = _load(args)
    t0 = time.perf_counter()
    report = RunReport(scenario=doc.resolved_dict(), tool_version=__version__,
                       seeds={"document": doc.seed})
    failed = False

    if doc.engine in ("perturbative", "both") and doc.qubit is not None:
        pert = _perturbative_point(doc, policy)
        report.results["perturbative"] = pert
        failed |= not pert["verdict"]["holds"]
    if doc.engine == "perturbative" and doc.qubit is None:
        cavity = build_cavity(doc.cavity, default_n_max(doc.cavity, policy), policy)
        moments = reservoir_moments(cavity)
        verdict = scan_bound(moments, doc.coupling, doc.T_R, doc.grid, policy)
        report.results["perturbative"] = {"verdict": verdict.to_dict()}
        failed |= not verdict.holds
        if "csv" in doc.outputs or args.format == "csv":
            surface = production_surface(moments, doc.coupling, doc.T_R, doc.grid, policy)
            write_text(_artifact(args, doc, "production.csv"), _production_csv(surface))
            if args.svg:
                write_text(_artifact(args, doc, "production.svg"), _production_svg(surface))
    if doc.engine in ("exact-rwa", "exact-full", "both"):
        if doc.qubit is None:
            raise ScenarioError("exact engines require a qubit point, not a grid")
        model = "full" if doc.engine == "exact-full" else "rwa"
        report.results["exact"] = _exact_point(doc, model, policy)
        failed |= not report.results["exact"]["holds"]
    if doc.engine == "both":
        rows, slope = _scaling_rows(doc, "rwa", policy)
        report.results["scaling"] = {
            "ladder": [list(r) for r in rows],
            "fitted_slope": slope,
        }
        if "csv" in doc.outputs or args.format == "csv":
            write_text(
                _artifact(args, doc, "scaling.csv"),
                csv_payload(["lambda", "dp_pert", "dp_exact", "abs_err"], rows),
            )

    report.wall_clock_s = time.perf_counter() - t0
    if doc.qubit is not None and ("csv" in doc.outputs):
        rows = []
        for engine, res in sorted(report.results.items()):
            if engine == "scaling":
                continue
            for key, val in sorted(res.items()):
                if isinstance(val, (int, float)):
                    rows.append((f"{engine}.{key}", val))
        write_text(_artifact(args, doc, "point.csv"),
                   csv_payload(["quantity", "value"], rows))
    _emit_report(args, doc, report)
    if "summary" in doc.outputs:
        for engine, res in sorted(report.results.items()):
            line = {k: v for k, v in res.items() if isinstance(v, (int, float, bool))}
            print(f"[{doc.name}] {engine}: {line}")
    return EXIT_COUNTEREXAMPLE if failed else EXIT_PASS


def _cmd_verify(args) -> int:
    doc, policy = _load(args)
    t0 = time.perf_counter()
    if args.theorem == "t1":
        cert = verify_theorem1([doc.cavity], doc.coupling, doc.grid, policy)
    else:
        cavity = build_cavity(doc.cavity, default_n_max(doc.cavity, policy), policy)
        moments = reservoir_moments(cavity)
        if abs(moments.mean_a) > 1e-12:
            raise ScenarioError(
                "verify t2 requires a reservoir with <a> = 0 "
                "(run verify t1 first); got "
                f"<a> = {moments.mean_a}"
            )
        cert = verify_theorem2([moments.mean_n], doc.T_R, doc.coupling, doc.grid, policy)
    report = RunReport(scenario=doc.resolved_dict(), tool_version=__version__,
                       certificates=[cert.to_dict()], seeds={"document": doc.seed})
    report.wall_clock_s = time.perf_counter() - t0
    _emit_report(args, doc, report)
    if "csv" in doc.outputs or args.format == "csv":
        rows = [(e.scenario, e.measured, e.bound, e.margin) for e in cert.evidence]
        write_text(_artifact(args, doc, f"{args.theorem}_evidence.csv"),
                   csv_payload(["scenario", "measured", "bound", "margin"], rows))
    if "summary" in doc.outputs:
        status = "PASS" if cert.passed else "COUNTEREXAMPLE"
        print(f"[{doc.name}] theorem {args.theorem.upper()}: {status}")
        if cert.counterexample:
            print(f"  counterexample: {cert.counterexample}")
    return EXIT_PASS if cert.passed else EXIT_COUNTEREXAMPLE


def _cmd_ctpq_ensemble(args) -> int:
    doc, policy = _load(args)
    samples = args.samples or doc.samples
    if not samples:
        raise ScenarioError("ctpq-ensemble needs --samples or a samples field")
    base_seed = args.seed if args.seed is not None else (
        doc.seed if doc.seed is not None else doc.cavity.seed
    )
    t0 = time.perf_counter()
    stats, cert = ctpq_ensemble(base_seed, samples, doc.cavity, doc.coupling,
                                doc.T_R, policy)
    report = RunReport(
        scenario=doc.resolved_dict(),
        tool_version=__version__,
        results={"ensemble": stats.to_dict()},
        certificates=[cert.to_dict()],
        seeds={"base_seed": base_seed, "samples": samples},
    )
    report.wall_clock_s = time.perf_counter() - t0
    _emit_report(args, doc, report)
    if "csv" in doc.outputs or args.format == "csv":
        rows = sorted(
            (k, v) for k, v in stats.to_dict().items()
            if isinstance(v, (int, float))
        )
        rows += [
            ("mean_of_mean_a_re", stats.mean_of_mean_a.real),
            ("mean_of_mean_a_im", stats.mean_of_mean_a.imag),
        ]
        write_text(_artifact(args, doc, "ensemble.csv"),
                   csv_payload(["stat", "value"], rows))
    if "summary" in doc.outputs:
        print(f"[{doc.name}] ctpq ensemble M={samples}: "
              f"<n>={fmt_number(stats.mean_of_mean_n)} "
              f"+/- {fmt_number(stats.stderr_n)}, "
              f"|<a>|={fmt_number(abs(stats.mean_of_mean_a))}, "
              f"{'PASS' if cert.passed else 'FAIL'}")
    return EXIT_PASS if cert.passed else EXIT_COUNTEREXAMPLE


def _parse_range(spec: str) -> np.ndarray:
    try:
        a, b, n = spec.split(":")
        values = np.linspace(float(a), float(b), int(n))
    except ValueError as exc:
        raise ScenarioError(f"bad --range {spec!r}, expected a:b:n") from exc
    return values


def _cmd_sweep(args) -> int:
    doc, policy = _load(args)
    values = _parse_range(args.range)
    cavity = build_cavity(doc.cavity, default_n_max(doc.cavity, policy), policy)
    base_moments = reservoir_moments(cavity)
    rows = []
    any_violation = False
    for v in values:
        cfg = doc.coupling
        t_r = doc.T_R
        moments = base_moments
        if args.param == "mean_n":
            moments = ReservoirMoments(0.0 + 0.0j, float(v))
        elif args.param == "lambda":
            cfg = replace(cfg, lam=float(v))
        elif args.param == "T":
            cfg = replace(cfg, T=float(v))
        elif args.param == "theta":
            cfg = replace(cfg, theta=float(v))
        elif args.param == "T_R":
            t_r = float(v)
        verdict = scan_bound(moments, cfg, t_r, doc.grid, policy)
        argmin = verdict.scan_meta["argmin"]
        rows.append((float(v), verdict.entropy_production,
                     argmin["p"], argmin["x"]))
        any_violation |= not verdict.holds
    payload = csv_payload([args.param, "min_production", "witness_p", "witness_x"], rows)
    write_text(_artifact(args, doc, f"sweep_{args.param}.csv"), payload)
    if "summary" in doc.outputs:
        print(f"[{doc.name}] sweep {args.param}: {len(rows)} rows, "
              f"{'violations found' if any_violation else 'bound holds'}")
    return EXIT_COUNTEREXAMPLE if any_violation else EXIT_PASS


def _cmd_scaling(args) -> int:
    doc, policy = _load(args)
    if doc.qubit is None:
        raise ScenarioError("scaling requires a qubit point, not a grid")
    model = "full" if doc.engine == "exact-full" else "rwa"
    rows, slope = _scaling_rows(doc, model, policy)
    write_text(_artifact(args, doc, "scaling.csv"),
               csv_payload(["lambda", "dp_pert", "dp_exact", "abs_err"], rows))
    report = RunReport(
        scenario=doc.resolved_dict(),
        tool_version=__version__,
        results={"scaling": {"ladder": [list(r) for r in rows],
                             "fitted_slope": slope, "model": model}},
        seeds={"document": doc.seed},
    )
    _emit_report(args, doc, report)
    if "summary" in doc.outputs:
        print(f"[{doc.name}] scaling ({model}): fitted slope {fmt_number(slope)}")
    return EXIT_PASS


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the operational code
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_PASS
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "ctpq-ensemble":
            return _cmd_ctpq_ensemble(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "scaling":
            return _cmd_scaling(args)
        parser.error(f"unknown command {args.command!r}")
    except LandauerLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # operational failures (IO, ...)
        print(f"unexpected error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
