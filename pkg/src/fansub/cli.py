"""Command line front end.

Exit codes: 0 success with findings, 1 clean run without findings, 2 input
error, 3 numeric failure.
"""

import argparse
import csv
import io
import itertools
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from fansub.eos import DomainError
from fansub.fan import FanSubsolution
from fansub.riemann import RiemannData, classify, solve_riemann
from fansub.subsolution import default_eps1_grid, search
from fansub.thresholds import ThresholdError, estimate_vbar, two_shock_threshold
from fansub.verifier import Tolerances, certify, weak_form_residual

log = logging.getLogger("fansub")

EXIT_OK, EXIT_NONE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

SWEEP_PARAMS = ("gap", "rho_minus", "rho_plus", "gamma", "v_minus_1", "v_plus_1", "v_plus_2")
SWEEP_COLUMNS = [
    "rho_minus",
    "rho_plus",
    "v_minus_1",
    "v_minus_2",
    "v_plus_1",
    "v_plus_2",
    "gamma",
    "gap",
    "pattern",
    "contact",
    "T",
    "feasible",
    "n_found",
    "best_subsolution_margin",
    "best_admissibility_margin",
    "error",
]


class InputError(ValueError):
    pass


@dataclass
class JobConfig:
    data: Optional[RiemannData]
    eps1_grid: Sequence[float] = field(default_factory=lambda: list(default_eps1_grid()))
    tolerances: Tolerances = Tolerances()
    quad_res: int = 256
    n_test: int = 64
    seed: int = 0
    bisect_tol: float = 1e-3
    sweep: List[Tuple[str, Tuple[float, float, int]]] = field(default_factory=list)
    raw: dict = field(default_factory=dict)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if x is None:
        return ""
    return str(x)


def parse_range(text) -> Tuple[float, float, int]:
    """'lo:hi:n' or [lo, hi, n]."""
    parts = text.split(":") if isinstance(text, str) else list(text)
    if len(parts) != 3:
        raise InputError(f"range must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (TypeError, ValueError):
        raise InputError(f"bad range {text!r}") from None
    if n < 0:
        raise InputError(f"range count must be >= 0, got {n}")
    return lo, hi, n


def parse_eps1_grid(value) -> List[float]:
    if isinstance(value, (list, tuple)) and len(value) != 3:
        grid = [float(x) for x in value]
    else:
        lo, hi, n = parse_range(value)
        if not (0 < lo <= hi) or n < 1:
            raise InputError("eps1 grid needs 0 < lo <= hi and n >= 1")
        grid = list(np.geomspace(lo, hi, n))
    if not grid or any(not e > 0 for e in grid):
        raise InputError("eps1 grid must be non-empty and positive")
    return grid


def _vec(text) -> Tuple[float, float]:
    parts = text.split(",") if isinstance(text, str) else list(text)
    if len(parts) != 2:
        raise InputError(f"expected two components, got {text!r}")
    return float(parts[0]), float(parts[1])


def build_config(args, needs_data=True) -> JobConfig:
    raw = {}
    if args.input:
        try:
            with open(args.input) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON in {args.input}: {exc}") from None
        if not isinstance(raw, dict):
            raise InputError("input must be a JSON object")

    src = dict(raw.get("data", raw))
    for key in ("rho_minus", "rho_plus", "gamma"):
        if getattr(args, key) is not None:
            src[key] = getattr(args, key)
    for key in ("v_minus", "v_plus"):
        if getattr(args, key) is not None:
            src[key] = _vec(getattr(args, key))

    data = None
    if needs_data:
        try:
            data = RiemannData.from_dict(src)
        except KeyError as exc:
            raise InputError(f"missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            raise InputError(f"invalid Riemann data: {exc}") from None

    opts = dict(raw.get("options", {}))
    cfg = JobConfig(data=data, raw=raw)
    try:
        if args.eps1_grid is not None or "eps1_grid" in opts:
            cfg.eps1_grid = parse_eps1_grid(args.eps1_grid or opts["eps1_grid"])
        tol_eq = args.tol_eq if args.tol_eq is not None else opts.get("tol_eq", 1e-9)
        tol_strict = args.tol_strict if args.tol_strict is not None else opts.get("tol_strict", 1e-10)
        cfg.tolerances = Tolerances(float(tol_eq), float(tol_strict))
        cfg.quad_res = int(args.quad_res if args.quad_res is not None else opts.get("quad_res", 256))
        cfg.n_test = int(args.n_test if args.n_test is not None else opts.get("n_test", 64))
        cfg.seed = int(args.seed if args.seed is not None else opts.get("seed", 0))
        cfg.bisect_tol = float(
            args.bisect_tol if args.bisect_tol is not None else opts.get("bisect_tol", 1e-3)
        )
        sweep = dict(opts.get("sweep", {}))
        for item in args.sweep or []:
            name, _, rng = item.partition("=")
            sweep[name] = rng
        for name, rng in sweep.items():
            if name not in SWEEP_PARAMS:
                raise InputError(f"unknown sweep parameter {name!r}; choose from {SWEEP_PARAMS}")
            cfg.sweep.append((name, parse_range(rng)))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from None
    if cfg.quad_res < 16 or cfg.n_test < 1 or cfg.bisect_tol <= 0:
        raise InputError("need quad_res >= 16, n_test >= 1, bisect_tol > 0")
    return cfg


# --- subcommands ------------------------------------------------------------


def run_classify(cfg: JobConfig, fmt: str):
    fan = solve_riemann(cfg.data)
    label = classify(cfg.data)
    if fmt == "json":
        out = fan.to_dict()
        out["label"] = str(label)
        return EXIT_OK, json.dumps(out, indent=2)
    lines = [str(label)]
    if fan.vacuum:
        lines.append("vacuum: no middle state")
    else:
        lines.append(f"rho_m={_fmt(fan.middle_density)}")
        lines.append(f"v_m2={_fmt(fan.middle_normal_velocity)}")
    for side, wave in (("left", fan.left), ("right", fan.right)):
        if wave.kind != "none":
            lines.append(f"{side}: {wave.kind} speeds={_fmt(wave.speeds[0])},{_fmt(wave.speeds[1])}")
    if fan.contact:
        lines.append(f"contact: speed={_fmt(fan.contact_speed)}")
    return EXIT_OK, "\n".join(lines)


def run_riemann(cfg: JobConfig, fmt: str):
    if fmt == "text":
        return run_classify(cfg, fmt)
    fan = solve_riemann(cfg.data)
    return EXIT_OK, json.dumps({"data": cfg.data.to_dict(), "fan": fan.to_dict()}, indent=2)


def find_subsolutions(cfg: JobConfig) -> dict:
    result = search(cfg.data, cfg.eps1_grid, tolerances=cfg.tolerances)
    return {
        "data": cfg.data.to_dict(),
        "tolerances": {"eq": cfg.tolerances.eq, "strict": cfg.tolerances.strict},
        "subsolutions": [
            {
                "point": vars(w.point),
                "subsolution": w.subsolution.to_dict(),
                "certificate": w.certificate.to_dict(),
            }
            for w in result.found
        ],
        "diagnostics": result.diagnostics,
    }


def run_find_subsolution(cfg: JobConfig, fmt: str):
    out = find_subsolutions(cfg)
    code = EXIT_OK if out["subsolutions"] else EXIT_NONE
    if fmt == "text":
        lines = [f"certified subsolutions: {len(out['subsolutions'])}"]
        for s in out["subsolutions"]:
            p = s["point"]
            lines.append(" ".join(f"{k}={_fmt(v)}" for k, v in p.items()))
        return code, "\n".join(lines)
    return code, json.dumps(out, indent=2)


def _subsolutions_from(raw: dict) -> List[FanSubsolution]:
    if "subsolution" in raw:
        items = [raw["subsolution"]]
    else:
        items = [s["subsolution"] for s in raw.get("subsolutions", [])]
    try:
        return [FanSubsolution.from_dict(s) for s in items]
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"invalid subsolution: {exc}") from None


def run_verify(cfg: JobConfig, fmt: str):
    subs = _subsolutions_from(cfg.raw)
    if not subs:
        raise InputError("no subsolution in input")
    reports = []
    for sub in subs:
        cert = certify(sub, cfg.data, cfg.tolerances)
        eq, ineq = weak_form_residual(sub, cfg.data, cfg.n_test, cfg.quad_res, cfg.seed)
        reports.append(
            {"certificate": cert.to_dict(), "weak_form": {"max_eq_residual": eq, "min_ineq_value": ineq}}
        )
    code = EXIT_OK if all(r["certificate"]["verdict"] == "pass" for r in reports) else EXIT_NONE
    if fmt == "text":
        lines = []
        for i, r in enumerate(reports):
            c = r["certificate"]
            lines.append(f"[{i}] {c['verdict']} failures={','.join(c['failures']) or '-'}")
            lines.append(
                f"    weak form: max_eq_residual={_fmt(r['weak_form']['max_eq_residual'])} "
                f"min_ineq_value={_fmt(r['weak_form']['min_ineq_value'])}"
            )
        return code, "\n".join(lines)
    return code, json.dumps({"reports": reports}, indent=2)


def run_threshold(cfg: JobConfig, fmt: str):
    d = cfg.data
    report = estimate_vbar(
        d.eos, d.rho_minus, d.rho_plus, d.v_plus, d.v_minus[0], cfg.bisect_tol, cfg.eps1_grid, cfg.tolerances
    )
    if fmt == "text":
        return EXIT_OK, (
            f"T={_fmt(report.T)}\nVbar_estimate={_fmt(report.vbar_estimate)}\n"
            f"bracket={_fmt(report.bracket[0])},{_fmt(report.bracket[1])}\n"
            f"monotone={_fmt(report.monotone)}"
        )
    return EXIT_OK, json.dumps(report.to_dict(), indent=2)


def _sweep_data(base: RiemannData, values: Dict[str, float]) -> RiemannData:
    d = base.to_dict()
    gap = values.get("gap")
    for k, v in values.items():
        if k in ("rho_minus", "rho_plus", "gamma"):
            d[k] = v
        elif k == "v_minus_1":
            d["v_minus"][0] = v
        elif k == "v_plus_1":
            d["v_plus"][0] = v
        elif k == "v_plus_2":
            d["v_plus"][1] = v
    data = RiemannData.from_dict(d)
    return data.with_gap(gap) if gap is not None else data


def sweep_row(args) -> dict:
    data, grid, tol = args
    d = data.to_dict()
    row = {
        "rho_minus": data.rho_minus,
        "rho_plus": data.rho_plus,
        "v_minus_1": d["v_minus"][0],
        "v_minus_2": d["v_minus"][1],
        "v_plus_1": d["v_plus"][0],
        "v_plus_2": d["v_plus"][1],
        "gamma": data.gamma,
        "gap": data.gap,
    }
    try:
        label = classify(data)
        row.update(pattern=label.waves, contact=label.contact)
        row["T"] = two_shock_threshold(data.eos, data.rho_minus, data.rho_plus)
        result = search(data, grid, tolerances=tol)
        row.update(feasible=bool(result.found), n_found=len(result.found))
        if result.found:
            row["best_subsolution_margin"] = max(
                min(w.certificate.relative("subsolution") + w.certificate.relative("eigen"))
                for w in result.found
            )
            row["best_admissibility_margin"] = max(
                min(w.certificate.relative("admissibility")[::2]) for w in result.found
            )
    except (ArithmeticError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _workers() -> int:
    env = os.environ.get("FANSUB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"FANSUB_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def sweep_rows(cfg: JobConfig) -> List[dict]:
    names = [n for n, _ in cfg.sweep]
    axes = [np.linspace(lo, hi, n) if n > 1 else ([lo] if n == 1 else []) for _, (lo, hi, n) in cfg.sweep]
    jobs = []
    for combo in itertools.product(*axes):
        try:
            data = _sweep_data(cfg.data, dict(zip(names, (float(c) for c in combo))))
        except (ValueError, DomainError) as exc:
            raise InputError(f"sweep point {dict(zip(names, combo))}: {exc}") from None
        jobs.append((data, cfg.eps1_grid, cfg.tolerances))
    if not cfg.sweep:
        jobs = [(cfg.data, cfg.eps1_grid, cfg.tolerances)]
    workers = min(_workers(), len(jobs))
    if workers <= 1:
        return [sweep_row(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(sweep_row, jobs))


def run_sweep(cfg: JobConfig, fmt: str):
    rows = sweep_rows(cfg)
    if fmt == "json":
        return EXIT_OK, json.dumps(rows, indent=2)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row.get(k)) for k in SWEEP_COLUMNS})
    return EXIT_OK, buf.getvalue().rstrip("\n")


def plot_data(data: RiemannData, n_fan: int = 7, t_end: float = 1.0) -> dict:
    """Interface lines x2 = s t of the classical fan, rarefactions as bundles."""
    fan = solve_riemann(data)
    polylines = []

    def line(label, kind, s):
        polylines.append({"label": label, "kind": kind, "slope": s, "points": [[0.0, 0.0], [s * t_end, t_end]]})

    for side, wave in (("left", fan.left), ("right", fan.right)):
        if wave.kind == "shock":
            line(f"{side} S", "shock", wave.speeds[0])
        elif wave.kind == "rarefaction":
            for s in np.linspace(wave.speeds[0], wave.speeds[1], n_fan):
                line(f"{side} R", "rarefaction", float(s))
    if fan.contact and not fan.vacuum:
        line("contact", "contact", fan.contact_speed)
    out = {"pattern": fan.pattern, "contact": fan.contact, "t_end": t_end, "polylines": polylines}
    if fan.vacuum:
        out["vacuum"] = {"label": "vacuum", "slopes": [fan.left.speeds[1], fan.right.speeds[0]]}
    return out


def run_plot_data(cfg: JobConfig, fmt: str):
    return EXIT_OK, json.dumps(plot_data(cfg.data), indent=2)


COMMANDS = {
    "classify": (run_classify, "text"),
    "riemann": (run_riemann, "json"),
    "find-subsolution": (run_find_subsolution, "json"),
    "verify": (run_verify, "json"),
    "threshold": (run_threshold, "json"),
    "sweep": (run_sweep, "csv"),
    "plot-data": (run_plot_data, "json"),
}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fansub", description="Fan subsolutions for the 2D isentropic Euler Riemann problem")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", help="JSON file with rho_minus, rho_plus, v_minus, v_plus, gamma [, options]")
    p.add_argument("--output", help="write result here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "text"))
    p.add_argument("--eps1-grid", help="geometric eps1 grid lo:hi:n")
    p.add_argument("--quad-res", type=int)
    p.add_argument("--n-test", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol-eq", type=float)
    p.add_argument("--tol-strict", type=float)
    p.add_argument("--bisect-tol", type=float)
    p.add_argument("--sweep", action="append", metavar="PARAM=lo:hi:n")
    p.add_argument("--rho-minus", type=float)
    p.add_argument("--rho-plus", type=float)
    p.add_argument("--v-minus", metavar="V1,V2")
    p.add_argument("--v-plus", metavar="V1,V2")
    p.add_argument("--gamma", type=float)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    func, default_fmt = COMMANDS[args.command]
    fmt = args.format or default_fmt
    try:
        cfg = build_config(args)
        code, text = func(cfg, fmt)
    except (InputError, DomainError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, ThresholdError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
