"""Command-line interface: bound reports, sweeps, and grid experiments.

Every command writes CSV (default) or JSON to --output or stdout. CSV floats
carry 17 significant digits; a provenance block (parameters, tolerances, grid
hash) precedes the header as '#'-prefixed comment lines, or sits under the
"provenance" key in JSON. Identical invocations produce byte-identical files
under --reproducible, which suppresses the timestamp. --threads is accepted
for interface compatibility; execution is serial and deterministic either way.

Exit codes: 0 success, 2 domain/validation/I-O failure, 3 degenerate data.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import counterexample as cx
from . import envelope_lab as lab
from . import exponent_bounds as xb
from . import special_functions as sf
from .errors import (AdmissibilityError, ConditionError, DegenerateData, DomainError,
                     GeometryError, GridFormatError, OptimizationError)

_USAGE_ERRORS = (DomainError, OptimizationError, GeometryError, ConditionError,
                 AdmissibilityError, GridFormatError, OSError, ValueError)


@dataclass
class RunConfig:
    """One validated invocation: command, parameters, output destination."""

    command: str
    parameters: dict
    output_path: str | None = None
    format: str = "csv"
    reproducible: bool = False
    threads: int = 1
    provenance: dict = field(default_factory=dict)


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".17g")
    return str(x)


def _emit(cfg: RunConfig, rows: list[dict]) -> None:
    prov = dict(cfg.provenance)
    prov["command"] = cfg.command
    prov.update({k: v for k, v in sorted(cfg.parameters.items()) if v is not None})
    if not cfg.reproducible:
        prov["generated_at"] = datetime.now(timezone.utc).isoformat()

    if cfg.format == "json":
        payload = {"provenance": prov, "rows": rows}
        text = json.dumps(payload, indent=2, default=_fmt) + "\n"
    else:
        lines = [f"# {k}={_fmt(v)}" for k, v in prov.items()]
        if rows:
            cols = list(rows[0].keys())
            lines.append(",".join(cols))
            for row in rows:
                lines.append(",".join(_fmt(row[c]) for c in cols))
        text = "\n".join(lines) + "\n"

    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        sys.stdout.write(text)


def _report_row(rep: xb.ExponentReport) -> dict:
    return {
        "n": rep.n, "ratio": rep.ratio, "k": rep.k, "c": rep.c, "c_star": rep.c_star,
        "gamma0": rep.gamma0, "epsilon_interior": rep.epsilon_interior,
        "stationarity_residual": rep.stationarity_residual,
        "gamma_star": rep.gamma_star, "f_at_gamma_star": rep.f_at_gamma_star,
        "closed_form_lower": rep.closed_form_lower, "tau_n": rep.tau_n,
        "refined_lower": rep.refined_lower, "abstract_lower": rep.abstract_lower,
        "epsilon_upper": rep.epsilon_upper, "ass_conjecture": rep.ass_conjecture,
        "epsilon_global": rep.epsilon_global,
    }


def _parse_range(text: str) -> list[int]:
    if ":" in text:
        a, b = text.split(":", 1)
        lo, hi = int(a), int(b)
        if hi < lo:
            raise DomainError(f"range {text!r} is empty")
        return list(range(lo, hi + 1))
    return [int(x) for x in text.split(",") if x]


def _parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def cmd_bounds(cfg: RunConfig) -> int:
    p = cfg.parameters
    rep = xb.compute_report(xb.Ellipticity(p["n"], p["ratio"], p["k"]))
    _emit(cfg, [_report_row(rep)])
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    p = cfg.parameters
    rows = []
    for n in _parse_range(p["n_range"]):
        for ratio in _parse_floats(p["ratios"]):
            if p["k_rule"] == "one":
                k = 1
            else:
                k = max(1, n // 2 - 1)
            rep = xb.compute_report(xb.Ellipticity(n, ratio, k))
            row = _report_row(rep)
            row["refined_lower_normalized"] = (
                rep.refined_lower * ratio ** (n - k)
                if not math.isnan(rep.refined_lower) else math.nan
            )
            rows.append(row)
    _emit(cfg, rows)
    return 0


def cmd_lambertw(cfg: RunConfig) -> int:
    p = cfg.parameters
    solver = sf.lambert_w0 if p["branch"] == 0 else sf.lambert_wm1
    rows = []
    for z in _parse_floats(p["z"]):
        bv = solver(z)
        rows.append({"z": z, "branch": p["branch"], "value": bv.value,
                     "residual": bv.residual})
    _emit(cfg, rows)
    return 0


def cmd_t0(cfg: RunConfig) -> int:
    p = cfg.parameters
    n = p["n"]
    if p.get("beta") is not None:
        ratio = xb.rho_for_beta(n, p["beta"])
        x0, t0 = xb.t0_maximizer(n, ratio)
        rows = [{"n": n, "beta": p["beta"], "ratio": ratio, "x0": x0, "t0": t0,
                 "t0_expected": n / p["beta"]}]
    else:
        x0, t0 = xb.t0_maximizer(n, p["ratio"])
        rows = [{"n": n, "ratio": p["ratio"], "x0": x0, "t0": t0}]
    _emit(cfg, rows)
    return 0


def cmd_counterexample(cfg: RunConfig) -> int:
    p = cfg.parameters
    scan = cx.divergence_scan(p["n"], p["ratio"], p["eps"], _parse_range(p["mrange"]))
    cfg.provenance["condition_ok"] = scan.condition_ok
    if scan.condition_ok:
        cfg.provenance["alpha"] = scan.alpha
        cfg.provenance["fit_exponent"] = scan.fit_exponent
        cfg.provenance["fit_r_squared"] = scan.fit_r_squared
    else:
        cfg.provenance["note"] = scan.note
    rows = [
        {"m": int(m), "R": float(R), "lower_bound": float(b)}
        for m, R, b in zip(scan.m_values, scan.R_sequence, scan.lower_bounds)
    ]
    _emit(cfg, rows)
    return 0


def cmd_theta(cfg: RunConfig) -> int:
    p = cfg.parameters
    grid = lab.GridFunction.load(p["input"])
    tf = lab.theta_field(grid, p["a_max"], p["bisect_tol"])
    restrict = p["restrict_radius"] if p.get("restrict_radius") else grid.domain_radius / 2.0
    if p.get("t_grid"):
        t_grid = np.asarray(_parse_floats(p["t_grid"]))
    else:
        t_grid = np.geomspace(p["a_max"] / 1000.0, p["a_max"], 25)
    tail = lab.tail_distribution(tf, restrict, t_grid)
    cfg.provenance.update({
        "grid_hash": grid.content_hash(),
        "restrict_radius": restrict,
        "fitted_exponent": tail.fitted_exponent,
        "converged_fraction": float(tf.converged[grid.inside_mask()].mean()),
    })
    rows = [{"t": float(t), "measure": float(m)}
            for t, m in zip(tail.thresholds, tail.measures)]
    _emit(cfg, rows)
    return 0


def cmd_decay(cfg: RunConfig) -> int:
    p = cfg.parameters
    grid = lab.GridFunction.load(p["input"])
    e = xb.Ellipticity(p["n"], p["ratio"], p["k"])
    cfg.provenance["grid_hash"] = grid.content_hash()
    try:
        rep = lab.decay_experiment(grid, p["delta"], p["levels"], e)
    except DegenerateData as exc:
        rep = exc.report
        cfg.provenance["warning"] = str(exc)
        print(f"warning: {exc}", file=sys.stderr)
        _emit_decay(cfg, rep)
        return 3
    _emit_decay(cfg, rep)
    return 0


def _emit_decay(cfg: RunConfig, rep: lab.DecayReport) -> None:
    cfg.provenance["empirical_ratio"] = rep.empirical_ratio
    cfg.provenance["theoretical_ratio"] = rep.theoretical_ratio
    rows = [{"j": j, "opening": float(a), "count_measure": float(c)}
            for j, (a, c) in enumerate(zip(rep.openings, rep.counts))]
    _emit(cfg, rows)


_COMMANDS = {
    "bounds": cmd_bounds,
    "sweep": cmd_sweep,
    "lambertw": cmd_lambertw,
    "theta": cmd_theta,
    "decay": cmd_decay,
    "counterexample": cmd_counterexample,
    "t0": cmd_t0,
}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--output", default=None, help="output file (default stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--reproducible", action="store_true",
                     help="suppress the timestamp for byte-identical reruns")
    sub.add_argument("--threads", type=int, default=1,
                     help="accepted for compatibility; execution is serial")
    sub.add_argument("--config", default=None,
                     help="JSON file of parameter defaults; flags win")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hessint",
        description="Hessian integrability exponent bounds and grid experiments",
    )
    sp = ap.add_subparsers(dest="command", required=True)

    b = sp.add_parser("bounds", help="full bound report for one (n, ratio, k)")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--ratio", type=float, required=True)
    b.add_argument("--k", type=int, default=1)
    _add_common(b)

    s = sp.add_parser("sweep", help="bound table over n and ratio ranges")
    s.add_argument("--n-range", dest="n_range", required=True, help="e.g. 3:12 or 3,5,8")
    s.add_argument("--ratios", required=True, help="comma list, e.g. 1,1.5,2")
    s.add_argument("--k-rule", dest="k_rule", choices=("one", "half"), default="one",
                   help="k = 1 or k = max(1, n//2 - 1)")
    _add_common(s)

    w = sp.add_parser("lambertw", help="evaluate a real Lambert W branch")
    w.add_argument("--branch", type=int, choices=(0, -1), required=True)
    w.add_argument("--z", required=True, help="comma list of arguments")
    _add_common(w)

    t = sp.add_parser("theta", help="minimal-opening field and tail distribution")
    t.add_argument("--input", required=True, help="grid header JSON")
    t.add_argument("--a-max", dest="a_max", type=float, required=True)
    t.add_argument("--bisect-tol", dest="bisect_tol", type=float, required=True)
    t.add_argument("--restrict-radius", dest="restrict_radius", type=float, default=None)
    t.add_argument("--t-grid", dest="t_grid", default=None,
                   help="comma list of thresholds (default geometric)")
    _add_common(t)

    d = sp.add_parser("decay", help="contact-set measure decay in the opening")
    d.add_argument("--input", required=True, help="grid header JSON")
    d.add_argument("--delta", type=float, required=True)
    d.add_argument("--levels", type=int, required=True)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--ratio", type=float, required=True)
    d.add_argument("--k", type=int, default=1)
    _add_common(d)

    c = sp.add_parser("counterexample", help="divergence scan of the L^eps lower bound")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--ratio", type=float, required=True)
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--mrange", required=True, help="e.g. 3:10")
    _add_common(c)

    z = sp.add_parser("t0", help="decay-threshold maximizer of the barrier family")
    z.add_argument("--n", type=int, required=True)
    z.add_argument("--ratio", type=float, default=None)
    z.add_argument("--beta", type=float, default=None,
                   help="report the ratio with t0 = n/beta instead")
    _add_common(z)

    return ap


_COMMON_KEYS = {"output", "format", "reproducible", "threads", "config", "command"}


def _make_config(args: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(args).items() if k not in _COMMON_KEYS}
    if args.config:
        loaded = json.loads(Path(args.config).read_text())
        if not isinstance(loaded, dict):
            raise DomainError("config file must hold a JSON object")
        unknown = set(loaded) - set(params)
        if unknown:
            raise DomainError(f"config contains unknown keys: {sorted(unknown)}")
        for k, v in loaded.items():
            if params[k] is None or params[k] == argparse.SUPPRESS:
                params[k] = v
    if args.command == "t0" and params.get("ratio") is None and params.get("beta") is None:
        raise DomainError("t0 requires --ratio or --beta")
    return RunConfig(
        command=args.command,
        parameters=params,
        output_path=args.output,
        format=args.format,
        reproducible=args.reproducible,
        threads=args.threads,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _make_config(args)
        return _COMMANDS[args.command](cfg)
    except DegenerateData as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
