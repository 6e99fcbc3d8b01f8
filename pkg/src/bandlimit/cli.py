"""Command-line front end: pipelines, machine-readable records, table export.

JSON records are deterministic for a fixed (command, params, tol, seed):
volatile diagnostics (wall time) go to stderr, never into the emitted file.
Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from . import lids, monotone_l2, monotone_poly, quad, represent, sharp_ineq, specfun

COMMANDS = ("monotone-poly", "monotone-l2", "lid", "lid-optimize",
            "sharp-constant", "verify-inequality", "zeros", "verify-f0", "tables")

DESK_SCALE_CAP = 300     # monotone-l2 sizes above this need --allow-large
LARGE_CAP = 1000

# Published reference values the table export reports deviations against.
REFERENCE_POLY_BOUNDS = {
    2: 1.277171240, 4: 1.277148060, 6: 1.277137688, 8: 1.277135865,
    10: 1.277135348, 12: 1.277135173, 14: 1.277135104, 16: 1.277135074,
    20: 1.277135052,
}
REFERENCE_L2_BOUNDS = {
    10: 1.277199350, 50: 1.277136017, 100: 1.277135195, 150: 1.277135093,
    200: 1.277135065, 300: 1.277135050, 400: 1.277135046, 500: 1.277135044,
    1000: 1.277135042,
}
REFERENCE_ZEROS_POL = (1.5839, 2.5715, 3.5573, 4.5470, 5.5395,
                       6.5340, 7.5297, 8.5264, 9.5238, 10.5220)
REFERENCE_ZEROS_L2 = (1.5866, 2.5648, 3.5525, 4.5444, 5.5387,
                      6.5344, 7.5311, 8.5284, 9.5261, 10.5243)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    d_or_alpha: float = 0.0
    tol: float = 1e-10
    seed: int = 0
    out_format: str = "json"
    out_path: str = "-"
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.out_format not in ("json", "csv"):
            raise ConfigError(f"unknown output format {self.out_format!r}")


@dataclass(frozen=True)
class ResultRecord:
    command: str
    params: dict
    result: dict
    diagnostics: dict
    version: str = __version__
    wall_time_ms: float = 0.0

    def payload(self) -> dict:
        """Deterministic part of the record (wall time excluded)."""
        return {
            "command": self.command,
            "params": self.params,
            "result": self.result,
            "diagnostics": self.diagnostics,
            "version": self.version,
        }

    def to_json(self) -> str:
        return json.dumps(self.payload(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        flat = {}
        for section in ("params", "result", "diagnostics"):
            for k, v in sorted(getattr(self, section).items()):
                if isinstance(v, (list, tuple)):
                    for i, t in enumerate(v):
                        flat[f"{section}.{k}.{i}"] = t
                else:
                    flat[f"{section}.{k}"] = v
        writer.writerow(["command"] + list(flat.keys()) + ["version"])
        writer.writerow([self.command] + [_fmt(v) for v in flat.values()] + [self.version])
        return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _threads(cfg: RunConfig) -> int:
    env = os.environ.get("BANDLIMIT_THREADS")
    if env:
        return max(1, int(env))
    return max(1, int(cfg.extras.get("threads") or os.cpu_count() or 1))


def run(cfg: RunConfig) -> ResultRecord:
    """Dispatch one command; deterministic given (command, params, tol, seed)."""
    t0 = time.perf_counter()
    handler = _HANDLERS[cfg.command]
    params, result, diagnostics = handler(cfg)
    wall = (time.perf_counter() - t0) * 1000.0
    for key, val in result.items():
        if isinstance(val, float) and not math.isfinite(val):
            raise quad.QuadratureError(f"non-finite result field {key}")
    return ResultRecord(command=cfg.command, params=params, result=result,
                        diagnostics=diagnostics, wall_time_ms=wall)


def _cmd_monotone_poly(cfg: RunConfig):
    d = int(cfg.d_or_alpha)
    if d < 1 or d > monotone_poly.D_CAP:
        raise ConfigError(f"d must be in [1, {monotone_poly.D_CAP}]")
    sol = monotone_poly.solve_poly(d, tol=cfg.tol)
    params = {"d": d, "tol": cfg.tol, "method": sol.diagnostics.get("method", "exact")}
    result = {"bound": sol.bound, "coeffs": [float(c) for c in sol.coeffs],
              "peak": sol.peak, "mass": sol.mass}
    if d == 2:
        cert = monotone_poly.certify_d2_exact()
        result["certificate"] = f"{cert.numerator}/{cert.denominator}"
        result["certificate_float"] = float(cert)
    return params, result, dict(sol.diagnostics)


def _cmd_monotone_l2(cfg: RunConfig):
    d = int(cfg.d_or_alpha)
    cap = LARGE_CAP if cfg.extras.get("allow_large") else DESK_SCALE_CAP
    if d < 1 or d > cap:
        raise ConfigError(f"d must be in [1, {cap}] (use --allow-large beyond "
                          f"{DESK_SCALE_CAP}, hard cap {LARGE_CAP})")
    sol = monotone_l2.solve_l2(d, tol=cfg.tol)
    params = {"d": d, "tol": cfg.tol}
    result = {"bound": sol.bound, "lambda": sol.lam,
              "coeff_head": [float(c) for c in sol.coeffs[:8]]}
    return params, result, dict(sol.diagnostics)


def _cmd_lid(cfg: RunConfig):
    alpha = float(cfg.d_or_alpha)
    if alpha <= 0:
        raise ConfigError("alpha must be positive")
    ratio = lids.bessel_lid_ratio(alpha, tol=cfg.tol)
    closed = lids.closed_form_lid_ratio(alpha)
    params = {"alpha": alpha, "tol": cfg.tol}
    result = {"ratio": ratio, "ratio_closed_form": closed}
    return params, result, {"two_path_gap": abs(ratio - closed)}


def _cmd_lid_optimize(cfg: RunConfig):
    lo = float(cfg.extras.get("lo", 0.3))
    hi = float(cfg.extras.get("hi", 2.0))
    m = lids.minimize_alpha(lo, hi, tol=cfg.extras.get("alpha_tol", 1e-4))
    params = {"lo": lo, "hi": hi, "tol": cfg.tol}
    result = {"alpha_star": m.alpha, "ratio_star": m.ratio,
              "boundary": m.boundary or "", "unimodal": m.unimodal}
    return params, result, {}


def _parse_poly(text: str) -> sharp_ineq.WeightPoly:
    try:
        coeffs = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad polynomial {text!r}") from exc
    if not coeffs:
        raise ConfigError("empty polynomial")
    try:
        return sharp_ineq.WeightPoly(coeffs)
    except sharp_ineq.WeightError as exc:
        raise ConfigError(str(exc)) from exc


def _cmd_sharp_constant(cfg: RunConfig):
    P = _parse_poly(cfg.extras.get("poly", "1"))
    c = sharp_ineq.sharp_constant(P, tol=cfg.tol)
    params = {"poly": list(P.coeffs), "tol": cfg.tol}
    return params, {"constant": c}, {}


def _cmd_verify_inequality(cfg: RunConfig):
    P = _parse_poly(cfg.extras.get("poly", "1"))
    trials = int(cfg.extras.get("trials", 100))
    c = sharp_ineq.sharp_constant(P, tol=cfg.tol)
    rng = np.random.default_rng(cfg.seed)
    draws = [sharp_ineq.random_admissible_pw(rng) for _ in range(trials)]

    def margin(g):
        return sharp_ineq.functional(P, g, tol=max(cfg.tol, 1e-11)) - c

    with ThreadPoolExecutor(max_workers=_threads(cfg)) as ex:
        margins = list(ex.map(margin, draws))
    worst = min(margins)
    params = {"poly": list(P.coeffs), "trials": trials, "seed": cfg.seed, "tol": cfg.tol}
    result = {"constant": c, "worst_margin": worst, "violations": int(sum(m < -1e-9 for m in margins))}
    if result["violations"]:
        raise quad.QuadratureError(f"inequality violated by {result['violations']} draws")
    return params, result, {"margin_mean": float(np.mean(margins))}


def _cmd_zeros(cfg: RunConfig):
    pipeline = cfg.extras.get("pipeline", "l2")
    count = int(cfg.extras.get("count", 10))
    if pipeline == "pol":
        roots = quad.find_roots(specfun.h0, 0.5, count + 2.0,
                                grid=int(200 * (count + 1.5)), tol=1e-11)[:count]
        params = {"pipeline": "pol", "count": count, "tol": cfg.tol}
    elif pipeline == "l2":
        d = int(cfg.d_or_alpha) or 1000
        if d > LARGE_CAP:
            raise ConfigError(f"d capped at {LARGE_CAP}")
        sol = monotone_l2.solve_l2(d, tol=cfg.tol)
        roots = monotone_l2.extremizer_zeros(sol, count)
        params = {"pipeline": "l2", "d": d, "count": count, "tol": cfg.tol}
    else:
        raise ConfigError(f"unknown pipeline {pipeline!r}")
    if len(roots) < count:
        raise quad.QuadratureError(f"found only {len(roots)} of {count} zeros")
    return params, {"zeros": [float(r) for r in roots]}, {}


def _cmd_verify_f0(cfg: RunConfig):
    hb = specfun.h0_band()
    resid = represent.derivative_identity_check(hb, specfun.f0, [0.5, 1.0, 3.25])
    peak_quad = represent.h_to_f(hb, 0.0, tol=cfg.tol)
    two_path = abs(peak_quad - specfun.f0(0.0))
    mid = abs(represent.h_to_f(hb, 2.5, tol=cfg.tol) - specfun.f0(2.5))
    params = {"tol": cfg.tol}
    result = {"derivative_residual": resid, "peak_two_path_gap": two_path,
              "x2.5_two_path_gap": mid}
    if resid > 1e-9 or two_path > 1e-8 or mid > 1e-8:
        raise quad.QuadratureError("profile verification outside tolerance")
    return params, result, {}


def _cmd_tables(cfg: RunConfig):
    out_dir = Path(cfg.extras.get("out_dir") or ".")
    allow_large = bool(cfg.extras.get("allow_large"))
    written = emit_tables(out_dir, allow_large=allow_large, tol=cfg.tol,
                          threads=_threads(cfg))
    params = {"out_dir": str(out_dir), "allow_large": allow_large, "tol": cfg.tol}
    return params, {"files": [str(p) for p in written]}, {}


_HANDLERS = {
    "monotone-poly": _cmd_monotone_poly,
    "monotone-l2": _cmd_monotone_l2,
    "lid": _cmd_lid,
    "lid-optimize": _cmd_lid_optimize,
    "sharp-constant": _cmd_sharp_constant,
    "verify-inequality": _cmd_verify_inequality,
    "zeros": _cmd_zeros,
    "verify-f0": _cmd_verify_f0,
    "tables": _cmd_tables,
}


# ---------------------------------------------------------------------------
# table and figure-data export
# ---------------------------------------------------------------------------


def emit_tables(out_dir: Path, allow_large: bool = False, tol: float = 1e-10,
                threads: int = 1) -> list[Path]:
    """Regenerate the bound and zero tables plus figure-data CSVs."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def poly_row(d):
        return d, monotone_poly.solve_poly(d, tol=tol).bound

    def l2_row(d):
        return d, monotone_l2.solve_l2(d, tol=tol).bound

    l2_sizes = [d for d in REFERENCE_L2_BOUNDS
                if allow_large or d <= DESK_SCALE_CAP]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as ex:
        poly_bounds = dict(ex.map(poly_row, REFERENCE_POLY_BOUNDS))
        l2_bounds = dict(ex.map(l2_row, l2_sizes))

    path = out_dir / "bounds_table.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["pipeline", "d", "bound", "reference", "deviation", "status"])
        for d, ref in REFERENCE_POLY_BOUNDS.items():
            b = poly_bounds[d]
            w.writerow(["poly", d, repr(b), repr(ref), repr(abs(b - ref)), "computed"])
        for d, ref in REFERENCE_L2_BOUNDS.items():
            if d in l2_bounds:
                b = l2_bounds[d]
                w.writerow(["l2", d, repr(b), repr(ref), repr(abs(b - ref)), "computed"])
            else:
                w.writerow(["l2", d, "", repr(ref), "", "skipped"])
    written.append(path)

    zeros_pol = quad.find_roots(specfun.h0, 0.5, 12.0, grid=2400, tol=1e-11)[:10]
    d_l2 = 1000 if allow_large else DESK_SCALE_CAP
    sol = monotone_l2.solve_l2(d_l2, tol=tol)
    zeros_l2 = monotone_l2.extremizer_zeros(sol, 10)
    path = out_dir / "zeros_table.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row"] + [f"x{i}" for i in range(1, 11)])
        w.writerow(["pol"] + [repr(z) for z in zeros_pol])
        w.writerow([f"l2_d{d_l2}"] + [repr(z) for z in zeros_l2])
        w.writerow(["pol_reference"] + [repr(z) for z in REFERENCE_ZEROS_POL])
        w.writerow(["l2_reference"] + [repr(z) for z in REFERENCE_ZEROS_L2])
    written.append(path)

    lid = lids.fejer_lid()
    figures = {
        "figure_fejer_cover.csv": (
            np.linspace(-4.0, 4.0, 2000),
            {"fejer": specfun.fejer, "lid": lambda x: lids.lid_eval(lid, x)}),
        "figure_f0.csv": (np.linspace(-6.0, 6.0, 2000),
                          {"f0": specfun.f0}),
        "figure_h0_hat.csv": (np.linspace(-0.6, 0.6, 2000),
                              {"h0_hat_normalized": lambda x: 4.0 * specfun.h0_hat(x)}),
        "figure_h0.csv": (np.linspace(-6.0, 6.0, 2000),
                          {"h0_normalized": lambda x: specfun.h0(x) / (91.0 / 600.0)}),
    }
    for name, (xs, series) in figures.items():
        path = out_dir / name
        cols = {label: fn(xs) for label, fn in series.items()}
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x"] + list(cols))
            for i, x in enumerate(xs):
                w.writerow([repr(float(x))] + [repr(float(v[i])) for v in cols.values()])
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bandlimit",
        description="Sharp constants and extremal band-limited functions.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", default="-", help="output path, '-' for stdout")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: all cores; "
                             "BANDLIMIT_THREADS overrides)")

    sp = sub.add_parser("monotone-poly", help="polynomial pipeline bound")
    sp.add_argument("--d", type=int, required=True)
    common(sp)

    sp = sub.add_parser("monotone-l2", help="orthonormal-family pipeline bound")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--allow-large", action="store_true")
    common(sp)

    sp = sub.add_parser("lid", help="lid ratio at one alpha")
    sp.add_argument("--alpha", type=float, required=True)
    common(sp)

    sp = sub.add_parser("lid-optimize", help="minimize the lid ratio over alpha")
    sp.add_argument("--lo", type=float, default=0.3)
    sp.add_argument("--hi", type=float, default=2.0)
    sp.add_argument("--alpha-tol", type=float, default=1e-4)
    common(sp)

    sp = sub.add_parser("sharp-constant", help="sharp constant of a weight polynomial")
    sp.add_argument("--poly", required=True, help="comma-separated coefficients a0,a1,...")
    common(sp)

    sp = sub.add_parser("verify-inequality", help="randomized check of the lower bound")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--trials", type=int, default=100)
    common(sp)

    sp = sub.add_parser("zeros", help="first zeros of an extremal profile")
    sp.add_argument("--pipeline", choices=("pol", "l2"), default="l2")
    sp.add_argument("--d", type=int, default=1000)
    sp.add_argument("--count", type=int, default=10)
    common(sp)

    sp = sub.add_parser("verify-f0", help="two-path checks of the explicit profile")
    common(sp)

    sp = sub.add_parser("tables", help="emit bound/zero tables and figure data")
    sp.add_argument("--out-dir", default="tables")
    sp.add_argument("--allow-large", action="store_true")
    common(sp)
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    extras = {}
    for key in ("allow_large", "poly", "trials", "pipeline", "count",
                "lo", "hi", "alpha_tol", "out_dir", "threads"):
        if hasattr(args, key) and getattr(args, key) is not None:
            extras[key] = getattr(args, key)
    d_or_alpha = 0.0
    if hasattr(args, "d"):
        d_or_alpha = float(args.d)
    elif hasattr(args, "alpha"):
        d_or_alpha = float(args.alpha)
    return RunConfig(command=args.command, d_or_alpha=d_or_alpha, tol=args.tol,
                     seed=args.seed, out_format=args.format, out_path=args.out,
                     extras=extras)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 0
        return 2 if code not in (0,) else 0
    try:
        record = run(cfg)
    except (ConfigError,) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (quad.QuadratureError, RuntimeError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    text = record.to_json() if cfg.out_format == "json" else record.to_csv()
    if cfg.out_path == "-":
        sys.stdout.write(text)
    else:
        Path(cfg.out_path).write_text(text, encoding="utf-8")
    print(f"wall_time_ms={record.wall_time_ms:.1f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
