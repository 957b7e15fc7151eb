"""Command line front end: kernel, classify, spectrum, verify.

Every command prints a short human summary to stdout and writes the
machine-readable payload (JSON or CSV) either below it or to --out.
Outputs are deterministic given the flags and seed. Exit codes: 0 success,
1 verification failure, 2 usage error, 3 numeric or convergence error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .classify import classify
from .config import RunConfig
from .errors import (
    NonPositiveSymbolError,
    NotLeftInvertibleError,
    OutsideConvergenceDomainError,
    SymbolSyntaxError,
    TailBoundNotAchievedError,
)
from .model import kernel_closed_form, kernel_series, make_kernel
from .operators import make_operator
from .spectral import spectral_radius, spectral_summary
from .symbols import parse_phi_spec, validate_positivity
from .util import fmt17
from .verify import all_passed, run_verify

USAGE_ERROR = 2
NUMERIC_ERROR = 3


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--phi", required=True, help="symbol spec, e.g. const:1, expr:x+1, exp:a=2")
    p.add_argument("--t", type=float, default=1.0, help="translation step (default 1)")
    p.add_argument("--xmax", type=float, default=None, help="sampling window end (default 64 t)")
    p.add_argument("--h", type=float, default=None, help="cell width for generated test data (default t/256)")
    p.add_argument("--nmax", type=int, default=32, help="order cap for norm sequences / classification")
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VAL", help="override a named tolerance")
    p.add_argument("--seed", type=int, default=0, help="seed for generated test data")
    p.add_argument("--out", default=None, help="write machine output to this path")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}; use re or re,im")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wtsemigroup",
        description="Weighted translation semigroups: kernels, spectra, classification, verification",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    pk = sub.add_parser("kernel", help="evaluate the diagonal reproducing kernel")
    _add_common(pk)
    pk.add_argument("--z", type=_parse_complex, default=None, help="single z value: re or re,im")
    pk.add_argument("--z-grid", default=None, metavar="unit:N", help="z grid: N points on the unit circle")
    pk.add_argument("--lambda", dest="lam", type=_parse_complex, required=True)
    pk.add_argument("--x", type=float, default=0.0, help="point in [0, t) where the diagonal acts")
    pk.add_argument("--series-tol", type=float, default=1e-10)

    pc = sub.add_parser("classify", help="classify the semigroup from the bracket signs")
    _add_common(pc)
    pc.set_defaults(nmax=16)

    ps = sub.add_parser("spectrum", help="spectral radius, annulus and model disc")
    _add_common(ps)

    pv = sub.add_parser("verify", help="run every invariant suite")
    _add_common(pv)

    return ap


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig(
        phi=args.phi,
        t=args.t,
        x_max=args.xmax,
        h=args.h,
        n_max=args.nmax,
        seed=args.seed,
        out=args.out,
        fmt=args.fmt,
    )
    for item in args.tol:
        name, _, value = item.partition("=")
        if not value:
            raise SymbolSyntaxError(f"bad tolerance override {item!r}; use NAME=VAL")
        if name not in cfg.tol:
            raise SymbolSyntaxError(f"unknown tolerance {name!r}; known: {sorted(cfg.tol)}")
        cfg.tol[name] = float(value)
    return cfg


def _emit(cfg: RunConfig, payload: str):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
        print(f"wrote {cfg.out}")
    else:
        print(payload)


def _json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _z_points(args) -> list[complex]:
    if args.z is not None and args.z_grid is not None:
        raise SymbolSyntaxError("give either --z or --z-grid, not both")
    if args.z is not None:
        return [args.z]
    if args.z_grid is None:
        raise SymbolSyntaxError("kernel needs --z or --z-grid")
    kind, _, count = args.z_grid.partition(":")
    if kind != "unit" or not count:
        raise SymbolSyntaxError(f"unsupported z grid {args.z_grid!r}; use unit:N")
    n = int(count)
    return [complex(np.cos(2 * np.pi * k / n), np.sin(2 * np.pi * k / n)) for k in range(n)]


def cmd_kernel(args) -> int:
    cfg = _config_from_args(args)
    symbol = parse_phi_spec(cfg.phi)
    validate_positivity(symbol, cfg.resolved_x_max)
    radius = symbol.model_disc_radius(cfg.t)
    if radius is None:
        op_l = make_operator(symbol, cfg.t, "L", x_max=cfg.resolved_x_max, eps_inv=cfg.eps_inv)
        radius = 1.0 / spectral_radius(op_l, cfg.n_max, cfg.resolved_x_max).estimate
    kern = make_kernel(symbol, cfg.t, radius=radius, margin=cfg.margin)
    rows = []
    for z in _z_points(args):
        value, n_terms, tail = kernel_series(kern, z, args.lam, args.x, tol=args.series_tol)
        row = {
            "z": [z.real, z.imag],
            "k": [value.real, value.imag],
            "n_terms": n_terms,
            "tail_estimate": tail,
        }
        if kern.closed_form is not None:
            cf = kernel_closed_form(kern, z, args.lam, args.x)
            row["closed_form"] = [cf.real, cf.imag]
            row["closed_form_delta"] = abs(value - cf)
        rows.append(row)
    print(
        f"# kernel phi={cfg.phi} t={cfg.t:g} x={args.x:g} lambda={args.lam} "
        f"radius={radius:.9g} closed_form={kern.closed_form} points={len(rows)}"
    )
    first = rows[0]["k"]
    print(f"# first value {first[0]:.9g}{first[1]:+.9g}i")
    if cfg.fmt == "csv":
        lines = ["re_z,im_z,re_k,im_k"]
        for row in rows:
            lines.append(
                ",".join(fmt17(v) for v in (row["z"][0], row["z"][1], row["k"][0], row["k"][1]))
            )
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit(
            cfg,
            _json(
                {
                    "phi": cfg.phi,
                    "t": cfg.t,
                    "x": args.x,
                    "lambda": [args.lam.real, args.lam.imag],
                    "radius": radius,
                    "closed_form": kern.closed_form,
                    "rows": rows,
                }
            ),
        )
    return 0


def cmd_classify(args) -> int:
    cfg = _config_from_args(args)
    symbol = parse_phi_spec(cfg.phi)
    validate_positivity(symbol, cfg.resolved_x_max)
    order = min(cfg.n_max, 64)
    report = classify(
        symbol,
        cfg.t,
        max_order=order,
        x_max=cfg.resolved_x_max,
        samples=cfg.class_samples,
        tol_class=cfg.tol_class,
    )
    print(f"# classify phi={cfg.phi} t={cfg.t:g} order<={report.max_order}")
    for label in report.labels:
        print(f"  label  {label}")
    for name, w in sorted(report.witnesses.items()):
        print(f"  not {name}: delta_{w.n}({w.x:.6g}) = {w.value:.6g}")
    _emit(cfg, _json(report.to_json_dict()))
    return 0


def cmd_spectrum(args) -> int:
    cfg = _config_from_args(args)
    symbol = parse_phi_spec(cfg.phi)
    validate_positivity(symbol, cfg.resolved_x_max)
    summary = spectral_summary(
        symbol,
        cfg.t,
        n_max=cfg.n_max,
        x_max=cfg.resolved_x_max,
        samples=cfg.samples,
        eps_inv=cfg.eps_inv,
    )
    print(
        f"# spectrum phi={cfg.phi} t={cfg.t:g} r={summary.r:.9g} r1={summary.r1:.9g} "
        f"model_disc={summary.model_disc_radius:.9g} window_limited={summary.window_limited}"
    )
    print(
        f"# n-step weight extrema attained at x={summary.diagnostics['arg_sup'][-1]:.6g} (sup) "
        f"and x={summary.diagnostics['arg_inf'][-1]:.6g} (inf) for n={summary.diagnostics['n_max']}"
    )
    print(f"# sigma(S_t): closed disc radius {summary.disc_radius:.9g}; point spectrum empty;")
    print(
        f"# sigma_ap in annulus [{summary.annulus[0]:.9g}, {summary.annulus[1]:.9g}]; "
        f"sigma_p(S_t*) contains |w| < {summary.model_disc_radius:.9g}"
    )
    if summary.radius_note:
        print(f"# note: {summary.radius_note}")
    if cfg.fmt == "csv":
        lines = ["label,re,im"]
        for label, rad in (("inner", summary.annulus[0]), ("outer", summary.annulus[1])):
            for k in range(64):
                ang = 2 * np.pi * k / 64
                lines.append(f"{label},{fmt17(rad * np.cos(ang))},{fmt17(rad * np.sin(ang))}")
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit(cfg, _json(summary.to_json_dict()))
    return 0


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    symbol = parse_phi_spec(cfg.phi)
    validate_positivity(symbol, cfg.resolved_x_max)
    results = run_verify(symbol, cfg)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f"  ({r.note})" if r.note else ""
        print(f"{status}  {r.name:<{width}}  residual {r.residual:.3e}  tol {r.tol:.1e}{extra}")
    payload = {
        "phi": cfg.phi,
        "t": cfg.t,
        "h": cfg.resolved_h,
        "seed": cfg.seed,
        "checks": [
            {
                "name": r.name,
                "residual": r.residual,
                "tol": r.tol,
                "passed": r.passed,
                "note": r.note,
            }
            for r in results
        ],
        "all_passed": all_passed(results),
    }
    _emit(cfg, _json(payload))
    if not all_passed(results):
        first = next(r for r in results if not r.passed)
        print(f"FAILED: {first.name} residual {first.residual:.3e} > tol {first.tol:.1e}")
        return 1
    return 0


_COMMANDS = {
    "kernel": cmd_kernel,
    "classify": cmd_classify,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return _COMMANDS[args.command](args)
    except SymbolSyntaxError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (
        NonPositiveSymbolError,
        NotLeftInvertibleError,
        OutsideConvergenceDomainError,
        TailBoundNotAchievedError,
    ) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return NUMERIC_ERROR


if __name__ == "__main__":
    sys.exit(main())
