"""Config-driven command line: ``verify``, ``sweep`` and ``quadrature``.

Exit codes: 0 all verdicts Holds (or certified quadrature), 1 configuration
or precondition error, 2 any Violated, 3 any Inconclusive, 4 quadrature did
not converge.  When several apply the order of precedence is 2, 1, 3.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional

import jsonschema
import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

from .applications import Partition, adaptive_quadrature, weighted_trapezoid
from .errors import ConvergenceError, HMConvexError
from .fractal_algebra import Alpha
from .functions import (
    BaseMapped,
    ConvexityParams,
    GeneralizedFunction,
    HFunction,
    MonomialSeries,
    SamplerConfig,
)
from .inequalities import VERIFIERS, InequalityCase, InequalityReport, Verdict, verify_hh_pair
from .lfi import IntegralScheme, SchemeKind

OUTPUT_DIR_ENV = "HMCONVEX_OUTPUT_DIR"

EXIT_OK, EXIT_CONFIG, EXIT_VIOLATED, EXIT_INCONCLUSIVE, EXIT_NO_CONVERGENCE = 0, 1, 2, 3, 4

ALL_THEOREMS = ("hh_hm", "hh_pair", "fejer_hm", "fejer_deriv", "lemma_identity", "jensen")
SWEEP_AXES = ("alpha", "m", "s", "nu", "mu", "q")

_FUNC_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": ["monomial_series", "base_mapped_poly"]},
        "origin": {"type": "number"},
        "terms": {"type": "array", "items": {
            "type": "array", "minItems": 2, "maxItems": 2,
            "prefixItems": [{"type": "integer", "minimum": 0}, {"type": "number"}]}},
        "coeffs": {"type": "array", "minItems": 1, "items": {"type": "number"}},
        "domain": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "number"}},
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "monomial_series"}}}, "then": {"required": ["terms"]}},
        {"if": {"properties": {"kind": {"const": "base_mapped_poly"}}}, "then": {"required": ["coeffs"]}},
    ],
}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["alpha", "m", "h", "G", "interval"],
    "additionalProperties": False,
    "properties": {
        "alpha": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "m": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "q": {"type": "number", "minimum": 1},
        "h": {
            "type": "object", "required": ["kind"], "additionalProperties": False,
            "properties": {"kind": {"enum": ["power_alpha", "power_s_alpha", "constant"]},
                           "s": {"type": "number", "exclusiveMinimum": 0, "maximum": 1}},
        },
        "G": _FUNC_SCHEMA,
        "weight": _FUNC_SCHEMA,
        "interval": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "number", "minimum": 0}},
        "domain_b": {"type": "number", "exclusiveMinimum": 0},
        "scheme": {
            "type": "object", "additionalProperties": False,
            "properties": {"kind": {"enum": [k.value for k in SchemeKind]},
                           "order": {"type": "integer", "minimum": 1},
                           "tol": {"type": "number", "exclusiveMinimum": 0},
                           "max_depth": {"type": "integer", "minimum": 0}},
        },
        "theorem": {"anyOf": [{"enum": list(ALL_THEOREMS) + ["all"]},
                              {"type": "array", "minItems": 1, "items": {"enum": list(ALL_THEOREMS)}}]},
        "seed": {"type": "integer", "minimum": 0},
        "force": {"type": "boolean"},
        "output": {"type": "string"},
        "sampler": {
            "type": "object", "additionalProperties": False,
            "properties": {"grid": {"type": "integer", "minimum": 2},
                           "samples": {"type": "integer", "minimum": 0},
                           "tol": {"type": "number", "exclusiveMinimum": 0}},
        },
        "hh_pair": {
            "type": "object", "additionalProperties": False,
            "properties": {"literal": {"type": "boolean"}, "fractal": {"type": "boolean"},
                           "corollary_h1": {"type": "boolean"}},
        },
        "quadrature": {
            "type": "object", "additionalProperties": False,
            "properties": {"target": {"type": "number", "exclusiveMinimum": 0},
                           "max_cells": {"type": "integer", "minimum": 1},
                           "partition": {"type": "array", "minItems": 2, "items": {"type": "number"}}},
        },
    },
}


class ConfigError(Exception):
    """Malformed or invalid configuration."""


# ---------------------------------------------------------------------------
# Config loading
# ---------------------------------------------------------------------------

def load_config(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from exc
    try:
        if path.suffix.lower() == ".json":
            cfg = json.loads(text)
        else:
            cfg = tomllib.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    validate_config(cfg, str(path))
    return cfg


def _field_path(err: jsonschema.ValidationError) -> str:
    out = ""
    for p in err.absolute_path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def validate_config(cfg: dict, source: str = "<config>") -> None:
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        msgs = [f"{source}: field {_field_path(e)}: {e.message}" for e in errors]
        raise ConfigError("\n".join(msgs))
    nu, mu = cfg["interval"]
    if not nu < mu:
        raise ConfigError(f"{source}: field interval: needs nu < mu, got {cfg['interval']}")


def build_function(spec: dict) -> GeneralizedFunction:
    dom = tuple(spec["domain"]) if "domain" in spec else None
    if spec["kind"] == "monomial_series":
        return MonomialSeries(spec.get("origin", 0.0), [(int(k), float(c)) for k, c in spec["terms"]], domain=dom)
    coeffs = np.asarray(spec["coeffs"], dtype=float)
    origin = float(spec.get("origin", 0.0))
    return BaseMapped(lambda x: np.polynomial.polynomial.polyval(np.asarray(x) - origin, coeffs), domain=dom)


def build_h(spec: dict) -> HFunction:
    return HFunction(spec["kind"], s=spec.get("s", 1.0))


def build_case(cfg: dict, force: bool = False, scheme_override: Optional[str] = None) -> InequalityCase:
    alpha = Alpha(cfg["alpha"])
    nu, mu = map(float, cfg["interval"])
    params = ConvexityParams(build_h(cfg["h"]), float(cfg["m"]), alpha, float(cfg.get("domain_b", mu)))
    sc = dict(cfg.get("scheme", {}))
    if scheme_override:
        sc["kind"] = scheme_override
    scheme = IntegralScheme(**sc)
    sp = cfg.get("sampler", {})
    sampler = SamplerConfig(grid=sp.get("grid", 32), samples=sp.get("samples", 20_000),
                            seed=int(cfg.get("seed", 0)), tol=sp.get("tol", 1e-9))
    W = build_function(cfg["weight"]) if "weight" in cfg else MonomialSeries(0.0, [(0, 1.0)])
    return InequalityCase(G=build_function(cfg["G"]), params=params, nu=nu, mu=mu, W=W,
                          q=float(cfg.get("q", 1.0)), scheme=scheme,
                          force=bool(force or cfg.get("force", False)), sampler=sampler)


def theorems_of(cfg: dict) -> list[str]:
    th = cfg.get("theorem", "all")
    if th == "all":
        return list(ALL_THEOREMS)
    return [th] if isinstance(th, str) else list(th)


def run_theorem(case: InequalityCase, name: str, cfg: dict) -> InequalityReport:
    if name == "hh_pair":
        return verify_hh_pair(case, **cfg.get("hh_pair", {}))
    return VERIFIERS[name](case)


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _fmt(x: Any) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _resolve_output(cli_out: Optional[str], cfg: dict, config_path: Path, suffix: str) -> Optional[Path]:
    if cli_out:
        return Path(cli_out)
    if "output" in cfg:
        return Path(cfg["output"])
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env) / f"{config_path.stem}.{suffix}"
    return None


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


CSV_COLUMNS = ["alpha", "m", "s", "nu", "mu", "theorem", "side_labels", "side_bases", "margins",
               "verdict", "error_budget", "error"]


def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r.get(c, "") for c in CSV_COLUMNS])
    return buf.getvalue()


def _row(cfg: dict, theorem: str, report: Optional[InequalityReport], error: str = "") -> dict:
    row = {
        "alpha": _fmt(float(cfg["alpha"])), "m": _fmt(float(cfg["m"])),
        "s": _fmt(float(cfg["h"].get("s", 1.0))),
        "nu": _fmt(float(cfg["interval"][0])), "mu": _fmt(float(cfg["interval"][1])),
        "theorem": theorem,
    }
    if report is None:
        row.update(verdict="Error", error=error)
        return row
    row.update(
        side_labels=";".join(lab for lab, _ in report.sides),
        side_bases=";".join(_fmt(v.base) for _, v in report.sides),
        margins=";".join(_fmt(m) for m in report.margins),
        verdict=report.verdict.value,
        error_budget=_fmt(report.error_budget),
    )
    return row


def exit_code(verdicts: list[str]) -> int:
    if "Violated" in verdicts:
        return EXIT_VIOLATED
    if "Error" in verdicts:
        return EXIT_CONFIG
    if "Inconclusive" in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _run_cell(args: tuple[dict, bool, Optional[str]]) -> list[tuple[str, Optional[dict], Optional[InequalityReport], str]]:
    cfg, force, scheme = args
    out = []
    try:
        case = build_case(cfg, force, scheme)
    except (HMConvexError, ValueError, TypeError) as exc:
        return [(th, None, None, f"{type(exc).__name__}: {exc}") for th in theorems_of(cfg)]
    for th in theorems_of(cfg):
        try:
            rep = run_theorem(case, th, cfg)
            out.append((th, rep.to_json(), rep, ""))
        except HMConvexError as exc:
            out.append((th, None, None, f"{type(exc).__name__}: {exc}"))
    return out


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_verify(config: str, out: Optional[str] = None, fmt: str = "json", force: bool = False,
               scheme: Optional[str] = None) -> int:
    try:
        cfg = load_config(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    results = _run_cell((cfg, force, scheme))
    verdicts = []
    for th, _, rep, err in results:
        if rep is None:
            print(f"{th}: {err}", file=sys.stderr)
            verdicts.append("Error")
        else:
            verdicts.append(rep.verdict.value)
    if fmt == "csv":
        text = _csv_text([_row(cfg, th, rep, err) for th, _, rep, err in results])
    else:
        text = _dump_json([j if j is not None else {"theorem": th, "verdict": "Error", "error": err}
                           for th, j, _, err in results])
    _emit(text, _resolve_output(out, cfg, Path(config), fmt))
    return exit_code(verdicts)


def _parse_axes(axes: list[str]) -> list[tuple[str, list[float]]]:
    parsed = []
    for ax in axes or []:
        if "=" not in ax:
            raise ConfigError(f"axis {ax!r} must look like name=v1,v2,...")
        name, vals = ax.split("=", 1)
        name = name.strip()
        if name not in SWEEP_AXES:
            raise ConfigError(f"unknown sweep axis {name!r}; choose from {', '.join(SWEEP_AXES)}")
        try:
            values = [float(v) for v in vals.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"axis {name}: {exc}") from exc
        if not values:
            raise ConfigError(f"axis {name} has no values")
        parsed.append((name, values))
    return parsed


def _apply_axes(cfg: dict, assignment: dict) -> dict:
    c = json.loads(json.dumps(cfg))
    for k, v in assignment.items():
        if k in ("alpha", "m", "q"):
            c[k] = v
        elif k == "s":
            c["h"] = {"kind": "power_s_alpha", "s": v}
        elif k == "nu":
            c["interval"][0] = v
        elif k == "mu":
            c["interval"][1] = v
    return c


def cmd_sweep(config: str, axes: list[str], out: Optional[str] = None, fmt: str = "csv",
              force: bool = False, scheme: Optional[str] = None, workers: int = 1) -> int:
    try:
        cfg = load_config(config)
        parsed = _parse_axes(axes)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    names = [n for n, _ in parsed]
    combos = list(itertools.product(*[v for _, v in parsed])) if parsed else [()]
    cells = [_apply_axes(cfg, dict(zip(names, combo))) for combo in combos]
    jobs = []
    for c in cells:
        try:
            validate_config(c, config)
            jobs.append((c, force, scheme))
        except ConfigError as exc:
            jobs.append((None, str(exc), c))
    valid = [j for j in jobs if j[0] is not None]
    if workers > 1 and len(valid) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            computed = list(pool.map(_run_cell, valid))
    else:
        computed = [_run_cell(j) for j in valid]
    it = iter(computed)
    rows, payload, verdicts = [], [], []
    for j in jobs:
        if j[0] is None:
            c, err = j[2], j[1]
            for th in theorems_of(c):
                rows.append(_row(c, th, None, err))
                payload.append({"theorem": th, "verdict": "Error", "error": err})
                verdicts.append("Error")
            continue
        for th, js, rep, err in next(it):
            rows.append(_row(j[0], th, rep, err))
            payload.append(js if js is not None else {"theorem": th, "verdict": "Error", "error": err})
            verdicts.append(rep.verdict.value if rep is not None else "Error")
    text = _csv_text(rows) if fmt == "csv" else _dump_json(payload)
    _emit(text, _resolve_output(out, cfg, Path(config), "sweep." + fmt))
    return exit_code(verdicts)


def cmd_quadrature(config: str, out: Optional[str] = None, scheme: Optional[str] = None) -> int:
    try:
        cfg = load_config(config)
        if "quadrature" not in cfg:
            raise ConfigError(f"{config}: field quadrature: required for the quadrature command")
        qcfg = cfg["quadrature"]
        if "target" not in qcfg and "partition" not in qcfg:
            raise ConfigError(f"{config}: field quadrature: needs target or partition")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    dest = _resolve_output(out, cfg, Path(config), "quadrature.json")
    try:
        case = build_case(cfg, True, scheme)
        if "partition" in qcfg:
            res = weighted_trapezoid(case.G, case.W, Partition(tuple(qcfg["partition"])), case.alpha,
                                     case.scheme, case.m)
        else:
            res = adaptive_quadrature(case.G, case.W, case.alpha, case.m, float(qcfg["target"]),
                                      int(qcfg.get("max_cells", 1024)), case.nu, case.mu, case.scheme)
    except ConvergenceError as exc:
        print(f"quadrature did not converge: {exc}", file=sys.stderr)
        if exc.best is not None:
            _emit(_dump_json(exc.best.to_json()), dest)
        return EXIT_NO_CONVERGENCE
    except HMConvexError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(_dump_json(res.to_json()), dest)
    return EXIT_OK if res.certified else EXIT_VIOLATED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hmconvex", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, default_fmt):
        p.add_argument("config", help="TOML or JSON run configuration")
        p.add_argument("--out", help=f"output path (default: config 'output', then ${OUTPUT_DIR_ENV}, then stdout)")
        p.add_argument("--format", choices=["json", "csv"], default=default_fmt)
        p.add_argument("--force", action="store_true", help="skip the convexity precondition")
        p.add_argument("--scheme", choices=["exact", "kernel_left", "kernel_right", "classical"])

    common(sub.add_parser("verify", help="run the selected verifiers"), "json")
    sp = sub.add_parser("sweep", help="cross-product parameter sweep")
    common(sp, "csv")
    sp.add_argument("--axis", action="append", default=[], help="name=v1,v2,... (alpha, m, s, nu, mu, q)")
    sp.add_argument("--workers", type=int, default=1)
    qp = sub.add_parser("quadrature", help="certified weighted trapezoid")
    qp.add_argument("config")
    qp.add_argument("--out")
    qp.add_argument("--scheme", choices=["exact", "kernel_left", "kernel_right", "classical"])
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args.config, args.out, args.format, args.force, args.scheme)
    if args.command == "sweep":
        return cmd_sweep(args.config, args.axis, args.out, args.format, args.force, args.scheme, args.workers)
    return cmd_quadrature(args.config, args.out, args.scheme)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
