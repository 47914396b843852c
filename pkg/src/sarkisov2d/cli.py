"""Command-line front end.

    sarkisov2d fan-check FILE.fan
    sarkisov2d surface-info FILE.fan|FILE.surf
    sarkisov2d mmp FILE.fan|FILE.scenario|FILE.surf [--strategy RULE] [--phi I=P/Q ...]
    sarkisov2d geography FILE.scenario
    sarkisov2d sarkisov FILE.scenario [--swap]

Exit status: 0 success, 1 domain error (JSON on stderr), 2 usage error.
The default seed is 0; the environment variable SARKISOV2D_SEED overrides
it, a ``seed`` line in a scenario overrides that, and --seed wins over all.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .geography import ConsistencyError, render_svg
from .lattice_fan import FanError, fibrations, kernel_weights, parse_fan, subdivide_to_smooth
from .mmp import LogPair, MMPError, run_mmp
from .numerical_surface import NumericalError, parse_surface, run_mmp_numerical
from .rational import fmt
from .sarkisov import SarkisovError, build_slice, decompose_sarkisov, parse_scenario
from .toric_surface import (
    TDivisor,
    ToricSurface,
    ample_divisor,
    canonical_divisor,
    degrees,
    intersection_matrix,
)

SEED_ENV = "SARKISOV2D_SEED"
DOMAIN_ERRORS = (FanError, MMPError, NumericalError, SarkisovError, ValueError)


class UsageError(Exception):
    pass


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise SarkisovError("missing_file", f"cannot read {path}: {exc.strerror}") from None


def _digest(blobs: Sequence[bytes]) -> str:
    h = hashlib.sha256()
    for b in blobs:
        h.update(b)
    return h.hexdigest()


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _phi_args(items: Sequence[str], n: int) -> TDivisor:
    coeffs = [Fraction(0)] * n
    for item in items or ():
        try:
            i, v = item.split("=", 1)
            coeffs[int(i)] = Fraction(v)
        except (ValueError, IndexError, ZeroDivisionError):
            raise UsageError(f"bad --phi value {item!r}; expected I=P/Q with 0 <= I < {n}") from None
    return TDivisor(tuple(coeffs))


# -- subcommands --------------------------------------------------------------------


def cmd_fan_check(args, ctx) -> tuple[dict, Optional[str]]:
    text = _read(args.input)
    ctx.blobs.append(text)
    fan = parse_fan(text.decode("utf-8"))
    smooth, inserted = subdivide_to_smooth(fan)
    out = {
        "rays": [[r.x, r.y] for r in fan.rays],
        "ray_count": fan.n,
        "picard_rank": fan.n - 2,
        "multiplicities": fan.multiplicities,
        "smooth": fan.is_smooth,
        "resolution": {
            "rays": [[r.x, r.y] for r in smooth.rays],
            "inserted": [[smooth.rays[i].x, smooth.rays[i].y] for i in inserted],
        },
    }
    if fan.n == 3:
        out["weights"] = list(kernel_weights(fan))
    return out, None


def cmd_surface_info(args, ctx) -> tuple[dict, Optional[str]]:
    text = _read(args.input)
    ctx.blobs.append(text)
    if args.input.endswith(".surf"):
        return {"backend": "numerical", "surface": parse_surface(text.decode("utf-8")).to_json()}, None
    X = ToricSurface(parse_fan(text.decode("utf-8")))
    fan = X.fan
    Q = intersection_matrix(X)
    return {
        "backend": "toric",
        "rays": [[r.x, r.y] for r in fan.rays],
        "picard_rank": X.picard_rank,
        "canonical": canonical_divisor(X).to_json(),
        "intersection_matrix": [[fmt(x) for x in row] for row in Q],
        "self_intersections": [fmt(Q[j][j]) for j in range(fan.n)],
        "K_degrees": [fmt(d) for d in degrees(X, canonical_divisor(X))],
        "contractible": [[r.x, r.y] for j, r in enumerate(fan.rays) if Q[j][j] < 0],
        "fibrations": [list(f) for f in fibrations(fan)],
        "ample_divisor": ample_divisor(X).to_json(),
    }, None


def cmd_mmp(args, ctx) -> tuple[dict, Optional[str]]:
    text = _read(args.input)
    ctx.blobs.append(text)
    if args.input.endswith(".surf"):
        S = parse_surface(text.decode("utf-8"))
        delta = [Fraction(0)] * S.n
        for item in args.phi or ():
            try:
                i, v = item.split("=", 1)
                delta[int(i)] = Fraction(v)
            except (ValueError, IndexError, ZeroDivisionError):
                raise UsageError(f"bad --phi value {item!r}") from None
        trace = run_mmp_numerical(S, delta, args.strategy or "first-index")
        return {"backend": "numerical", "trace": trace.to_json()}, None
    if args.input.endswith(".scenario"):
        sc = parse_scenario(text.decode("utf-8"), str(Path(args.input).parent))
        ctx.blobs.append(_read(sc.fan_path))
        ra, rb = sc.runs()
        return {"backend": "toric", "runA": ra.to_json(), "runB": rb.to_json()}, None
    X = ToricSurface(parse_fan(text.decode("utf-8")))
    phi = _phi_args(args.phi, X.n)
    trace = run_mmp(LogPair(X, phi), args.strategy or "first-index")
    return {"backend": "toric", "trace": trace.to_json()}, None


def _scenario(args, ctx):
    text = _read(args.input)
    ctx.blobs.append(text)
    sc = parse_scenario(text.decode("utf-8"), str(Path(args.input).parent))
    ctx.blobs.append(_read(sc.fan_path))
    if getattr(args, "swap", False):
        sc = sc.swapped()
    if args.seed is None and sc.seed is not None:
        ctx.seed = sc.seed
    return sc


def cmd_geography(args, ctx) -> tuple[dict, Optional[str]]:
    sc = _scenario(args, ctx)
    seed = ctx.seed
    ra, rb = sc.runs()
    build = build_slice(sc.surface, sc.boundary, ra, rb, seed)
    d = build.decomposition
    out = d.to_json()
    out["theta0"] = [fmt(x) for x in build.theta0]
    out["theta1"] = [fmt(x) for x in build.theta1]
    out["perturbation_rounds"] = build.rounds
    return out, render_svg(d, marks=(build.theta0, build.theta1))


def cmd_sarkisov(args, ctx) -> tuple[dict, Optional[str]]:
    sc = _scenario(args, ctx)
    seed = ctx.seed
    ra, rb = sc.runs()
    chain = decompose_sarkisov(sc.surface, sc.boundary, ra, rb, seed)
    out = chain.to_json()
    out["runA"] = ra.to_json()
    out["runB"] = rb.to_json()
    marks = [bp.point for bp in chain.build.boundary]
    return out, render_svg(chain.build.decomposition, path=chain.build.path, marks=marks)


@dataclass
class Context:
    seed: int
    blobs: list = field(default_factory=list)


COMMANDS = {
    "fan-check": cmd_fan_check,
    "surface-info": cmd_surface_info,
    "mmp": cmd_mmp,
    "geography": cmd_geography,
    "sarkisov": cmd_sarkisov,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sarkisov2d", description="Exact 2D MMP, geography and Sarkisov links.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("input")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--format", choices=("json", "svg", "both"), default="json")
        sp.add_argument("--output", default=None, help="report path (SVG goes next to it with suffix .svg)")
        if name == "mmp":
            sp.add_argument("--strategy", default=None)
            sp.add_argument("--phi", action="append", metavar="I=P/Q")
        if name == "sarkisov":
            sp.add_argument("--swap", action="store_true", help="exchange runA and runB")
    return p


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        ctx = Context(args.seed if args.seed is not None else _default_seed())
        if args.format in ("svg", "both") and args.command not in ("geography", "sarkisov"):
            raise UsageError(f"{args.command} has no SVG output")
        result, svg = COMMANDS[args.command](args, ctx)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sarkisov2d: error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        sys.stderr.write(_dump({"error": {"code": "internal_consistency", "message": str(exc)}}))
        return 1
    except DOMAIN_ERRORS as exc:
        code = getattr(exc, "code", "domain_error")
        sys.stderr.write(_dump({"error": {"code": code, "message": str(exc)}}))
        return 1
    report = {
        "tool": {"name": "sarkisov2d", "version": __version__},
        "command": args.command,
        "input": {"file": Path(args.input).name, "sha256": _digest(ctx.blobs)},
        "seed": ctx.seed,
        "result": result,
    }
    if args.output:
        try:
            Path(args.output).parent.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            sys.stderr.write(_dump({"error": {"code": "output_error", "message": str(exc)}}))
            return 1
    if args.format in ("json", "both"):
        if args.format == "both" and args.output is None:
            report["svg"] = svg
        text = _dump(report)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    if args.format in ("svg", "both") and (args.output or args.format == "svg"):
        if args.output:
            target = Path(args.output) if args.format == "svg" else Path(args.output).with_suffix(".svg")
            target.write_text(svg, encoding="utf-8")
        else:
            sys.stdout.write(svg)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
