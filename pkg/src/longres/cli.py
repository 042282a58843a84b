"""Command-line front end.

Every command reads one JSON problem file and writes one JSON report. Reports
keep the problem fields they were given and add their results, so the output
of ``realize`` can be fed to ``reconstruct`` and that output to ``eval``.
Exit status: 0 when every check passed, 1 when a check failed, 2 when the
input could not be read.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from . import numkit as nk
from .cayley import double_cayley
from .colligation import (Colligation, bess_from_colligation, check_spectrum_condition,
                          kernel_samples_from_pencil, lurking_isometry, transfer_eval)
from .domain import MatrixPoint, Shape
from .errors import LongresError, ShapeMismatch
from .fixtures import parallel_resistor
from .membership import (SampleConfig, check_membership, random_disk_point, random_halfplane_point,
                         stream)
from .pencil import BessFunction, PsdPencil, decomposition_value
from .realstruct import (Involution, check_real_colligation, function_realness_residual,
                         realify_decomposition, standard_involution)
from .report import Report
from .serialize import decode_matrix, decode_point, encode_matrix, encode_point

FORMAT_VERSION = 1
BUNDLED = ("parallel_resistor",)


class InputError(Exception):
    """The problem file is unreadable or inconsistent."""


# -- problem files ----------------------------------------------------------

def load_problem(path: str) -> dict[str, Any]:
    p = Path(path)
    if not p.exists() and path in BUNDLED:
        text = resources.files("longres").joinpath("data", f"{path}.json").read_text()
    else:
        try:
            text = p.read_text()
        except OSError as exc:
            raise InputError(str(exc)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("problem file must hold a JSON object")
    if data.get("version") != FORMAT_VERSION:
        raise InputError(f"unsupported format version {data.get('version')!r}")
    return data


def pencil_from_problem(data: dict) -> BessFunction:
    if "pencil" not in data:
        raise InputError("problem has no pencil")
    G = tuple(decode_matrix(g) for g in data["pencil"]["G"])
    sh = data.get("shape")
    if sh is None:
        raise InputError("problem has no shape")
    shape = Shape(tuple(sh["n"]), tuple(sh["m"]), int(sh["u"]), int(sh["h"]))
    return BessFunction(PsdPencil(shape, G))


def pencil_to_problem(f: BessFunction) -> dict:
    s = f.shape
    return {"shape": {"n": list(s.n), "m": list(s.m), "u": s.u, "h": s.h},
            "pencil": {"G": [encode_matrix(g) for g in f.pencil.G]}}


def colligation_from_problem(data: dict) -> Colligation:
    if "colligation" not in data:
        raise InputError("problem has no colligation")
    c = data["colligation"]
    return Colligation(tuple(c["n"]), int(c["x"]), int(c["u"]), decode_matrix(c["U"]))


def colligation_to_problem(c: Colligation) -> dict:
    return {"n": list(c.n), "x": c.x, "u": c.u, "U": encode_matrix(c.U)}


def config_from_problem(data: dict, args: argparse.Namespace) -> SampleConfig:
    cfg = SampleConfig(**{k: (tuple(v) if k == "carrier_dims" else v)
                          for k, v in data.get("config", {}).items()})
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.tol is not None:
        cfg = replace(cfg, identity_tol=args.tol)
    if args.samples is not None:
        cfg = replace(cfg, num_points=args.samples)
    if args.tuples is not None:
        cfg = replace(cfg, num_tuples=args.tuples)
    if args.carrier_dim is not None:
        cfg = replace(cfg, carrier_dims=(args.carrier_dim,))
    return cfg


def points_from_problem(data: dict, n, default: MatrixPoint,
                        key: str = "points") -> list[MatrixPoint]:
    pts = [decode_point(p) for p in data.get(key, [])] or [default]
    for P in pts:
        P.check_shape(n)
    return pts


def involutions_from_problem(data: dict, u: int, m) -> tuple[Involution, list[Involution]]:
    inv = data.get("involutions", {})
    inv_U = Involution(decode_matrix(inv["U"])) if "U" in inv else standard_involution(u)
    if "M" in inv:
        inv_M = [Involution(decode_matrix(j)) for j in inv["M"]]
    else:
        inv_M = [standard_involution(mk) for mk in m]
    return inv_U, inv_M


# -- commands ---------------------------------------------------------------

def _held_out(cfg: SampleConfig, n, key: int) -> list[MatrixPoint]:
    return [random_disk_point(n, stream(cfg.seed, key, i)) for i in range(cfg.num_points)]


def cmd_eval(data, cfg, out, rep):
    f = pencil_from_problem(data)
    pts = points_from_problem(data, f.shape.n, MatrixPoint.identity(f.shape.n))
    out["points"] = [encode_point(P) for P in pts]
    out["values"] = [encode_matrix(f(P)) for P in pts]


def cmd_decompose(data, cfg, out, rep):
    f = pencil_from_problem(data)
    pts = points_from_problem(data, f.shape.n, MatrixPoint.identity(f.shape.n))
    phis = [f.phi(P) for P in pts]
    out["points"] = [encode_point(P) for P in pts]
    out["phi"] = [[encode_matrix(p) for p in ph] for ph in phis]
    worst = 0.0
    for P, ph in zip(pts, phis):
        fz = f(P)
        for pl in phis:
            val = decomposition_value(pl, P, ph, f.shape.m)
            worst = max(worst, nk.opnorm(val - fz) / (1.0 + nk.opnorm(fz)))
    rep.add("decomposition", worst, cfg.identity_tol)


def cmd_cayley(data, cfg, out, rep):
    f = pencil_from_problem(data)
    F = double_cayley(f)
    pts = points_from_problem(data, f.shape.n, MatrixPoint.zero(f.shape.n), key="disk_points")
    out["disk_points"] = [encode_point(P) for P in pts]
    out["values"] = [encode_matrix(F(P)) for P in pts]


def cmd_realize(data, cfg, out, rep):
    f = pencil_from_problem(data)
    n = f.shape.n
    grid = [MatrixPoint.zero(n)] + [random_disk_point(n, stream(cfg.seed, 21, i))
                                    for i in range(cfg.num_points)]
    c = lurking_isometry(kernel_samples_from_pencil(f, grid, symmetric=True), symmetric=True)
    F = double_cayley(f)
    miss = max(nk.opnorm(transfer_eval(c, W) - F(W)) for W in _held_out(cfg, n, 22))
    rep.add("unitarity", c.unitarity_residual(), 1e-8)
    rep.add("selfadjoint", c.selfadjoint_residual(), 1e-8)
    rep.add("held_out_reproduction", miss, 1e-6)
    rep.add("spectrum_condition", float(check_spectrum_condition(c)), 1.0, higher_is_better=True)
    out["colligation"] = colligation_to_problem(c)


def cmd_reconstruct(data, cfg, out, rep):
    c = colligation_from_problem(data)
    f = bess_from_colligation(c, seed=cfg.seed)
    F = double_cayley(f)
    miss = max(nk.opnorm(transfer_eval(c, W) - F(W)) for W in _held_out(cfg, c.n, 23))
    rep.add("held_out_reproduction", miss, 1e-6)
    out.update(pencil_to_problem(f))


def cmd_check(data, cfg, out, rep):
    f = pencil_from_problem(data)
    rep.checks.extend(check_membership(f, cfg).checks)


def cmd_realcheck(data, cfg, out, rep):
    f = pencil_from_problem(data)
    s = f.shape
    inv_U, inv_M = involutions_from_problem(data, s.u, s.m)
    pts = [random_halfplane_point(s.n, stream(cfg.seed, 31, i)) for i in range(cfg.num_points)]
    rep.add("function_realness", function_realness_residual(f, inv_U, pts), cfg.identity_tol)
    if rep.passed:
        doubled = realify_decomposition(f, inv_U, inv_M, pts, cfg.identity_tol)
        rep.add("doubled_realness", doubled.realness_residual(pts), cfg.identity_tol)
        pairs = list(zip(pts, pts[1:] + pts[:1]))
        rep.add("doubled_decomposition", doubled.decomposition_residual(f, pairs), cfg.identity_tol)
    if "colligation" in data:
        c = colligation_from_problem(data)
        inv = data.get("involutions", {})
        inv_X = Involution(decode_matrix(inv["X"])) if "X" in inv else standard_involution(c.x)
        ok = check_real_colligation(c, inv_X, inv_U, cfg.identity_tol)
        rep.add("real_colligation", float(ok), 1.0, higher_is_better=True)


def cmd_demo(data, cfg, out, rep):
    f = parallel_resistor()
    out.update(pencil_to_problem(f))
    rep.add("eval_at_one", abs(f(MatrixPoint.of(1.0, 1.0))[0, 0] - 0.5), 1e-12)
    rep.add("double_cayley_at_zero",
            abs(double_cayley(f)(MatrixPoint.zero((1, 1)))[0, 0] + 1.0 / 3.0), 1e-12)
    cmd_realize(out, cfg, out, rep)
    g = bess_from_colligation(colligation_from_problem(out), seed=cfg.seed)
    miss = max(abs(g(P) - f(P))[0, 0] / abs(f(P)[0, 0])
               for P in [random_halfplane_point((1, 1), stream(cfg.seed, 41, i))
                         for i in range(cfg.num_points)])
    rep.add("round_trip", miss, 1e-6)
    rep.checks.extend(check_membership(f, cfg).checks)


COMMANDS = {
    "eval": cmd_eval,
    "decompose": cmd_decompose,
    "cayley": cmd_cayley,
    "realize": cmd_realize,
    "reconstruct": cmd_reconstruct,
    "check": cmd_check,
    "realcheck": cmd_realcheck,
    "demo": cmd_demo,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="longres", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("input", nargs="?",
                        help="problem file, or the name of a bundled fixture "
                             f"({', '.join(BUNDLED)}); not needed for demo")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--tol", type=float, help="tolerance for identity checks")
    parser.add_argument("--samples", type=int, help="number of random points")
    parser.add_argument("--tuples", type=int, help="number of random operator tuples")
    parser.add_argument("--carrier-dim", type=int, help="use one carrier dimension for tuples")
    parser.add_argument("--out", help="write the report here instead of stdout")
    return parser


def _jsonable(obj):
    if isinstance(obj, float):
        return obj if np.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "demo" and args.input is None:
            data = {"version": FORMAT_VERSION}
        elif args.input is None:
            raise InputError(f"{args.command} needs an input file")
        else:
            data = load_problem(args.input)
        cfg = config_from_problem(data, args)
    except (InputError, LongresError, KeyError, TypeError, ValueError) as exc:
        print(f"longres: error: {exc}", file=sys.stderr)
        return 2

    out = {k: v for k, v in data.items()}
    out["version"] = FORMAT_VERSION
    out["command"] = args.command
    out["config"] = {"seed": cfg.seed, "num_points": cfg.num_points,
                     "num_tuples": cfg.num_tuples, "carrier_dims": list(cfg.carrier_dims),
                     "margin": cfg.margin, "identity_tol": cfg.identity_tol,
                     "positivity_tol": cfg.positivity_tol}
    rep = Report()
    try:
        COMMANDS[args.command](data, cfg, out, rep)
    except InputError as exc:
        print(f"longres: error: {exc}", file=sys.stderr)
        return 2
    except (LongresError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (KeyError, TypeError, ShapeMismatch)):
            print(f"longres: error: malformed problem: {exc}", file=sys.stderr)
            return 2
        rep.add("error", 1.0, 0.0, note=f"{type(exc).__name__}: {exc}")
    out["report"] = rep.to_dict()
    text = json.dumps(_jsonable(out), sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(rep.summary() or "no checks", file=sys.stderr)
    return 0 if rep.passed else 1


def main() -> None:
    sys.exit(run())
