"""Command line front end.

Every command prints one JSON envelope::

    {"command": ..., "inputs_digest": ..., "outputs": {...}, "diagnostics": {...}}

Node indices in the output are 1-based. Exit codes: 0 ok, 1 I/O or malformed
JSON, 2 validation or eigenpair error, 3 non-convergence, 4 cap exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from fractions import Fraction

from . import scalars as sc
from .critical import InvalidEigenpair, critical_data, invariant_critical_classes, section, witness_matrix
from .graphs import to_dot
from .maxplus import (MaxPlusError, maxplus_critical, maxplus_eigen, maxplus_from_dict, maxplus_graph,
                      maxplus_rho, saturation_graph)
from .mdp import MdpError, brute_force_lambda, mdp_from_dict, mdp_to_map, optimal_class_check
from .model import CapExceeded, MapModel, ModelError, evaluate, model_from_dict, validate_model
from .polyhedra import DEFAULT_ENUM_CAP, eigenspace_dimension, eigenspace_enumerate
from .spectral import (DEFAULT_MAX_ITER, NotConverged, eigenvalue_bounds, find_eigenvector, periodic_limit,
                       spectral_projector, verify_eigenpair)

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_NOCONV, EXIT_CAP = 0, 1, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _js(value):
    """Recursively convert results into JSON values; exact scalars become strings."""
    if isinstance(value, Fraction):
        return sc.format_scalar(value)
    if isinstance(value, float):
        return "-inf" if value == -math.inf else ("inf" if value == math.inf else value)
    if isinstance(value, dict):
        return {str(k): _js(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_js(v) for v in value]
    return value


def _classes(classes):
    return [[i + 1 for i in sorted(c)] for c in classes]


def _graph(g):
    return {"nodes": sorted(i + 1 for i in g.nodes), "arcs": sorted([i + 1, j + 1] for i, j in g.arcs)}


def _read(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
        return raw, json.loads(raw)
    except (OSError, ValueError) as exc:
        raise _Fail(EXIT_IO, f"cannot read {path}: {exc}")


def _load_model(args, diag):
    raw, doc = _read(args.path)
    try:
        m = model_from_dict(doc)
        validate_model(m)
    except ModelError as exc:
        raise _Fail(EXIT_INVALID, str(exc))
    if args.mode == sc.FLOAT and m.mode == sc.EXACT:
        m = m.to_float()
    elif args.mode == sc.EXACT and m.mode == sc.FLOAT:
        raise _Fail(EXIT_INVALID, "a float model cannot be analysed in exact mode")
    diag["mode"] = m.mode
    return raw, m


def _vec(text, m: MapModel, name):
    if text is None:
        return None
    try:
        v = sc.parse_vector(text, m.mode)
    except (ValueError, ZeroDivisionError) as exc:
        raise _Fail(EXIT_INVALID, f"--{name}: {exc}")
    if len(v) == 1 and m.n > 1:
        v = v * m.n
    if len(v) != m.n:
        raise _Fail(EXIT_INVALID, f"--{name} has {len(v)} entries, expected {m.n}")
    return v


def _tol(args, m):
    return None if m.mode == sc.EXACT else args.tol


def _eigenpair(args, m, diag, v=None):
    """The eigenpair from --v/--lambda, or a computed one."""
    v = v if v is not None else _vec(getattr(args, "v", None), m, "v")
    lam = getattr(args, "lam", None)
    if v is None:
        res = find_eigenvector(m, _tol(args, m), args.max_iter)
        diag["iterations"] = res.iterations
        if not res.converged:
            raise _Fail(EXIT_NOCONV, f"eigenvector search stopped with residual {res.residual}")
        v = res.v
        if lam is None:
            return res.lam, v
    if lam is None:
        lam = evaluate(m, v)[0] - v[0]
    else:
        lam = sc.convert(lam, m.mode)
    ok, residual = verify_eigenpair(m, lam, v, _tol(args, m))
    if not ok:
        raise _Fail(EXIT_INVALID, f"not an eigenpair: residual {sc.format_scalar(residual)}")
    return lam, v


# -- commands -------------------------------------------------------------

def cmd_validate(args, diag):
    raw, m = _load_model(args, diag)
    return raw, {"valid": True, "n": m.n, "homogeneity": m.homogeneity}


def cmd_spectrum(args, diag):
    raw, m = _load_model(args, diag)
    x0 = _vec(args.x0, m, "x0")
    res = find_eigenvector(m, _tol(args, m), args.max_iter, x0)
    diag["iterations"] = res.iterations
    lo, hi = eigenvalue_bounds(m, x0 if x0 is not None else [0] * m.n, 1)
    out = {"lambda": res.lam, "v": res.v, "residual": res.residual, "status": res.status,
           "bracket": [res.lower, res.upper], "first_step_bounds": [lo, hi]}
    if not res.converged:
        raise _Fail(EXIT_NOCONV, out)
    return raw, out


def cmd_critical(args, diag):
    raw, m = _load_model(args, diag)
    lam, v = _eigenpair(args, m, diag)
    tol = _tol(args, m)
    cd = critical_data(m, v, lam, tol)
    out = {
        "lambda": lam, "v": v,
        "graph": _graph(cd.graph),
        "classes": _classes(cd.classes),
        "class_count": cd.class_count,
        "class_periods": list(cd.class_periods()),
        "cyclicity": cd.cyclicity,
        "invariant_classes": _classes(invariant_critical_classes(m, v, lam, tol)),
        "section": sorted(i + 1 for i in section(cd)),
        "witness_matrix": witness_matrix(m, v, lam, tol),
    }
    if args.dot:
        _write_dot(args.dot, to_dot(cd.graph, cd.classes, "critical"))
    return raw, out


def _write_dot(path, text):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write {path}: {exc}")


def cmd_orbit(args, diag):
    raw, m = _load_model(args, diag)
    x = _vec(args.x, m, "x")
    if x is None:
        raise _Fail(EXIT_INVALID, "--x is required")
    lam, v = _eigenpair(args, m, diag)
    c = args.cyclicity or critical_data(m, v, lam, _tol(args, m)).cyclicity
    res = periodic_limit(m, lam, x, c, _tol(args, m), args.max_iter)
    diag["iterations"] = res.iterations
    return raw, {"lambda": lam, "cyclicity": c, "period": res.period,
                 "points": res.points, "residual": res.residual}


def cmd_project(args, diag):
    raw, m = _load_model(args, diag)
    z = _vec(args.z, m, "z")
    if z is None:
        raise _Fail(EXIT_INVALID, "--z is required")
    if args.lam is None:
        lam, _ = _eigenpair(args, m, diag)
    else:
        lam = sc.convert(args.lam, m.mode)
    try:
        w = spectral_projector(m, lam, z, _tol(args, m), args.max_iter)
    except ValueError as exc:
        raise _Fail(EXIT_INVALID, str(exc))
    return raw, {"lambda": lam, "z": z, "projection": w}


def cmd_eigenspace(args, diag):
    raw, m = _load_model(args, diag)
    if m.mode != sc.EXACT or not m.is_pure_max_affine:
        raise _Fail(EXIT_INVALID, "eigenspace needs an exact pure max-affine model")
    lam, v = _eigenpair(args, m, diag)
    cells = eigenspace_enumerate(m, lam, args.cap)
    cd = critical_data(m, v, lam)
    dim = eigenspace_dimension(m, lam, cd, args.cap, cells)
    verdict = "= m(f)" if dim == cd.class_count else ("< m(f)" if dim < cd.class_count else "> m(f)")
    return raw, {
        "lambda": lam,
        "cells": [{"policy": [k + 1 for k in phi], "polyhedron": K.to_dict()} for phi, K in cells],
        "dimension": dim,
        "class_count": cd.class_count,
        "verdict": verdict,
    }


def cmd_mdp(args, diag):
    raw, doc = _read(args.path)
    try:
        mdp = mdp_from_dict(doc)
    except MdpError as exc:
        raise _Fail(EXIT_INVALID, str(exc))
    m = mdp_to_map(mdp)
    diag["mode"] = m.mode
    lam_bf = brute_force_lambda(mdp, args.cap)
    lam, v = _eigenpair(args, m, diag)
    report = optimal_class_check(mdp, lam, v, _tol(args, m))
    return raw, {
        "states": list(mdp.states),
        "brute_force_lambda": lam_bf,
        "lambda": lam, "v": v,
        "active_actions": [[mdp.actions[i][k].name for k in acts] for i, acts in enumerate(report.active_actions)],
        "critical_classes": _classes(report.critical_classes),
        "certified": [{"class": [i + 1 for i in sorted(C)], "value": val, "ok": ok}
                      for C, val, ok in report.certified],
        "sampled_policies": report.sampled_policies,
        "sampled_optimal_classes": report.sampled_classes,
        "violations": _classes(report.violations),
        "ok": report.ok,
    }


def cmd_maxplus(args, diag):
    raw, doc = _read(args.path)
    try:
        A, mode = maxplus_from_dict(doc)
    except (MaxPlusError, ValueError) as exc:
        raise _Fail(EXIT_INVALID, str(exc))
    diag["mode"] = mode
    out = {"rho": maxplus_rho(A), "graph": _graph(maxplus_graph(A))}
    try:
        lam, v = maxplus_eigen(A)
    except MaxPlusError as exc:
        diag["warnings"].append(str(exc))
        return raw, out
    crit = maxplus_critical(A, lam, v)
    out.update({"v": v, "saturation": _graph(saturation_graph(A, lam, v)), "critical": _graph(crit)})
    if args.dot:
        _write_dot(args.dot, to_dot(crit, name="critical"))
    return raw, out


COMMANDS = {
    "validate": cmd_validate, "spectrum": cmd_spectrum, "critical": cmd_critical,
    "orbit": cmd_orbit, "project": cmd_project, "eigenspace": cmd_eigenspace,
    "mdp": cmd_mdp, "maxplus": cmd_maxplus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", help="input JSON file")
    common.add_argument("--tol", type=float, default=sc.DEFAULT_FLOAT_TOL, help="float-mode tolerance")
    common.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    common.add_argument("--mode", choices=sc.MODES, default=None, help="override the file's arithmetic mode")
    common.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP, help="enumeration cap")
    common.add_argument("--json", action="store_true", default=True, help="machine output (always on)")
    common.add_argument("--dot", default=None, help="write the critical graph as DOT")
    common.add_argument("--v", default=None, help="eigenvector, comma separated")
    common.add_argument("--lambda", dest="lam", default=None, help="eigenvalue")

    p = argparse.ArgumentParser(prog="convexspec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common])
    sp = sub.add_parser("spectrum", parents=[common])
    sp.add_argument("--x0", default=None)
    sub.add_parser("critical", parents=[common])
    op = sub.add_parser("orbit", parents=[common])
    op.add_argument("--x", default=None)
    op.add_argument("--cyclicity", type=int, default=None)
    pp = sub.add_parser("project", parents=[common])
    pp.add_argument("--z", default=None)
    sub.add_parser("eigenspace", parents=[common])
    sub.add_parser("mdp", parents=[common])
    sub.add_parser("maxplus", parents=[common])
    return p


def run(argv=None):
    """Execute a command; returns ``(exit code, envelope)``."""
    args = build_parser().parse_args(argv)
    diag = {"warnings": [], "mode": None, "iterations": 0}
    code, outputs = EXIT_OK, {}
    try:
        with open(args.path, "rb") as fh:
            raw = fh.read()
    except OSError:
        raw = b""
    try:
        _, outputs = COMMANDS[args.command](args, diag)
    except _Fail as exc:
        code = exc.code
        payload = exc.args[0]
        outputs = payload if isinstance(payload, dict) else {}
        diag["error"] = payload if isinstance(payload, str) else "did not converge"
    except (InvalidEigenpair, ModelError, MdpError, MaxPlusError) as exc:
        code, diag["error"] = EXIT_INVALID, str(exc)
    except NotConverged as exc:
        code, diag["error"] = EXIT_NOCONV, str(exc)
    except CapExceeded as exc:
        code, diag["error"] = EXIT_CAP, str(exc)
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("path", "command")}
    digest = hashlib.sha256(raw + json.dumps(_js(flags), sort_keys=True).encode()).hexdigest()
    envelope = {"command": args.command, "inputs_digest": digest,
                "outputs": _js(outputs), "diagnostics": _js(diag)}
    return code, envelope


def main(argv=None) -> int:
    code, envelope = run(argv)
    json.dump(envelope, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")
    if code and "error" in envelope["diagnostics"]:
        print(f"error: {envelope['diagnostics']['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
