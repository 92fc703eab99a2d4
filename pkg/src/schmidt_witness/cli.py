"""Command-line front end.

Exit codes: 0 ok, 2 input error, 3 non-convergence under ``--strict``,
4 degenerate family.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import families, repro
from .geometry import (
    DegenerateFamilyError,
    beta_thresholds,
    classify_witness,
    entanglement_order,
    face_outside,
    witnesses_outside_face,
)
from .knorm import SolverConfig, knorm, min_knorm
from .linalg import EPS_PSD, HermitianOp, as_state
from .serialization import (
    atomic_write,
    load_json,
    operator_from_dict,
    operator_to_dict,
    subspace_from_dict,
)

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED, EXIT_DEGENERATE = 0, 2, 3, 4


class InputError(Exception):
    pass


def _solver_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("solver")
    g.add_argument("--restarts", type=int, default=64)
    g.add_argument("--max-iters", type=int, default=500)
    g.add_argument("--tol", type=float, default=1e-12, help="relative stopping tolerance")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--strict", action="store_true", help="exit 3 when the optimizer did not converge")
    p.add_argument("--format", choices=("json", "csv", "svg", "text"), default=None)
    p.add_argument("--output", "-o", help="write the result here instead of stdout")


def _source_flags(p: argparse.ArgumentParser, k_help: str):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", help="built-in constructor, e.g. max-entangled, antisym, rho3, omega")
    src.add_argument("--file", help="JSON matrix file")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--i", type=int, default=None, help="catalog index for omega / sigma families")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--k", type=int, default=None, help=k_help)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schmidt-witness",
                                     description="Operator k-norms and Schmidt number witness geometry.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("knorm", help="k-th operator norm (or its infimum with --min)")
    _source_flags(p, "Schmidt rank bound")
    p.add_argument("--min", action="store_true", help="infimum instead of supremum")
    _solver_flags(p)

    p = sub.add_parser("beta", help="k-blockpositivity thresholds of X_lambda")
    _source_flags(p, "family index (omega, tomiyama)")
    _solver_flags(p)

    p = sub.add_parser("classify", help="blockpositivity level and face location")
    _source_flags(p, "family index (omega, tomiyama)")
    _solver_flags(p)

    p = sub.add_parser("subspace", help="entanglement order and witnesses outside the face")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--span", help="comma separated catalog vectors, e.g. xi3,xi2")
    src.add_argument("--file", help="JSON basis file")
    p.add_argument("--perp", action="store_true", help="use the orthogonal complement")
    _solver_flags(p)

    p = sub.add_parser("repro", help="data and SVG for the figures")
    p.add_argument("--fig", type=int, choices=(2, 3, 4), required=True)
    p.add_argument("--plane", choices=("H1", "H2"), default=None, help="figure 2 only; both when omitted")
    p.add_argument("--rays", type=int, default=90)
    p.add_argument("--points", type=int, default=21, help="lambda grid size for figures 3 and 4")
    p.add_argument("--out-dir", default=".")
    _solver_flags(p)
    return parser


def _config(args) -> SolverConfig:
    try:
        return SolverConfig(args.restarts, args.max_iters, args.tol, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _operator(args) -> HermitianOp:
    if args.file:
        try:
            return operator_from_dict(load_json(args.file))
        except (OSError, ValueError, TypeError, KeyError) as exc:
            raise InputError(f"cannot read matrix from {args.file}: {exc}") from exc
    name = args.family.replace("-", "_")
    n = args.n
    m = args.m if args.m is not None else n
    kwargs = {}
    if name in ("omega", "tomiyama"):
        kwargs["k"] = args.k
        kwargs["i"] = args.i
    elif name in ("sigma", "rho"):
        if args.i is None:
            raise InputError(f"--family {args.family} needs --i")
        name = f"{name}{args.i}"
    if name in ("rho1_lambda", "rho2_lambda", "isotropic", "werner"):
        kwargs["lam"] = args.lam
    dim = families.QUTRITS if name in families.QUTRIT_FAMILIES else (m, n)
    try:
        return families.build(families.FamilySpec(name, dim, **kwargs))
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def _emit(args, payload: dict, text: str):
    fmt = args.format or "json"
    out = json.dumps(payload, indent=2) + "\n" if fmt == "json" else text.rstrip("\n") + "\n"
    if args.output:
        atomic_write(args.output, out)
    else:
        sys.stdout.write(out)


def cmd_knorm(args) -> int:
    op = _operator(args)
    cfg = _config(args)
    k = args.k if args.k is not None else 1
    try:
        op.dim.check_k(k)
        res = min_knorm(op, k, cfg) if args.min else knorm(as_state(op), k, cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = res.to_dict() | {"kind": "inf" if args.min else "sup"}
    _emit(args, payload, f"{'|rho|' if args.min else '||rho||'}_S({k}) = {res.value!r} ({res.method})")
    if args.strict and not res.converged:
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_beta(args) -> int:
    op = _operator(args)
    try:
        rho = as_state(op)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    th = beta_thresholds(rho, _config(args))
    lines = ["k  beta_minus  beta_plus"]
    for k, (lo, hi) in enumerate(zip(th.beta_minus, th.beta_plus), start=1):
        lines.append(f"{k}  {lo:.12g}  {hi:.12g}")
    lines.append(f"delta_minus = {th.delta_minus:.12g}, delta_plus = {th.delta_plus:.12g}")
    _emit(args, th.to_dict(), "\n".join(lines))
    return EXIT_OK


def _name_complement(E) -> str:
    perp = E.complement()
    if perp.dimension == 1:
        v = perp.basis[:, 0]
        for i in (1, 2, 3):
            if v.shape[0] == 9 and abs(abs(np.vdot(families.xi_vector(i), v)) - 1) < 1e-9:
                return f"xi{i}-perp"
    return f"dim E = {E.dimension}"


def cmd_classify(args) -> int:
    op = _operator(args)
    try:
        wc = classify_witness(op, _config(args))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = {"class": wc.to_dict()}
    text = wc.describe()
    if np.linalg.eigvalsh(op.matrix)[0] < -EPS_PSD:
        loc = face_outside(op)
        payload["face"] = loc.to_dict() | {"label": _name_complement(loc.range_subspace)}
        text += f"; outside face E = {_name_complement(loc.range_subspace)} (crossing {loc.crossing:.12g})"
    else:
        payload["face"] = None
        interior = np.linalg.eigvalsh(op.matrix)[0] > EPS_PSD
        text = f"state ({'interior' if interior else 'boundary'})" if wc.is_state else text
    _emit(args, payload, text)
    return EXIT_OK


def cmd_subspace(args) -> int:
    try:
        if args.span:
            names = [s.strip() for s in args.span.split(",") if s.strip()]
            E = families.catalog_subspace(*names, perp=args.perp)
        else:
            E = subspace_from_dict(load_json(args.file))
            E = E.complement() if args.perp else E
    except (OSError, ValueError, TypeError, KeyError) as exc:
        raise InputError(f"bad subspace: {exc}") from exc
    cfg = _config(args)
    order = entanglement_order(E, cfg)
    payload = {"dimension": E.dimension, "entanglement_order": order}
    text = f"dim {E.dimension}, exactly {order}-entangled" if order else f"dim {E.dimension}, contains a product vector"
    if E.dimension < E.ambient.mn:
        report = witnesses_outside_face(E, cfg)
        payload["face_report"] = report.to_dict()
        levels = ", ".join(map(str, report.admissible_levels)) or "none"
        text += f"; Schmidt number witnesses outside F_E: {levels}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_repro(args) -> int:
    cfg = _config(args)
    if not os.path.isdir(args.out_dir):
        raise InputError(f"output directory {args.out_dir} does not exist")
    files: dict[str, str] = {}
    if args.fig in (3, 4):
        if args.points < 2:
            raise InputError("--points must be at least 2")
        family = 1 if args.fig == 3 else 2
        grid = repro.default_grid(args.points)
        points = [p for k in (1, 2, 3) for p in repro.sweep_family(family, k, grid, cfg)]
        files[f"fig{args.fig}.csv"] = repro.sweep_csv(points)
        files[f"fig{args.fig}.svg"] = repro.curves_svg(f"||rho_{family}^lambda||_S(k), k = 1, 2, 3", points)
        summary = {"max_gap": max(p.abs_gap for p in points)}
    else:
        if args.rays < 3:
            raise InputError("--rays must be at least 3")
        planes = [args.plane] if args.plane else ["H1", "H2"]
        summary = {}
        for plane in planes:
            traces = {k: repro.bp_boundary_on_plane(plane, k, args.rays, cfg) for k in (1, 2, 3)}
            files[f"fig2_{plane}.csv"] = repro.plane_csv(traces)
            files[f"fig2_{plane}.svg"] = repro.plane_svg(plane, traces)
    # everything is computed before the first file is touched
    written = []
    for name, text in files.items():
        path = os.path.join(args.out_dir, name)
        atomic_write(path, text)
        written.append(path)
    payload = {"figure": args.fig, "files": written} | summary
    fmt = args.format or "text"
    out = json.dumps(payload, indent=2) if fmt == "json" else "\n".join(written)
    sys.stdout.write(out + "\n")
    return EXIT_OK


COMMANDS = {
    "knorm": cmd_knorm,
    "beta": cmd_beta,
    "classify": cmd_classify,
    "subspace": cmd_subspace,
    "repro": cmd_repro,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateFamilyError as exc:
        print(f"degenerate family: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


def export_operator(op: HermitianOp, path: str):
    """Write ``op`` in the JSON matrix format (helper for scripts and tests)."""
    atomic_write(path, json.dumps(operator_to_dict(op)) + "\n")


if __name__ == "__main__":
    sys.exit(main())
