"""Command line interface.

Exit codes: 0 success, 2 parse error, 3 precondition violation, 4 resource
cap or timeout, 5 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

from . import annihilator, bfunction, catalog, cohomology
from .core import WeightSystem, format_rational
from .errors import ParseError, PreconditionError, SwhbfError
from .grammar import parse_poly, parse_rational
from .groebner import Limits
from .pbw import PBWRing

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_RESOURCE, EXIT_INCONSISTENT = 0, 2, 3, 4, 5


def _root_json(roots):
    return [{"num": r.numerator, "den": r.denominator} for r in roots]


def _add_poly_args(p):
    p.add_argument("--vars", required=True, help="comma separated variables, e.g. x,y,z")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("-f", dest="poly", help="polynomial text")
    src.add_argument("--file", help="file holding the polynomial")


def _add_common(p):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--order", help='block order, e.g. "deglex(dx,dy) >> deglex(y,x) >> lex(s)"')
    p.add_argument("--degree-cap", type=int, default=cohomology.DEFAULT_DEGREE_CAP)
    p.add_argument("--kmax", type=int, default=2)
    p.add_argument("--budget", type=float, default=None, help="time limit in seconds")
    p.add_argument("-v", "--verbose", action="count", default=0)


def _weights(p, required=True):
    hint = "" if required else " (optional; selects the weighted elimination order)"
    p.add_argument("--wdeg", type=int, required=required, help="weighted degree d" + hint)
    p.add_argument("--weights", required=required, help="comma separated weights" + hint)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="swhbf", description="b-functions of hypersurface singularities")
    sub = ap.add_subparsers(dest="cmd", required=True)
    for name, helptext in [
        ("ann", "basis of Ann(f^s)"),
        ("global", "roots of the global b-function"),
        ("global-reduced", "roots of the global reduced b-function"),
        ("local", "local reduced b-function at the origin via support filtering"),
        ("milnor", "Milnor number at the origin"),
    ]:
        p = sub.add_parser(name, help=helptext)
        _add_poly_args(p)
        _add_common(p)
        if name != "milnor":
            _weights(p, required=False)
    p = sub.add_parser("local-swh", help="local b-function of a semi-weighted homogeneous germ")
    _add_poly_args(p)
    _add_common(p)
    _weights(p)
    p.add_argument("--jobs", type=int, default=1)
    p = sub.add_parser("cohom", help="local cohomology solutions for a certified root")
    _add_poly_args(p)
    _add_common(p)
    p.add_argument("--gamma", required=True)
    _weights(p, required=False)
    p = sub.add_parser("poincare", help="Poincaré polynomial of a weight type")
    _add_common(p)
    _weights(p)
    p = sub.add_parser("verify", help="check a catalog entry against its expected roots")
    _add_common(p)
    p.add_argument("--entry", required=True)
    p.add_argument("--stratum", type=int, action="append")
    p.add_argument("--jobs", type=int, default=1)
    return ap


def _read_poly(args):
    names = [v.strip() for v in args.vars.split(",") if v.strip()]
    text = args.poly
    if text is None:
        try:
            with open(args.file) as fh:
                text = fh.read()
        except OSError as exc:
            raise PreconditionError(f"cannot read {args.file}: {exc}") from None
    return text.strip(), parse_poly(text, names)


def _ws(args) -> WeightSystem:
    try:
        w = tuple(int(x) for x in args.weights.split(","))
    except ValueError:
        raise ParseError(f"bad weight list {args.weights!r}") from None
    return WeightSystem(args.wdeg, w)


def _opt_ws(args) -> Optional[WeightSystem]:
    if args.wdeg is None and args.weights is None:
        return None
    if args.wdeg is None or args.weights is None:
        raise PreconditionError("--wdeg and --weights go together")
    return _ws(args)


def _limits(args) -> Optional[Limits]:
    return Limits.with_budget(args.budget) if args.budget else None


def _emit(args, payload: dict, text_lines: List[str], out):
    if args.json:
        out.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def _payload(args, text, kind, roots=None, dims=None, milnor=None, **diag):
    return {
        "input": text,
        "vars": args.vars.split(",") if getattr(args, "vars", None) else [],
        "kind": kind,
        "roots": _root_json(roots) if roots is not None else [],
        "dims": {format_rational(k): v for k, v in dims.items()} if dims else {},
        "milnor": milnor,
        "diagnostics": diag,
    }


def _fmt_roots(roots) -> str:
    return "{" + ", ".join(format_rational(r) for r in roots) + "}"


def run(args, out) -> int:
    cmd = args.cmd
    lim = _limits(args)
    if cmd == "poincare":
        ws = _ws(args)
        P = bfunction.poincare_polynomial(ws)
        mu = int(P(1))
        payload = _payload(args, str(ws), cmd, bfunction.wh_bfunction_roots(ws), None, mu,
                           polynomial=str(P))
        _emit(args, payload, [f"P(t) = {P}", f"P(1) = {mu}"], out)
        return EXIT_OK
    if cmd == "verify":
        rep = catalog.verify_entry(args.entry, args.stratum, args.budget, jobs=args.jobs,
                                   kmax=args.kmax)
        payload = {"input": args.entry, "vars": list(catalog.get_entry(args.entry).variables),
                   "kind": cmd, "roots": [], "dims": {}, "milnor": None,
                   "diagnostics": rep.to_dict()}
        lines = [f"{args.entry}: {'PASS' if rep.passed else 'FAIL'}"
                 f" (weight-type check {'ok' if rep.f0_check else 'FAILED'})"]
        for o in rep.outcomes:
            pt = ",".join(format_rational(v) for v in o.point)
            lines.append(f"  stratum {o.stratum} [{o.label}] at ({pt}): {o.status}"
                         f" {o.seconds:.1f}s {o.message}".rstrip())
            if o.missing or o.unexpected:
                lines.append(f"    missing {_fmt_roots(o.missing)} unexpected {_fmt_roots(o.unexpected)}")
        for d in rep.discrepancies:
            lines.append(f"  note: printed {d['printed']} recomputed {', '.join(d['recomputed'])}")
        _emit(args, payload, lines, out)
        return EXIT_OK if rep.passed else EXIT_INCONSISTENT
    text, f = _read_poly(args)
    ring = PBWRing(f.vars)
    order = ring.order(args.order) if args.order else None
    if cmd == "ann":
        gens = annihilator.ann_fs(f, order, weights=_opt_ws(args), limits=lim)
        strs = [g.to_string() for g in gens]
        _emit(args, _payload(args, text, cmd, basis=strs), strs, out)
        return EXIT_OK
    if cmd == "milnor":
        mu = cohomology.milnor_number(f, args.degree_cap)
        _emit(args, _payload(args, text, cmd, milnor=mu), [str(mu)], out)
        return EXIT_OK
    if cmd in ("global", "global-reduced"):
        fn = bfunction.global_bfunction if cmd == "global" else bfunction.global_reduced_bfunction
        roots = fn(f, order=order, limits=lim, weights=_opt_ws(args))
        _emit(args, _payload(args, text, cmd, roots), [_fmt_roots(roots)], out)
        return EXIT_OK
    if cmd == "local":
        roots = bfunction.local_bfunction_via_support(f, degree_cap=args.degree_cap, limits=lim,
                                                      weights=_opt_ws(args))
        _emit(args, _payload(args, text, cmd, roots), [_fmt_roots(roots)], out)
        return EXIT_OK
    if cmd == "local-swh":
        res = bfunction.local_bfunction_swh(f, _ws(args), args.kmax, degree_cap=args.degree_cap,
                                            limits=lim, jobs=args.jobs)
        lines = [f"roots: {_fmt_roots(res.roots)}",
                 "dims: " + ", ".join(f"{format_rational(r)}:{res.dims[r]}" for r in res.roots),
                 f"milnor: {res.milnor}"]
        payload = _payload(args, text, cmd, res.roots, res.dims, res.milnor,
                           tested=[format_rational(g) for g in res.tested])
        _emit(args, payload, lines, out)
        return EXIT_OK
    if cmd == "cohom":
        gamma = parse_rational(args.gamma)
        ws = _opt_ws(args)
        ann = annihilator.ann_fs(f, weights=ws, limits=lim)
        if order is None and ws is not None:
            order = ring.weighted_bfunction_order(ws)
        cert = bfunction.certify_root(ann, f, gamma, order=order, limits=lim)
        if not cert.is_factor:
            raise PreconditionError(f"s - ({format_rational(gamma)}) is not a factor of the reduced b-function")
        B = cohomology.cohomology_solution_space(f, gamma, cert, degree_cap=args.degree_cap)
        strs = [c.to_string(B.names) for c in B.classes]
        payload = _payload(args, text, cmd, None, None, None, gamma=format_rational(gamma),
                           basis=strs, dimension=len(strs),
                           origin_in_support=cert.origin_in_support)
        _emit(args, payload, [f"dim = {len(strs)}"] + strs, out)
        return EXIT_OK
    raise PreconditionError(f"unknown command {cmd}")  # pragma: no cover


def _glue_gamma(argv: List[str]) -> List[str]:
    # "-5/6" looks like an option to argparse, so bind it to --gamma up front
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--gamma" and i + 1 < len(argv):
            out.append("--gamma=" + argv[i + 1])
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    argv = _glue_gamma(list(sys.argv[1:] if argv is None else argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    level = logging.WARNING - 10 * min(getattr(args, "verbose", 0), 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args, out)
    except SwhbfError as exc:
        kind = type(exc).__name__
        if getattr(args, "json", False):
            out.write(json.dumps({"error": kind, "message": str(exc),
                                  "exit_code": exc.exit_code}) + "\n")
        else:
            sys.stderr.write(f"swhbf: {kind}: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
