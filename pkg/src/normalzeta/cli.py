"""Command-line entry point: ``normalzeta <verb> ...``.

Exit status is 0 when everything requested succeeded and every comparison
or verification passed, 1 when a comparison or verification failed, 2 for
bad input (unknown group, invalid prime, parse errors) and 3 when the
oracle budget would be exceeded.
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys

from . import catalog as zcat
from .cones import format_report, verify_gnp8
from .exactmath import SeriesError, series_expand
from .fppoints import (
    BadPrimeError,
    ParseError,
    QuadraticForm,
    is_prime,
    parse_poly,
    parse_system,
    projective_count_bruteforce,
    quadric_point_count_closed,
    root_count_mod_p,
)
from .lattice import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    ideal_coefficients_full,
    ideal_coefficients_reduced,
)
from .liering import PresentationError, catalog_lookup, load_presentation
from .porc import InsufficientData, PrimeSeries, cubic_series, quadric_series, roots_series, scan

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


_GROUP_RE = re.compile(r"^([A-Za-z_]\w*)(?:\(([-\d,\s]*)\))?$")


def resolve_group(name_or_path: str):
    """Group name such as ``g42(0,1)`` or a presentation file.

    Returns (presentation, closed-form name or None, params).
    """
    if os.path.isfile(name_or_path):
        with open(name_or_path) as fh:
            P = load_presentation(fh.read(), os.path.basename(name_or_path))
        return P, None, ()
    m = _GROUP_RE.match(name_or_path.strip())
    if not m:
        raise InputError(f"cannot read group {name_or_path!r} (not a file, not a catalog name)")
    name = m.group(1)
    params = tuple(int(x) for x in m.group(2).split(",") if x.strip()) if m.group(2) else ()
    try:
        P = catalog_lookup(name, *params)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc).strip('"')) from None
    return P, name, params


def _closed_form(name, params):
    if name is None:
        return None
    try:
        return zcat.formula(name, *params)
    except KeyError:
        return None


def _check_prime(p: int):
    if not is_prime(p):
        raise InputError(f"{p} is not prime")


def cmd_zeta(args, out) -> int:
    _check_prime(args.p)
    P, name, params = resolve_group(args.group)
    if args.K < 0:
        raise InputError("K must be >= 0")
    cf = _closed_form(name, params)

    def from_formula():
        if cf is None:
            raise InputError(f"no closed form stored for {args.group}")
        try:
            return series_expand(zcat.specialize(cf, args.p), args.p, args.K)
        except zcat.InvalidPrime as exc:
            raise InputError(str(exc)) from None

    def full():
        return ideal_coefficients_full(P, args.p, args.K, budget=args.budget, threads=args.threads).a

    label = P.name or args.group
    if args.method == "formula":
        cols, names = [from_formula()], ["formula"]
    elif args.method == "oracle-reduced":
        cols, names = [ideal_coefficients_reduced(P, args.p, args.K).a], ["oracle-reduced"]
    elif args.method == "oracle-full":
        cols, names = [full()], ["oracle-full"]
    else:
        ref = ideal_coefficients_reduced(P, args.p, args.K).a
        if cf is not None:
            cols, names = [from_formula(), ref], ["formula", "oracle-reduced"]
        else:
            cols, names = [full(), ref], ["oracle-full", "oracle-reduced"]

    out.write(f"# group={label} p={args.p} K={args.K} method={args.method}\n")
    if len(cols) == 1:
        for k, v in enumerate(cols[0]):
            out.write(f"{k}\t{v}\n")
        return EXIT_OK
    a, b = cols
    out.write(f"# k\t{names[0]}\t{names[1]}\tDIFF\n")
    for k in range(args.K + 1):
        out.write(f"{k}\t{a[k]}\t{b[k]}\t{a[k] - b[k]}\n")
    same = a == b
    out.write(f"# {'MATCH' if same else 'MISMATCH'}\n")
    return EXIT_OK if same else EXIT_FAIL


def cmd_points(args, out) -> int:
    _check_prime(args.p)
    if args.mode == "roots":
        f = parse_poly(args.system, 1)
        out.write(f"{root_count_mod_p(f, args.p)}\n")
        return EXIT_OK
    polys = parse_system(args.system)
    if args.mode == "quadric-closed":
        if len(polys) != 1:
            raise InputError("quadric-closed takes a single quadratic form")
        try:
            w = QuadraticForm.from_poly(polys[0])
            n = quadric_point_count_closed(w, args.p)
        except (BadPrimeError, ValueError) as exc:
            raise InputError(str(exc)) from None
        out.write(f"{n}\n")
        return EXIT_OK
    try:
        n = projective_count_bruteforce(polys, args.p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.write(f"{n}\n")
    return EXIT_OK


def _read_series(path: str) -> PrimeSeries:
    pairs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InputError(f"{path}:{lineno}: expected 'p value'")
            pairs.append((int(parts[0]), int(parts[1])))
    return PrimeSeries.of(pairs)


def series_for_source(source: str, pmax: int) -> PrimeSeries:
    if source == "cubic":
        return cubic_series(pmax)
    if source.startswith("roots-of:"):
        return roots_series(source[len("roots-of:"):], pmax)
    if source.startswith("quadric:"):
        return quadric_series(source[len("quadric:"):], pmax)
    path = source[len("file:"):] if source.startswith("file:") else source
    if os.path.isfile(path):
        return _read_series(path)
    raise InputError(f"unknown series source {source!r}")


def cmd_porc_scan(args, out) -> int:
    if args.pmax < 2:
        raise InputError("pmax must be at least 2")
    series = series_for_source(args.source, args.pmax)
    try:
        rep = scan(series, args.Nmax, args.Dmax)
    except InsufficientData as exc:
        raise InputError(f"insufficient data: {exc}") from None
    out.write(rep.to_tsv())
    return EXIT_OK


def cmd_verify_cone(args, out) -> int:
    if args.d < 3:
        raise InputError("d must be >= 3")
    results = verify_gnp8(args.d)
    out.write(f"# verify-cone d={args.d}\n")
    out.write(format_report(results))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def cmd_catalog(args, out) -> int:
    out.write(zcat.catalog_tsv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="normalzeta", description="Ideal zeta functions of class-2 nilpotent Lie rings.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="verb", required=True)

    z = sub.add_parser("zeta", help="coefficients a_{p^k} of the local ideal zeta function")
    z.add_argument("group", help="catalog name, e.g. gnp8 or g42(0,1), or a presentation file")
    z.add_argument("--p", type=int, required=True)
    z.add_argument("--K", type=int, required=True)
    z.add_argument("--method", choices=["formula", "oracle-reduced", "oracle-full", "compare"], default="compare")
    z.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    z.add_argument("--threads", type=int, default=None)
    z.set_defaults(func=cmd_zeta)

    pt = sub.add_parser("points", help="F_p-point counts")
    pt.add_argument("system", help="polynomials separated by ';'")
    pt.add_argument("--p", type=int, required=True)
    pt.add_argument("--mode", choices=["brute", "quadric-closed", "roots"], default="brute")
    pt.set_defaults(func=cmd_points)

    ps = sub.add_parser("porc-scan", help="search for a PORC fit of a prime-indexed series")
    ps.add_argument("--source", required=True, help="cubic, roots-of:<poly>, quadric:<form> or a file of 'p value' lines")
    ps.add_argument("--pmax", type=int, default=1000)
    ps.add_argument("--Nmax", type=int, default=12)
    ps.add_argument("--Dmax", type=int, default=1)
    ps.set_defaults(func=cmd_porc_scan)

    vc = sub.add_parser("verify-cone", help="check the gnp8 cone computation")
    vc.add_argument("--d", type=int, default=5)
    vc.set_defaults(func=cmd_verify_cone)

    ct = sub.add_parser("catalog", help="list catalog groups")
    ct.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, ParseError, PresentationError, SeriesError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
