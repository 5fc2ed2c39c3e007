"""Command-line front end.

Verbs: cone, hilbert, eff, mov, decompose, kappa, secant, logfano, verify.
Exit codes: 0 on success or a true verdict, 1 on a false verdict (table
mismatch, discrepancy <= -1, impossible decomposition), 2 on usage errors,
malformed input files or unsupported space parameters.

Divisor classes on the command line are space-separated integer rows
"d1 d2 m1 ... ms" where the m_i are the point multiplicities, so
"2 3 5 5 4 3 3 2" is 2H1 + 3H2 - 5E1 - 5E2 - 4E3 - 3E4 - 3E5 - 2E6.
Table output prints E-coefficients (the negatives of the multiplicities),
matching the stored tables.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import cone as cone_mod
from . import ineq, logfano, pipeline, secant
from .cone import ConeError, ConeFormatError, NonPointedError, RationalCone
from .decomp import DecompositionError, table_decompose, table_decompose_avoiding
from .lattice import BlowupSpace, DivisorClass, LatticeError

USAGE_ERROR = 2
VERDICT_FALSE = 1


class CliError(Exception):
    def __init__(self, message, code=USAGE_ERROR):
        super().__init__(message)
        self.code = code


def _parse_space(text: str, points: int) -> BlowupSpace:
    try:
        n, m = (int(t) for t in text.lower().split("x"))
        return BlowupSpace(n, m, points)
    except (ValueError, LatticeError) as exc:
        raise CliError(f"bad space {text!r}: {exc}")


def _parse_class(text: str, space: BlowupSpace) -> DivisorClass:
    try:
        vals = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise CliError(f"bad class row {text!r}: entries must be integers")
    if len(vals) != space.s + 2:
        raise CliError(f"class row needs {space.s + 2} entries (d1 d2 m1..m{space.s})")
    return DivisorClass(vals[0], vals[1], tuple(vals[2:]))


def _parse_index_set(text: str):
    try:
        return tuple(sorted({int(t) for t in text.replace(",", " ").split()}))
    except ValueError:
        raise CliError(f"bad index set {text!r}")


def _read_cone(path: str) -> RationalCone:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    if text.lstrip().startswith("{"):
        return cone_mod.cone_from_json(text)
    return cone_mod.parse_cone_text(text)


def _emit(args, text_out: str, json_obj) -> None:
    if getattr(args, "format", "table") == "json":
        print(json.dumps(json_obj, sort_keys=True))
    else:
        print(text_out)


# Verbs ---------------------------------------------------------------------------

def _cmd_cone(args) -> int:
    cone = _read_cone(args.input)
    if args.to in ("rays", "both") and cone.generators is None:
        cone = cone.with_generators()
    if args.to in ("facets", "both") and cone.inequalities is None:
        cone = cone.with_inequalities()
    if args.to == "rays" and cone.generators is None:
        cone = cone.with_generators()
    if args.to == "facets" and cone.inequalities is None:
        cone = cone.with_inequalities()
    out_text = cone_mod.format_cone_text(cone)
    if args.output:
        Path(args.output).write_text(out_text)
    if args.format == "json":
        print(cone_mod.cone_to_json(cone))
    else:
        sys.stdout.write(out_text)
    return 0


def _cmd_hilbert(args) -> int:
    cone = _read_cone(args.input)
    basis = cone_mod.hilbert_basis(cone)
    if args.format == "json":
        print(json.dumps({"dim": cone.ambient_dim,
                          "hilbert_basis": [list(v) for v in basis.elements]}))
    else:
        print(f"# Hilbert basis: {len(basis)} elements")
        for v in basis.elements:
            print(" ".join(str(x) for x in v))
    return 0


def _eff_mov_cone(args, want: str):
    space = _parse_space(args.space, args.points)
    key = (space.n, space.m, space.s)
    note = None
    if key == (2, 3, 5):
        res = pipeline.cone_method(pipeline.x235_config())
        cone = res.effective if want == "eff" else res.movable_candidate
    elif key == (3, 4, 6):
        res = pipeline.cone_method(pipeline.x346_config())
        if want == "eff":
            cone = res.effective
        else:
            cone = res.movable_candidate
            note = ("# candidate movable cone (upper bound from the inequality"
                    " bundle; no stored table)")
    elif space.m == space.n + 1 and space.s == space.n + 2:
        rows = (pipeline.eff_inequalities_n_plus_2(space.n) if want == "eff"
                else pipeline.mov_inequalities_n_plus_2(space.n))
        cone = cone_mod.rays_from_inequalities(rows, space.rank)
    else:
        raise CliError(f"unsupported space {space} for {want}")
    return space, cone, note


def _cmd_eff(args, want="eff") -> int:
    space, cone, note = _eff_mov_cone(args, want)
    orbits = pipeline.orbit_table(cone.generators)
    lines = pipeline.render_orbit_table(
        space.s, orbits,
        note=f"# {len(orbits)} orbits, {len(cone.generators)} rays"
             " (rows read up to permutation)")
    if note:
        lines += "\n" + note
    _emit(args, lines, {
        "space": f"{space.n}x{space.m}", "points": space.s, "kind": want,
        "orbits": [list(r) for r in orbits], "rays": len(cone.generators),
        "note": note})
    return 0


def _cmd_mov(args) -> int:
    return _cmd_eff(args, want="mov")


def _cmd_decompose(args) -> int:
    space = _parse_space(args.space, args.points)
    D = _parse_class(getattr(args, "class"), space)
    try:
        if args.avoid:
            avoid = _parse_class(args.avoid, space)
            dec = table_decompose_avoiding(space, D, avoid)
        else:
            dec = table_decompose(space, D)
    except DecompositionError as exc:
        print(f"decomposition impossible: {exc}", file=sys.stderr)
        return VERDICT_FALSE
    lines = [f"{m} x {cls}" for cls, m in dec.parts]
    if args.table and dec.table is not None:
        lines.append(dec.table.render())
    _emit(args, "\n".join(lines), dec.to_json_dict())
    return 0


_KAPPA_FAMILIES = ("exceptional", "span", "hyperplane", "cone", "bisecant",
                   "join", "effectivity", "effectivity-x346")


def _cmd_kappa(args) -> int:
    space = _parse_space(args.space, args.points)
    I = _parse_index_set(args.set) if args.set else ()
    try:
        if args.family == "exceptional":
            formulas = [ineq.kappa_exceptional(space, args.i)]
        elif args.family == "span":
            formulas = [ineq.kappa_bilinear_span(space, I)]
        elif args.family == "hyperplane":
            formulas = [ineq.kappa_pullback_hyperplane(space, I)]
        elif args.family == "cone":
            formulas = [ineq.kappa_pullback_cone(space, args.t, I)]
        elif args.family == "bisecant":
            formulas = [ineq.kappa_bisecant(space, args.k)]
        elif args.family == "join":
            formulas = [ineq.kappa_bilinear_join(space, args.k, I)]
        elif args.family == "effectivity":
            formulas = ineq.effectivity(space)
        elif args.family == "effectivity-x346":
            formulas = ineq.effectivity_x346(space)
        else:
            raise CliError(f"unknown family {args.family!r}; known: {_KAPPA_FAMILIES}")
    except ineq.FormulaError as exc:
        raise CliError(str(exc))
    D = _parse_class(getattr(args, "class"), space) if getattr(args, "class") else None
    out = []
    for f in formulas:
        d = (f.functional if isinstance(f, ineq.KappaFormula) else f).to_json_dict()
        if isinstance(f, ineq.KappaFormula):
            d["exact"] = f.exact
        if D is not None:
            d["value"] = ineq.evaluate(f, D)
            if d["sense"] == "kappa":
                d["kappa"] = ineq.kappa(f, D)
        out.append(d)
    if args.format == "json":
        print(json.dumps(out if len(out) > 1 else out[0], sort_keys=True))
    else:
        for d in out:
            line = f"{d['label']}: coeffs {d['coeffs']} ({d['sense']})"
            if "value" in d:
                line += f" value={d['value']}"
                if "kappa" in d:
                    line += f" kappa={d['kappa']}"
            print(line)
    return 0


def _cmd_secant(args) -> int:
    try:
        report = secant.secant_report(args.n, check_vanishing=not args.skip_vanishing,
                                      guard=args.guard)
    except secant.SecantError as exc:
        raise CliError(str(exc))
    print(json.dumps(report, sort_keys=True))
    ok = report["minors_vanish_on_curve"]
    if report["square"]:
        ok = ok and report["telescoping_ok"]
        if report["vanishing_order"] is not None:
            ok = ok and report["vanishing_order"] == report["k"]
    return 0 if ok else VERDICT_FALSE


def _cmd_logfano(args) -> int:
    if args.family == "n+2":
        if args.n is None:
            raise CliError("--family n+2 needs --n")
        cert = logfano.certificate_n_plus_2(args.n)
    elif args.family == "x235":
        eps = args.eps or ["1/2", "10/11", "1/10"]
        if len(eps) != 3:
            raise CliError("--eps needs three fractions")
        try:
            e1, e2, e3 = (Fraction(e) for e in eps)
        except (ValueError, ZeroDivisionError):
            raise CliError(f"bad --eps values {eps}")
        try:
            cert = logfano.x235_certificate(e1, e2, e3)
        except logfano.CertificateError as exc:
            raise CliError(str(exc))
    else:
        raise CliError(f"unknown family {args.family!r}; known: n+2, x235")
    if args.format == "json":
        print(json.dumps(cert.to_json_dict(), sort_keys=True))
    else:
        print(f"space: {cert.space}")
        print(f"boundary: {cert.boundary.label}")
        for tag, v in cert.ledger.entries:
            print(f"discrep({tag}) = {v}")
        for tag, v in cert.ampleness:
            print(f"(-K-Delta).({tag}) = {v}")
        print(f"log Fano certificate valid: {cert.verdict}")
    return 0 if cert.verdict else VERDICT_FALSE


def _cmd_verify(args) -> int:
    try:
        report = pipeline.verify_table(args.table, n=args.n, allow_large=args.allow_large)
    except pipeline.PipelineError as exc:
        raise CliError(str(exc))
    if args.format == "json":
        print(json.dumps(report.to_json_dict(), sort_keys=True))
    else:
        print(f"{report.table_id}: {'MATCH' if report.matched else 'MISMATCH'}")
        if not report.matched:
            for r in report.missing:
                print("missing:", " ".join(map(str, r)))
            for r in report.extra:
                print("extra:  ", " ".join(map(str, r)))
    return 0 if report.matched else VERDICT_FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bicones",
        description="Exact cones, base-locus bounds and log Fano certificates "
                    "for point blow-ups of P^n x P^m.")
    sub = p.add_subparsers(dest="verb", required=True)

    def add_format(q, default="table"):
        q.add_argument("--format", choices=("table", "json"), default=default)

    q = sub.add_parser("cone", help="convert between cone descriptions")
    q.add_argument("--input", required=True)
    q.add_argument("--to", choices=("rays", "facets", "both"), default="both")
    q.add_argument("--output")
    add_format(q, default="table")
    q.set_defaults(func=_cmd_cone)

    q = sub.add_parser("hilbert", help="Hilbert basis of a pointed cone")
    q.add_argument("--input", required=True)
    add_format(q)
    q.set_defaults(func=_cmd_hilbert)

    for name, fn, hlp in (("eff", _cmd_eff, "effective cone table"),
                          ("mov", _cmd_mov, "movable cone table")):
        q = sub.add_parser(name, help=hlp)
        q.add_argument("--space", required=True, help="e.g. 2x3")
        q.add_argument("--points", type=int, required=True)
        add_format(q)
        q.set_defaults(func=fn)

    q = sub.add_parser("decompose", help="table decomposition of a divisor class")
    q.add_argument("--space", required=True)
    q.add_argument("--points", type=int, required=True)
    q.add_argument("--class", required=True, help='row "d1 d2 m1 ... ms"')
    q.add_argument("--avoid", help="fixed class to avoid, same row format")
    q.add_argument("--table", action="store_true", help="also print the fill table")
    add_format(q)
    q.set_defaults(func=_cmd_decompose)

    q = sub.add_parser("kappa", help="base-locus bounds and effectivity inequalities")
    q.add_argument("--space", required=True)
    q.add_argument("--points", type=int, required=True)
    q.add_argument("--family", required=True, help=", ".join(_KAPPA_FAMILIES))
    q.add_argument("--i", type=int, help="point index (exceptional)")
    q.add_argument("--k", type=int, help="secant index (bisecant, join)")
    q.add_argument("--t", type=int, help="secant-cone parameter (cone)")
    q.add_argument("--set", help="index set, e.g. 1,2,3")
    q.add_argument("--class", help="evaluate on this divisor row")
    add_format(q, default="json")
    q.set_defaults(func=_cmd_kappa)

    q = sub.add_parser("secant", help="determinantal checks for bilinear secants")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--skip-vanishing", action="store_true")
    q.add_argument("--guard", type=int, default=8,
                   help="largest n for which the vanishing order is attempted")
    q.set_defaults(func=_cmd_secant)

    q = sub.add_parser("logfano", help="log Fano certificates")
    q.add_argument("--family", required=True, help="n+2 or x235")
    q.add_argument("--n", type=int)
    q.add_argument("--eps", nargs="*", help="three fractions for x235")
    add_format(q)
    q.set_defaults(func=_cmd_logfano)

    q = sub.add_parser("verify", help="recompute a stored table and diff it")
    q.add_argument("table", help="x235-eff, x235-mov, x346-eff, eff-n+2, mov-n+2")
    q.add_argument("--n", type=int)
    q.add_argument("--allow-large", action="store_true")
    add_format(q)
    q.set_defaults(func=_cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ConeFormatError as exc:
        print(f"error: malformed cone file: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (NonPointedError, ConeError, LatticeError, ineq.FormulaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
