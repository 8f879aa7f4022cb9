"""Command-line front end.

Exit codes: 0 success, 1 precondition/contract violation, 2 I/O or parse
error.  Standard output is deterministic: JSON with sorted keys, exact
rationals as strings, floats with 17 significant digits.
"""

import argparse
import json
import sys

from . import combinatorics, cumulants, diagrams, power_counting, variational
from .errors import DocumentError

BELL_CAP = 500


class UsageError(Exception):
    """Bad flags; maps to exit code 2 like argparse's own errors."""


def _dump(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _float(x):
    return format(x, ".17g")


def _read_json(path):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from None


def cmd_bell(args):
    if args.max < 0 or args.max > BELL_CAP:
        raise ValueError(f"--max must be in 0..{BELL_CAP}")
    values = combinatorics.bell_numbers(args.max)
    if args.format == "csv":
        return "n,bell_n\n" + "".join(f"{n},{b}\n" for n, b in enumerate(values))
    return _dump({"bell": [{"n": n, "bell_n": str(b)} for n, b in enumerate(values)]})


def cmd_cumulants(args):
    doc = _read_json(args.input)
    if not isinstance(doc, dict):
        raise DocumentError("moment table must be a JSON object")
    table = cumulants.MomentTable.from_json(doc)
    if args.method == "partition":
        return _dump(cumulants.cumulants_from_moments_partition(table).to_json())
    out = cumulants.cumulants_from_moments_series(table).to_json()
    if args.method == "both":
        d = cumulants.compare_cumulant_methods(table)
        out["discrepancy"] = None if d is None else {
            "index": list(d.index),
            "partition_value": str(d.partition_value),
            "series_value": str(d.series_value),
        }
    return _dump(out)


def analyze_diagram(diagram, sobolev_index=0, lattice_spacing=None):
    connected = diagrams.is_connected(diagram)
    return {
        "el": diagram.el,
        "connected": connected,
        "one_particle_irreducible":
            diagrams.is_one_particle_irreducible(diagram) if connected else None,
        "prime": diagrams.is_prime(diagram),
        "divergence": power_counting.divergence_report(
            diagram, sobolev_index, lattice_spacing).to_json() if connected else None,
    }


def cmd_diagram(args):
    doc = _read_json(args.input)
    if not isinstance(doc, dict):
        raise DocumentError("diagram must be a JSON object")
    diagram = diagrams.from_json(doc)
    if args.dot:
        return diagrams.to_dot(diagram)
    if args.analyze:
        return _dump(analyze_diagram(diagram, args.sobolev_index, args.lattice_spacing))
    return _dump(diagrams.to_json(diagram))


def cmd_identities(args):
    if args.check == "bell-egf":
        reports = [variational.check_bell_egf(args.order)]
    elif args.check == "2var":
        reports = variational.check_2var_identity(args.order)
    else:
        reports = [variational.check_2nvar_identity(args.n, args.order, args.min_order)]
    return _dump({"check": args.check, "reports": [r.to_json() for r in reports]})


def cmd_feynman(args):
    if args.sweep:
        rows = power_counting.feynman_sweep(args.lo, args.hi, args.size, args.points)
        lines = ["alpha,beta,value,reference,abs_error"]
        lines += [",".join(map(_float, (a, b) + tuple(r))) for a, b, r in rows]
        return "\n".join(lines) + "\n"
    if args.alpha is None or args.beta is None:
        raise UsageError("--alpha and --beta are required unless --sweep is given")
    r = power_counting.feynman_combine(args.alpha, args.beta, args.points)
    return _dump({"alpha": _float(args.alpha), "beta": _float(args.beta),
                  "points": args.points, "value": _float(r.value),
                  "reference": _float(r.reference), "abs_error": _float(r.abs_error)})


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rptkit", description="Exact RPT combinatorics, cumulants and power counting.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bell", help="table of Bell numbers B_0..B_n")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("cumulants", help="cumulants of a moment table")
    p.add_argument("--input", required=True, help="moment table JSON ('-' for stdin)")
    p.add_argument("--method", choices=("series", "partition", "both"), default="series")
    p.set_defaults(func=cmd_cumulants)

    p = sub.add_parser("diagram", help="read, analyze or draw a diagram")
    p.add_argument("--input", required=True, help="diagram JSON ('-' for stdin)")
    p.add_argument("--analyze", action="store_true")
    p.add_argument("--dot", action="store_true", help="emit Graphviz source instead")
    p.add_argument("--sobolev-index", default="0",
                   help="rational index shifting each loop variable (default 0)")
    p.add_argument("--lattice-spacing", default=None, help="annotation only")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("identities", help="audit generating-function identities")
    p.add_argument("--check", choices=("bell-egf", "2var", "2nvar"), required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--min-order", type=int, default=0)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("feynman", help="two-propagator Feynman parameter quadrature")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--points", type=int, default=power_counting.DEFAULT_POINTS)
    p.add_argument("--sweep", action="store_true", help="CSV over a log grid")
    p.add_argument("--lo", type=float, default=0.1)
    p.add_argument("--hi", type=float, default=10.0)
    p.add_argument("--size", type=int, default=20)
    p.set_defaults(func=cmd_feynman)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        out = args.func(args)
    except (DocumentError, OSError, UnicodeDecodeError, UsageError) as exc:
        print(f"rptkit: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"rptkit: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
