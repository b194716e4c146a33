"""Command-line front end.

Usage examples::

    specialkahler analyze catalog:paper-n1 --at 1 --at 2+i
    specialkahler transform model.skm matrix.txt --factor "z" --out new.skm
    specialkahler scan catalog:paper-n1 --box "0.1:3, -2:2" --samples 10000 --seed 0
    specialkahler cone catalog:paper-n1 --r 1 --theta 0 --at 1 --a-mode zero
    specialkahler catalog list | show NAME | export NAME [--out FILE]
    specialkahler selfcheck

A model argument is a file path or ``catalog:NAME``.  Exit codes: 0 success,
1 usage or parse error, 2 domain or precondition failure, 3 numerical
degeneracy.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .catalog import catalog_entries, catalog_get, check_entry
from .commands import DEFAULT_TOL, cmd_analyze, cmd_cone, cmd_scan, cmd_selfcheck, cmd_transform, report_exit_status
from .errors import (DimensionError, DomainError, ExprSyntaxError, FrameDegeneracyError, HomogeneityError,
                     ModelFileError, NotSymplecticError, PreconditionError, SingularPointError)
from .modelfile import load_model, parse_box, parse_complex

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_DEGENERATE = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _load(spec: str):
    if spec.startswith("catalog:"):
        try:
            return catalog_get(spec[len("catalog:"):]).model
        except KeyError as err:
            raise _UsageError(err.args[0]) from None
    try:
        return load_model(spec)
    except OSError as err:
        raise _UsageError(f"cannot read model file {spec!r}: {err.strerror}") from None


def _parse_point(text: str):
    try:
        return tuple(parse_complex(p) for p in text.split(","))
    except (ExprSyntaxError, ZeroDivisionError) as err:
        raise _UsageError(f"bad point {text!r}: {err}") from None


def _parse_boxes(values):
    if not values:
        return None
    try:
        return [parse_box(v) for v in values]
    except ValueError as err:
        raise _UsageError(str(err)) from None


def _command_echo(argv):
    return " ".join(["specialkahler", *argv])


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="specialkahler",
                                description="Special Kahler geometry: analysis, duality transforms, scans.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, points=True):
        sp.add_argument("model", help="model file or catalog:NAME")
        if points:
            sp.add_argument("--at", action="append", default=[], metavar="Z",
                            help="evaluation point, comma-separated coordinates (repeatable)")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL, help="residual tolerance")
        sp.add_argument("--format", choices=("table", "structured"), default="table")

    a = sub.add_parser("analyze", help="K, metric, N, constraints and prepotential existence")
    common(a)
    a.add_argument("--out", help="write the report here")

    t = sub.add_parser("transform", help="apply a symplectic matrix to a model")
    common(t)
    t.add_argument("matrix", help="whitespace-separated matrix file")
    t.add_argument("--factor", help="Kahler multiplier e^f(z) as an expression (local models)")
    t.add_argument("--name", help="name of the transformed model")
    t.add_argument("--out", help="write the transformed model file here (report goes to stdout)")

    s = sub.add_parser("scan", help="sample the positivity domain")
    common(s, points=False)
    s.add_argument("--box", action="append", default=[],
                   help="'re_lo:re_hi, im_lo:im_hi', one per coordinate (default: model's boxes)")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", help="write the report here")

    c = sub.add_parser("cone", help="cone metric over the special Kahler base")
    common(c)
    c.add_argument("--r", type=float, default=1.0)
    c.add_argument("--theta", type=float, default=0.0)
    c.add_argument("--a-mode", choices=("zero", "composite"), default="zero")
    c.add_argument("--out", help="write the report here")

    cat = sub.add_parser("catalog", help="built-in example models")
    cat.add_argument("action", choices=("list", "show", "export"))
    cat.add_argument("name", nargs="?")
    cat.add_argument("--out", help="export destination")

    sc = sub.add_parser("selfcheck", help="evaluate every catalog expected value")
    sc.add_argument("--tol", type=float, default=1.0, help="scale factor applied to the stored tolerances")
    sc.add_argument("--format", choices=("table", "structured"), default="table")
    sc.add_argument("--out", help="write the report here")
    return p


def _catalog(args):
    if args.action == "list":
        for e in catalog_entries():
            print(f"{e.name:22s} {e.flavor:6s} {e.provenance:10s} {e.summary}")
        return EXIT_OK
    if not args.name:
        raise _UsageError(f"catalog {args.action} needs a NAME")
    try:
        entry = catalog_get(args.name)
    except KeyError as err:
        raise _UsageError(err.args[0]) from None
    if args.action == "export":
        _emit(entry.to_text(), args.out)
        return EXIT_OK
    lines = [entry.to_text(), "# expected values"]
    for res in check_entry(entry):
        e = res.expected
        point = ", ".join(f"{c:g}" for c in e.point)
        status = "ok" if res.passed else "FAILED"
        lines.append(f"# {e.quantity:8s} at ({point})  [{e.provenance}]  error {res.error:.2e} "
                     f"(tol {e.tol:.0e}) {status}  {e.note}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _run(args, argv):
    echo = _command_echo(argv)
    if args.command == "catalog":
        return _catalog(args)
    if args.command == "selfcheck":
        rep = cmd_selfcheck(args.tol, command=echo)
        _emit(rep.render(args.format), args.out)
        return EXIT_OK if rep.summary["failures"] == 0 else EXIT_DEGENERATE
    desc = _load(args.model)
    if args.command == "analyze":
        rep = cmd_analyze(desc, [_parse_point(p) for p in args.at], args.tol, command=echo)
        _emit(rep.render(args.format), args.out)
        return report_exit_status(rep)
    if args.command == "transform":
        try:
            matrix = np.loadtxt(args.matrix, ndmin=2)
        except (OSError, ValueError) as err:
            raise _UsageError(f"cannot read matrix file {args.matrix!r}: {err}") from None
        rep, new = cmd_transform(desc, matrix, args.factor, [_parse_point(p) for p in args.at],
                                 args.tol, args.name, command=echo)
        sys.stdout.write(rep.render(args.format))
        if args.out:
            _emit(new.to_text(), args.out)
        else:
            sys.stdout.write("\n# transformed model\n" + new.to_text())
        return report_exit_status(rep)
    if args.command == "scan":
        try:
            rep = cmd_scan(desc, _parse_boxes(args.box), args.samples, args.seed, args.workers, args.tol,
                           command=echo)
        except ValueError as err:
            if isinstance(err, (DomainError, DimensionError)):
                raise
            raise _UsageError(str(err)) from None
        _emit(rep.render(args.format), args.out)
        return EXIT_OK
    if args.command == "cone":
        z = _parse_point(args.at[0]) if args.at else None
        rep = cmd_cone(desc, args.r, args.theta, z, args.a_mode, args.tol, command=echo)
        _emit(rep.render(args.format), args.out)
        return EXIT_OK
    raise _UsageError(f"unknown command {args.command}")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return _run(args, argv)
    except (_UsageError, ModelFileError, ExprSyntaxError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except NotSymplecticError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except (DomainError, PreconditionError, DimensionError, HomogeneityError, SingularPointError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except FrameDegeneracyError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
