"""Command-line front end: ``linkform <subcommand> ...``.

Every subcommand prints a JSON report on stdout.  Reports contain no clock
readings unless ``--timing`` is given, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from typing import Sequence

from . import __version__
from .errors import InvalidInput, LinkformError, PreconditionError
from .forms import classify, direct_sum, from_matrix, negate
from .knots import Abelian1, Metabelian, blanchfield, hkl_sweep
from .laurent import Mode
from .serialize import (
    decomposition_to_json,
    dumps,
    form_from_json,
    form_to_json,
    jumps_to_json,
    load_json,
    matrix_from_json,
    parse_root,
    root_to_json,
    signature_csv,
    witt_to_json,
    write_atomic,
)
from .signatures import (
    averaged_signature,
    crosscheck_matrix,
    is_representable_complex,
    jumps,
    sample_grid,
    signature_function,
    witt_normal_form,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_PRECONDITION = 3

CROSSCHECK_GRID = 48


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _digest(*paths: str) -> str:
    h = hashlib.sha256()
    for p in paths:
        try:
            with open(p, "rb") as fh:
                h.update(fh.read())
        except OSError as exc:
            raise InvalidInput(f"cannot read {p}: {exc.strerror}") from exc
    return h.hexdigest()


def _report(command: str, payload: dict, inputs: Sequence[str] = ()) -> dict:
    out = {"command": command, "version": __version__, "result": payload}
    if inputs:
        out["input_sha256"] = _digest(*inputs)
    return out


def _load_form(path: str):
    return form_from_json(load_json(path))


def cmd_classify(args) -> dict:
    d = classify(_load_form(args.input))
    body = decomposition_to_json(d)
    if args.out:
        write_atomic(args.out, dumps(body))
    return _report("classify", body, [args.input])


def cmd_signature(args) -> dict:
    d = classify(_load_form(args.input))
    table = jumps(d)
    payload = {"decomposition": decomposition_to_json(d), "jump_table": jumps_to_json(table)}
    if args.at:
        root = parse_root(args.at)
        payload["at"] = {
            "root": root_to_json(root),
            "sigma": signature_function(d, root, table),
            "sigma_avg": str(averaged_signature(d, root, table)),
        }
        samples, grid = [root], None
    else:
        if args.grid < 1:
            raise InvalidInput("--grid needs a positive sample count")
        samples, grid = sample_grid(args.grid), args.grid
        payload["grid"] = grid
    if args.csv:
        write_atomic(args.csv, signature_csv(d, samples, grid))
        payload["csv"] = args.csv
    elif grid:
        payload["rows"] = [
            {"num": r.num * (grid // r.den), "den": grid, "sigma": signature_function(d, r, table),
             "sigma_avg": str(averaged_signature(d, r, table))}
            for r in samples
        ]
    return _report("signature", payload, [args.input])


def cmd_witt(args) -> dict:
    Fa = _load_form(args.a)
    inputs = [args.a]
    if args.b:
        Fb = _load_form(args.b)
        inputs.append(args.b)
        if Fa.mode != Fb.mode:
            raise InvalidInput("forms of different modes cannot be compared")
        Fa = direct_sum(Fa, negate(Fb))
    w = witt_normal_form(classify(Fa))
    payload = {"witt_class": witt_to_json(w)}
    if args.b:
        payload["witt_equivalent"] = w.is_zero()
    if args.metabolic or not args.b:
        payload["metabolic"] = w.is_zero()
    return _report("witt", payload, inputs)


def cmd_represent_check(args) -> dict:
    A = matrix_from_json(load_json(args.matrix))
    d = classify(from_matrix(A, Mode.COMPLEX))
    report = crosscheck_matrix(d, A, sample_grid(CROSSCHECK_GRID))
    payload = {
        "decomposition": decomposition_to_json(d),
        "total_jump": jumps(d).total(),
        "representable": is_representable_complex(d),
        "crosscheck_samples": CROSSCHECK_GRID,
        "crosscheck_ok": report.ok,
        "crosscheck_failures": [
            {
                "root": root_to_json(row["root"]),
                "sigma": row["sigma"],
                "matrix_sigma": row["matrix_sigma"],
                "sigma_avg": str(row["sigma_avg"]),
                "matrix_sigma_avg": str(row["matrix_sigma_avg"]),
            }
            for row in report.failures
        ],
    }
    return _report("represent-check", payload, [args.matrix])


def cmd_torus_blanchfield(args) -> dict:
    if args.k < 1:
        raise InvalidInput("--k must be at least 1")
    spec = Abelian1(args.k) if args.abelian else Metabelian(args.k, args.theta)
    F = blanchfield(spec)
    if args.out:
        write_atomic(args.out, dumps(form_to_json(F)))
    payload = {"k": args.k, "representation": "abelian" if args.abelian else "metabelian",
               "decomposition": decomposition_to_json(classify(F))}
    if not args.abelian:
        payload["theta"] = args.theta
    return _report("torus-blanchfield", payload)


def cmd_hkl_sweep(args) -> dict:
    if args.jobs < 1:
        raise InvalidInput("--jobs must be at least 1")
    result = hkl_sweep(args.ell, jobs=args.jobs)
    if args.report:
        write_atomic(args.report, dumps(_report("hkl-sweep", result)))
    summary = {k: v for k, v in result.items() if k != "classes"}
    return _report("hkl-sweep", summary)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linkform", description="Exact computations with Hermitian linking forms.")
    parser.add_argument("--version", action="version", version=f"linkform {__version__}")
    parser.add_argument("--timing", action="store_true", help="include wall time in the printed report")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="decompose a form into basic pairings")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("signature", help="jump table and signature function")
    p.add_argument("--input", required=True)
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--at", metavar="NUM/DEN")
    where.add_argument("--grid", type=int, metavar="N")
    p.add_argument("--csv")
    p.set_defaults(run=cmd_signature)

    p = sub.add_parser("witt", help="Witt class, metabolicity and Witt equivalence")
    p.add_argument("--a", required=True)
    p.add_argument("--b")
    p.add_argument("--metabolic", action="store_true")
    p.set_defaults(run=cmd_witt)

    p = sub.add_parser("represent-check", help="classify the form presented by a Hermitian matrix and cross-check")
    p.add_argument("--matrix", required=True)
    p.set_defaults(run=cmd_represent_check)

    p = sub.add_parser("torus-blanchfield", help="twisted Blanchfield form of T(2,2k+1)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--theta", type=int, default=0)
    p.add_argument("--abelian", action="store_true")
    p.add_argument("--out")
    p.set_defaults(run=cmd_torus_blanchfield)

    p = sub.add_parser("hkl-sweep", help="metabolicity sweep over prime-order characters")
    p.add_argument("--ell", type=int, required=True, choices=(3, 5, 13))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report")
    p.set_defaults(run=cmd_hkl_sweep)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report = args.run(args)
    except InvalidInput as exc:
        print(f"linkform: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PreconditionError as exc:
        print(f"linkform: precondition violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except LinkformError as exc:
        print(f"linkform: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if args.timing:
        report["wall_time_seconds"] = round(time.perf_counter() - start, 3)
    sys.stdout.write(dumps(report))
    if args.command == "represent-check" and not report["result"]["crosscheck_ok"]:
        return EXIT_FAILURE
    return EXIT_OK


def main() -> None:
    sys.exit(run())
