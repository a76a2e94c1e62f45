"""Command-line front end.

Exit codes partition the error classes so scripts can dispatch on them:

* 0  success
* 1  syntax error in an input formula
* 2  node budget exceeded during conversion
* 3  --trace requested with an engine other than `machine`
* 4  formulas not equivalent (counterexample printed on stdout)
* 5  too many atoms for truth-table enumeration
* 6  a requested normal-form check failed (predicate named on stdout)

Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .budget import DEFAULT_MAX_NODES
from .cps import to_cnf_cps
from .dimacs import to_dimacs
from .direct import to_cnf
from .errors import (
    CnfkitError,
    FormulaSyntaxError,
    OutputBudgetExceeded,
    TooManyAtoms,
)
from .formula import parse, parse_wi, to_text
from .machine import to_cnf_machine
from .oracle import equivalent
from .wf import wf_conjunctions_of_disjunctions, wf_negations_of_literals

__all__ = ["main"]

# The direct and CPS engines recurse on the host stack; give them headroom
# without approaching the level where CPython risks exhausting the C stack.
_CLI_RECURSION_LIMIT = 12_000


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cnfkit",
        description="Convert propositional formulas to conjunctive normal form, "
        "check normal forms, and test equivalence by truth table.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser(
        "convert", help="convert a formula to CNF and print it"
    )
    convert.add_argument("formula", help="formula in concrete syntax, e.g. 'p -> q'")
    convert.add_argument(
        "--engine",
        choices=("direct", "cps", "machine"),
        default="direct",
        help="conversion engine (all three produce identical output)",
    )
    convert.add_argument(
        "--dimacs", action="store_true", help="print DIMACS instead of formula syntax"
    )
    convert.add_argument(
        "--trace",
        metavar="FILE",
        help="write a JSON-lines transition trace (machine engine only)",
    )
    convert.add_argument(
        "--checked",
        action="store_true",
        help="verify preconditions, post relations, and stack invariants at runtime",
    )
    convert.add_argument(
        "--max-nodes",
        type=int,
        default=DEFAULT_MAX_NODES,
        metavar="N",
        help=f"abort once the output would exceed N nodes (default {DEFAULT_MAX_NODES})",
    )

    equiv = sub.add_parser(
        "equiv", help="test two formulas for logical equivalence"
    )
    equiv.add_argument("formula1", help="any formula")
    equiv.add_argument("formula2", help="implication-free formula")

    check = sub.add_parser(
        "check", help="run normal-form checks on an implication-free formula"
    )
    check.add_argument("formula", help="implication-free formula")
    check.add_argument(
        "--nnf",
        action="store_true",
        help="check that negations guard only literals",
    )
    check.add_argument(
        "--cnf",
        action="store_true",
        help="check conjunctive normal form (implies the literal-negation check)",
    )
    return parser


def _cmd_convert(args: argparse.Namespace) -> int:
    if args.trace and args.engine != "machine":
        print("--trace requires --engine machine", file=sys.stderr)
        return 3
    phi = parse(args.formula)
    if args.engine == "direct":
        result = to_cnf(phi, max_nodes=args.max_nodes, checked=args.checked)
    elif args.engine == "cps":
        result = to_cnf_cps(phi, max_nodes=args.max_nodes, checked=args.checked)
    elif args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="\n") as out:
            result = to_cnf_machine(
                phi,
                lambda event: out.write(event.to_json() + "\n"),
                max_nodes=args.max_nodes,
                checked=args.checked,
            )
    else:
        result = to_cnf_machine(phi, max_nodes=args.max_nodes, checked=args.checked)
    if args.dimacs:
        sys.stdout.write(to_dimacs(result).render())
    else:
        print(to_text(result))
    return 0


def _cmd_equiv(args: argparse.Namespace) -> int:
    phi = parse(args.formula1)
    psi = parse_wi(args.formula2)
    verdict = equivalent(phi, psi)
    if verdict is True:
        return 0
    print(verdict)
    return 4


def _cmd_check(args: argparse.Namespace) -> int:
    phi = parse_wi(args.formula)
    # The literal-negation check always runs; the clause-shape check runs
    # unless --nnf was requested alone.
    checks = [("wf_negations_of_literals", wf_negations_of_literals)]
    if args.cnf or not args.nnf:
        checks.append(
            ("wf_conjunctions_of_disjunctions", wf_conjunctions_of_disjunctions)
        )
    for name, predicate in checks:
        if not predicate(phi):
            print(name)
            return 6
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), _CLI_RECURSION_LIMIT))
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "convert":
            return _cmd_convert(args)
        if args.command == "equiv":
            return _cmd_equiv(args)
        return _cmd_check(args)
    except FormulaSyntaxError as err:
        print(f"syntax error: {err}", file=sys.stderr)
        return 1
    except OutputBudgetExceeded as err:
        print(f"budget exceeded: {err}", file=sys.stderr)
        return 2
    except TooManyAtoms as err:
        print(f"too many atoms: {err}", file=sys.stderr)
        return 5
    except CnfkitError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
