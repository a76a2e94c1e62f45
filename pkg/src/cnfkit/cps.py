"""Continuation-passing-style CNF conversion engine.

Each pass takes an extra argument: the continuation receiving the pass's
result.  Every recursive call is a tail call, with the pending work
captured in closures, so the engine's contract is simply that each
function equals its direct-style counterpart fed to the continuation.
The continuation's result type is free; callers may return formulas,
counters, or anything else.

CPython does not eliminate tail calls, so continuation nesting still
consumes interpreter stack.  Every entry point therefore enforces a
configurable bound on continuation nesting (`max_depth`) and raises
`DepthLimitExceeded` instead of crashing.  Small bounds run on the
calling thread; larger ones transparently re-run the conversion on a
worker thread with an enlarged stack.
"""

from __future__ import annotations

import sys
import threading
from typing import Callable, TypeVar

from .budget import DEFAULT_MAX_NODES, UNLIMITED, NodeBudget
from .errors import DepthLimitExceeded, OutputBudgetExceeded, PreconditionViolation
from .formula import (
    And,
    AndWI,
    Const,
    ConstWI,
    Formula,
    FormulaWI,
    Impl,
    Neg,
    NegWI,
    Or,
    OrWI,
    Var,
    VarWI,
    size,
)
from .wf import wf_conjunctions_of_disjunctions, wf_negations_of_literals

__all__ = [
    "impl_free_cps",
    "nnfc_cps",
    "distr_cps",
    "cnfc_cps",
    "to_cnf_cps",
    "DEFAULT_MAX_DEPTH",
]

R = TypeVar("R")
Kont = Callable[[FormulaWI], R]

DEFAULT_MAX_DEPTH = 10_000

# Empirically each engine entry costs ~3 interpreter frames (the call plus
# the closures it threads through); 6 leaves a wide margin.
_FRAMES_PER_ENTRY = 6
# Entry counts safe to run on the calling thread without risking the C
# stack (the interpreter limit is raised to fit, never past ~12k frames).
_MAIN_SAFE_ENTRIES = 1500
_MAX_THREAD_STACK = 2**30


class _DepthGuard:
    __slots__ = ("left", "limit")

    def __init__(self, limit: int):
        self.limit = limit
        self.left = limit

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise DepthLimitExceeded(self.limit)


def _run_here(fn, entries: int):
    need = entries * _FRAMES_PER_ENTRY + 2000
    old = sys.getrecursionlimit()
    if need > old:
        sys.setrecursionlimit(need)
    try:
        return fn(_DepthGuard(entries))
    finally:
        sys.setrecursionlimit(old)


def _run_in_big_stack_thread(fn, entries: int):
    frames = entries * _FRAMES_PER_ENTRY + 2000
    old_stack = threading.stack_size()
    threading.stack_size(min(_MAX_THREAD_STACK, 64 * 2**20 + frames * 2048))
    box: list = []

    def work() -> None:
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(frames, old))
        try:
            box.append((True, fn(_DepthGuard(entries))))
        except BaseException as exc:  # re-raised on the caller's thread
            box.append((False, exc))
        finally:
            sys.setrecursionlimit(old)

    try:
        worker = threading.Thread(target=work, name="cnfkit-cps")
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_stack)
    ok, value = box[0]
    if not ok:
        raise value
    return value


def _with_depth(fn, max_depth: int):
    # Try cheaply on this thread; only conversions that genuinely nest
    # deeper pay for a dedicated worker thread with a large stack.  A
    # tripped guard is re-raised fresh so callers see a short traceback
    # rather than thousands of continuation frames.
    main_entries = min(max_depth, _MAIN_SAFE_ENTRIES)
    try:
        return _run_here(fn, main_entries)
    except DepthLimitExceeded:
        if main_entries >= max_depth:
            raise DepthLimitExceeded(max_depth) from None
    try:
        return _run_in_big_stack_thread(fn, max_depth)
    except DepthLimitExceeded:
        raise DepthLimitExceeded(max_depth) from None


def _identity(x: FormulaWI) -> FormulaWI:
    return x


def _mk_and(a: FormulaWI, b: FormulaWI, budget: NodeBudget) -> AndWI:
    budget.charge()
    return AndWI(a, b)


def _mk_or(a: FormulaWI, b: FormulaWI, budget: NodeBudget) -> OrWI:
    budget.charge()
    return OrWI(a, b)


# ---------------------------------------------------------------------------
# The four passes

def _impl_free_cps(phi: Formula, k: Kont, g: _DepthGuard):
    g.tick()
    match phi:
        case Neg(p1):
            return _impl_free_cps(p1, lambda con: k(NegWI(con)), g)
        case Or(p1, p2):
            return _impl_free_cps(
                p1,
                lambda con: _impl_free_cps(p2, lambda con1: k(OrWI(con, con1)), g),
                g,
            )
        case And(p1, p2):
            return _impl_free_cps(
                p1,
                lambda con: _impl_free_cps(p2, lambda con1: k(AndWI(con, con1)), g),
                g,
            )
        case Impl(p1, p2):
            return _impl_free_cps(
                p1,
                lambda con: _impl_free_cps(
                    p2, lambda con1: k(OrWI(NegWI(con), con1)), g
                ),
                g,
            )
        case Const(b):
            return k(ConstWI(b))
        case Var(x):
            return k(VarWI(x))
    raise TypeError(f"not a Formula: {phi!r}")


def _nnfc_cps(phi: FormulaWI, k: Kont, g: _DepthGuard):
    g.tick()
    match phi:
        case NegWI(NegWI(p1)):
            return _nnfc_cps(p1, lambda con: k(con), g)
        case NegWI(AndWI(p1, p2)):
            return _nnfc_cps(
                NegWI(p1),
                lambda con: _nnfc_cps(NegWI(p2), lambda con1: k(OrWI(con, con1)), g),
                g,
            )
        case NegWI(OrWI(p1, p2)):
            return _nnfc_cps(
                NegWI(p1),
                lambda con: _nnfc_cps(NegWI(p2), lambda con1: k(AndWI(con, con1)), g),
                g,
            )
        case OrWI(p1, p2):
            return _nnfc_cps(
                p1, lambda con: _nnfc_cps(p2, lambda con1: k(OrWI(con, con1)), g), g
            )
        case AndWI(p1, p2):
            return _nnfc_cps(
                p1, lambda con: _nnfc_cps(p2, lambda con1: k(AndWI(con, con1)), g), g
            )
        case _:
            return k(phi)


def _check_distr_args(phi1: FormulaWI, phi2: FormulaWI) -> None:
    for name, arg in (("left argument", phi1), ("right argument", phi2)):
        if not wf_negations_of_literals(arg):
            raise PreconditionViolation(f"distr_cps: {name} fails wf_negations_of_literals")
        if not wf_conjunctions_of_disjunctions(arg):
            raise PreconditionViolation(
                f"distr_cps: {name} fails wf_conjunctions_of_disjunctions"
            )


def _distr_cps(
    phi1: FormulaWI,
    phi2: FormulaWI,
    k: Kont,
    g: _DepthGuard,
    checked: bool,
    budget: NodeBudget,
):
    g.tick()
    if checked:
        _check_distr_args(phi1, phi2)
    match (phi1, phi2):
        case (AndWI(p11, p12), _):
            return _distr_cps(
                p11,
                phi2,
                lambda con: _distr_cps(
                    p12,
                    phi2,
                    lambda con1: k(_mk_and(con, con1, budget)),
                    g,
                    checked,
                    budget,
                ),
                g,
                checked,
                budget,
            )
        case (_, AndWI(p21, p22)):
            return _distr_cps(
                phi1,
                p21,
                lambda con: _distr_cps(
                    phi1,
                    p22,
                    lambda con1: k(_mk_and(con, con1, budget)),
                    g,
                    checked,
                    budget,
                ),
                g,
                checked,
                budget,
            )
        case _:
            return k(_mk_or(phi1, phi2, budget))


def _cnfc_cps(
    phi: FormulaWI,
    k: Kont,
    g: _DepthGuard,
    checked: bool,
    budget: NodeBudget,
):
    g.tick()
    if checked and not wf_negations_of_literals(phi):
        raise PreconditionViolation("cnfc_cps: argument fails wf_negations_of_literals")
    match phi:
        case OrWI(p1, p2):
            return _cnfc_cps(
                p1,
                lambda con: _cnfc_cps(
                    p2,
                    lambda con1: _distr_cps(con, con1, k, g, checked, budget),
                    g,
                    checked,
                    budget,
                ),
                g,
                checked,
                budget,
            )
        case AndWI(p1, p2):
            return _cnfc_cps(
                p1,
                lambda con: _cnfc_cps(
                    p2, lambda con1: k(_mk_and(con, con1, budget)), g, checked, budget
                ),
                g,
                checked,
                budget,
            )
        case _:
            return k(phi)


# ---------------------------------------------------------------------------
# Public entry points

def impl_free_cps(phi: Formula, k: Kont, *, max_depth: int = DEFAULT_MAX_DEPTH):
    """Implication removal in CPS: returns ``k(<implication-free phi>)``."""
    return _with_depth(lambda g: _impl_free_cps(phi, k, g), max_depth)


def nnfc_cps(phi: FormulaWI, k: Kont, *, max_depth: int = DEFAULT_MAX_DEPTH):
    """Negation normal form in CPS: returns ``k(<nnf of phi>)``."""
    return _with_depth(lambda g: _nnfc_cps(phi, k, g), max_depth)


def distr_cps(
    phi1: FormulaWI,
    phi2: FormulaWI,
    k: Kont,
    *,
    checked: bool = False,
    max_depth: int = DEFAULT_MAX_DEPTH,
):
    """Clause distribution in CPS: returns ``k(<cnf of phi1 | phi2>)``.

    Both arguments must be in NNF and CNF (verified in checked mode).
    """
    return _with_depth(
        lambda g: _distr_cps(phi1, phi2, k, g, checked, UNLIMITED), max_depth
    )


def cnfc_cps(
    phi: FormulaWI,
    k: Kont,
    *,
    checked: bool = False,
    max_depth: int = DEFAULT_MAX_DEPTH,
):
    """CNF conversion of an NNF formula in CPS: returns ``k(<cnf of phi>)``."""
    return _with_depth(
        lambda g: _cnfc_cps(phi, k, g, checked, UNLIMITED), max_depth
    )


def to_cnf_cps(
    phi: Formula,
    *,
    max_nodes: int | None = DEFAULT_MAX_NODES,
    checked: bool = False,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> FormulaWI:
    """Full CNF conversion via the CPS engine.

    Produces a result structurally identical to the direct engine's, with
    the same node budget guard.
    """

    def run(g: _DepthGuard) -> FormulaWI:
        # Budget is created per attempt: a depth-limited try must not
        # leave charges behind before the large-stack retry.
        budget = UNLIMITED if max_nodes is None else NodeBudget(max_nodes)
        h1 = _impl_free_cps(phi, _identity, g)
        h2 = _nnfc_cps(h1, _identity, g)
        return _cnfc_cps(h2, _identity, g, checked, budget)

    result = _with_depth(run, max_depth)
    if max_nodes is not None and size(result) > max_nodes:
        raise OutputBudgetExceeded(max_nodes)
    return result
