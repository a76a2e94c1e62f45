"""First-order stack-machine CNF conversion engine with trace emission.

This engine replaces the CPS engine's function-valued continuations with
explicit frame stacks (one small algebraic type per pass).  Each pass is
a small-step transition system over a state ``{mode, focus, stack}``:

* ``descend`` states walk into the focus formula, pushing a frame for
  every piece of pending work;
* ``apply`` states feed a finished piece to the top frame, popping it.

The stepper is a plain loop, so host call-stack depth stays constant no
matter how deep the input formula is.  Attaching a ``trace_sink`` streams
one `TraceEvent` per transition: the state *before* the transition, with
the focus and all frame payloads pretty-printed.  The JSON rendering of
an event is one object per line with fields exactly
``{"step", "stage", "mode", "focus", "stack", "depth"}``, where ``stack``
lists frames from the most recent down to the terminal ``Id`` frame.

``checked=True`` re-verifies the paper-trail dynamically after a run:
every apply/descend state must stand in the pass's post relation to the
final result (`check_impl_post` and friends), every intermediate stack of
the distribution passes must be well formed (`check_wf_cnfc_kont`,
`check_wf_distr_kont`), and call preconditions are enforced.  These
checks re-run the direct-style engine per step and are strictly for
tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from typing import Callable, Iterable, Optional, Union

from .budget import DEFAULT_MAX_NODES, UNLIMITED, NodeBudget
from .direct import cnfc as _cnfc_direct
from .direct import distr as _distr_direct
from .direct import impl_free as _impl_free_direct
from .direct import nnfc as _nnfc_direct
from .errors import (
    OutputBudgetExceeded,
    PostconditionViolation,
    PreconditionViolation,
    StackInvariantViolation,
    TraceReplayError,
)
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
    parse,
    parse_wi,
    size,
    to_text,
)
from .wf import wf_conjunctions_of_disjunctions, wf_negations_of_literals

__all__ = [
    "ImplKont",
    "NnfcKont",
    "DistrKont",
    "CnfcKont",
    "TraceEvent",
    "FrameSnapshot",
    "impl_free_machine",
    "nnfc_machine",
    "distr_machine",
    "cnfc_machine",
    "to_cnf_machine",
    "check_impl_post",
    "check_nnfc_post",
    "check_cnfc_post",
    "check_wf_cnfc_kont",
    "check_wf_distr_kont",
    "replay_trace",
]

DESCEND = "descend"
APPLY = "apply"


# ---------------------------------------------------------------------------
# Continuation frames.  Stacks are singly linked through `next` and end in
# the family's Id frame.  Left frames hold formulas whose conversion is
# still pending; right frames hold the already-converted left sibling.

class ImplKont:
    """Frames of the implication-removal machine."""

    @dataclass(frozen=True, slots=True)
    class Id:
        pass

    @dataclass(frozen=True, slots=True)
    class Neg:
        next: "ImplFrame"
        saved: Formula  # never read on apply; kept so stacks mirror the pushes exactly

    @dataclass(frozen=True, slots=True)
    class OrLeft:
        pending: Formula
        next: "ImplFrame"

    @dataclass(frozen=True, slots=True)
    class OrRight:
        next: "ImplFrame"
        done: FormulaWI

    @dataclass(frozen=True, slots=True)
    class AndLeft:
        pending: Formula
        next: "ImplFrame"

    @dataclass(frozen=True, slots=True)
    class AndRight:
        next: "ImplFrame"
        done: FormulaWI

    @dataclass(frozen=True, slots=True)
    class ImplLeft:
        pending: Formula
        next: "ImplFrame"

    @dataclass(frozen=True, slots=True)
    class ImplRight:
        next: "ImplFrame"
        done: FormulaWI

    ID: "ImplKont.Id"


ImplFrame = Union[
    ImplKont.Id, ImplKont.Neg, ImplKont.OrLeft, ImplKont.OrRight,
    ImplKont.AndLeft, ImplKont.AndRight, ImplKont.ImplLeft, ImplKont.ImplRight,
]
ImplKont.ID = ImplKont.Id()


class NnfcKont:
    """Frames of the negation-normal-form machine."""

    @dataclass(frozen=True, slots=True)
    class Id:
        pass

    @dataclass(frozen=True, slots=True)
    class NegNeg:
        next: "NnfcFrame"
        saved: FormulaWI  # never read on apply

    @dataclass(frozen=True, slots=True)
    class NegAndLeft:
        pending: FormulaWI
        next: "NnfcFrame"

    @dataclass(frozen=True, slots=True)
    class NegAndRight:
        next: "NnfcFrame"
        done: FormulaWI

    @dataclass(frozen=True, slots=True)
    class NegOrLeft:
        pending: FormulaWI
        next: "NnfcFrame"

    @dataclass(frozen=True, slots=True)
    class NegOrRight:
        next: "NnfcFrame"
        done: FormulaWI

    @dataclass(frozen=True, slots=True)
    class AndLeft:
        pending: FormulaWI
        next: "NnfcFrame"

    @dataclass(frozen=True, slots=True)
    class AndRight:
        next: "NnfcFrame"
        done: FormulaWI

    @dataclass(frozen=True, slots=True)
    class OrLeft:
        pending: FormulaWI
        next: "NnfcFrame"

    @dataclass(frozen=True, slots=True)
    class OrRight:
        next: "NnfcFrame"
        done: FormulaWI

    ID: "NnfcKont.Id"


NnfcFrame = Union[
    NnfcKont.Id, NnfcKont.NegNeg,
    NnfcKont.NegAndLeft, NnfcKont.NegAndRight,
    NnfcKont.NegOrLeft, NnfcKont.NegOrRight,
    NnfcKont.AndLeft, NnfcKont.AndRight,
    NnfcKont.OrLeft, NnfcKont.OrRight,
]
NnfcKont.ID = NnfcKont.Id()


class DistrKont:
    """Frames of the clause-distribution machine."""

    @dataclass(frozen=True, slots=True)
    class Id:
        pass

    @dataclass(frozen=True, slots=True)
    class Left:
        pending1: FormulaWI
        pending2: FormulaWI
        next: "DistrFrame"

    @dataclass(frozen=True, slots=True)
    class Right:
        next: "DistrFrame"
        done: FormulaWI

    ID: "DistrKont.Id"


DistrFrame = Union[DistrKont.Id, DistrKont.Left, DistrKont.Right]
DistrKont.ID = DistrKont.Id()


class CnfcKont:
    """Frames of the CNF-conversion machine."""

    @dataclass(frozen=True, slots=True)
    class Id:
        pass

    @dataclass(frozen=True, slots=True)
    class OrLeft:
        pending: FormulaWI
        next: "CnfcFrame"

    @dataclass(frozen=True, slots=True)
    class OrRight:
        next: "CnfcFrame"
        done: FormulaWI

    @dataclass(frozen=True, slots=True)
    class AndLeft:
        pending: FormulaWI
        next: "CnfcFrame"

    @dataclass(frozen=True, slots=True)
    class AndRight:
        next: "CnfcFrame"
        done: FormulaWI

    ID: "CnfcKont.Id"


CnfcFrame = Union[
    CnfcKont.Id, CnfcKont.OrLeft, CnfcKont.OrRight,
    CnfcKont.AndLeft, CnfcKont.AndRight,
]
CnfcKont.ID = CnfcKont.Id()


# ---------------------------------------------------------------------------
# Trace events

@dataclass(frozen=True)
class FrameSnapshot:
    frame: str
    payload: tuple[str, ...]


@dataclass(frozen=True)
class TraceEvent:
    """One machine transition: the state it fired from, pretty-printed."""

    step: int
    stage: str  # impl_free | nnfc | cnfc | distr
    mode: str  # descend | apply
    focus: str
    stack: tuple[FrameSnapshot, ...]  # top frame first, Id frame last
    depth: int  # == len(stack)

    def to_json(self) -> str:
        return json.dumps(
            {
                "step": self.step,
                "stage": self.stage,
                "mode": self.mode,
                "focus": self.focus,
                "stack": [
                    {"frame": f.frame, "payload": list(f.payload)} for f in self.stack
                ],
                "depth": self.depth,
            },
            separators=(",", ":"),
        )


def _snapshot_stack(k) -> tuple[FrameSnapshot, ...]:
    out = []
    while True:
        payload = tuple(
            to_text(getattr(k, f.name)) for f in fields(k) if f.name != "next"
        )
        out.append(FrameSnapshot(type(k).__name__, payload))
        nxt = getattr(k, "next", None)
        if nxt is None:
            return tuple(out)
        k = nxt


TraceSink = Callable[[TraceEvent], None]


class _Run:
    """Per-run plumbing: trace sink, step counter, budget, checked state."""

    __slots__ = ("sink", "checked", "budget", "step")

    def __init__(self, sink: Optional[TraceSink], checked: bool, budget: NodeBudget):
        self.sink = sink
        self.checked = checked
        self.budget = budget
        self.step = 0

    def emit(self, stage: str, mode: str, focus, k) -> None:
        if self.sink is None:
            return
        if isinstance(focus, tuple):  # a distr descend state works on a disjunction
            focus = OrWI(focus[0], focus[1])
        stack = _snapshot_stack(k)
        self.sink(
            TraceEvent(self.step, stage, mode, to_text(focus), stack, len(stack))
        )
        self.step += 1


# ---------------------------------------------------------------------------
# Post relations: how a stack maps an intermediate value to the final result.
# Pending payloads are resolved with the direct-style engine, which serves
# as the machine's specification.

def check_impl_post(k: ImplFrame, phi: FormulaWI, result: FormulaWI) -> bool:
    """Does stack `k` take intermediate `phi` to final `result`?"""
    match k:
        case ImplKont.Id():
            return phi == result
        case ImplKont.Neg(k2, _):
            return check_impl_post(k2, NegWI(phi), result)
        case ImplKont.OrLeft(p1, k2):
            return check_impl_post(k2, OrWI(phi, _impl_free_direct(p1)), result)
        case ImplKont.OrRight(k2, done):
            return check_impl_post(k2, OrWI(done, phi), result)
        case ImplKont.AndLeft(p1, k2):
            return check_impl_post(k2, AndWI(phi, _impl_free_direct(p1)), result)
        case ImplKont.AndRight(k2, done):
            return check_impl_post(k2, AndWI(done, phi), result)
        case ImplKont.ImplLeft(p1, k2):
            return check_impl_post(k2, OrWI(NegWI(phi), _impl_free_direct(p1)), result)
        case ImplKont.ImplRight(k2, done):
            return check_impl_post(k2, OrWI(NegWI(done), phi), result)
    raise TypeError(f"not an ImplKont frame: {k!r}")


def check_nnfc_post(k: NnfcFrame, phi: FormulaWI, result: FormulaWI) -> bool:
    match k:
        case NnfcKont.Id():
            return phi == result
        case NnfcKont.NegNeg(k2, _):
            return check_nnfc_post(k2, phi, result)
        case NnfcKont.NegAndLeft(p1, k2):
            return check_nnfc_post(k2, OrWI(phi, _nnfc_direct(NegWI(p1))), result)
        case NnfcKont.NegAndRight(k2, done):
            return check_nnfc_post(k2, OrWI(done, phi), result)
        case NnfcKont.NegOrLeft(p1, k2):
            return check_nnfc_post(k2, AndWI(phi, _nnfc_direct(NegWI(p1))), result)
        case NnfcKont.NegOrRight(k2, done):
            return check_nnfc_post(k2, AndWI(done, phi), result)
        case NnfcKont.AndLeft(p1, k2):
            return check_nnfc_post(k2, AndWI(phi, _nnfc_direct(p1)), result)
        case NnfcKont.AndRight(k2, done):
            return check_nnfc_post(k2, AndWI(done, phi), result)
        case NnfcKont.OrLeft(p1, k2):
            return check_nnfc_post(k2, OrWI(phi, _nnfc_direct(p1)), result)
        case NnfcKont.OrRight(k2, done):
            return check_nnfc_post(k2, OrWI(done, phi), result)
    raise TypeError(f"not an NnfcKont frame: {k!r}")


def check_cnfc_post(k: CnfcFrame, phi: FormulaWI, result: FormulaWI) -> bool:
    match k:
        case CnfcKont.Id():
            return phi == result
        case CnfcKont.OrLeft(p1, k2):
            return check_cnfc_post(k2, _distr_direct(phi, _cnfc_direct(p1)), result)
        case CnfcKont.OrRight(k2, done):
            return check_cnfc_post(k2, _distr_direct(done, phi), result)
        case CnfcKont.AndLeft(p1, k2):
            return check_cnfc_post(k2, AndWI(phi, _cnfc_direct(p1)), result)
        case CnfcKont.AndRight(k2, done):
            return check_cnfc_post(k2, AndWI(done, phi), result)
    raise TypeError(f"not a CnfcKont frame: {k!r}")


# ---------------------------------------------------------------------------
# Stack well-formedness: left frames carry NNF payloads, right frames carry
# payloads that are already converted, hence NNF and CNF.

def check_wf_cnfc_kont(k: CnfcFrame) -> bool:
    while True:
        match k:
            case CnfcKont.Id():
                return True
            case CnfcKont.OrLeft(p, k2) | CnfcKont.AndLeft(p, k2):
                if not wf_negations_of_literals(p):
                    return False
                k = k2
            case CnfcKont.OrRight(k2, p) | CnfcKont.AndRight(k2, p):
                if not (
                    wf_negations_of_literals(p)
                    and wf_conjunctions_of_disjunctions(p)
                ):
                    return False
                k = k2
            case _:
                raise TypeError(f"not a CnfcKont frame: {k!r}")


def check_wf_distr_kont(k: DistrFrame) -> bool:
    while True:
        match k:
            case DistrKont.Id():
                return True
            case DistrKont.Left(a, b, k2):
                for p in (a, b):
                    if not (
                        wf_negations_of_literals(p)
                        and wf_conjunctions_of_disjunctions(p)
                    ):
                        return False
                k = k2
            case DistrKont.Right(k2, p):
                if not (
                    wf_negations_of_literals(p)
                    and wf_conjunctions_of_disjunctions(p)
                ):
                    return False
                k = k2
            case _:
                raise TypeError(f"not a DistrKont frame: {k!r}")


# ---------------------------------------------------------------------------
# Steppers

def _verify_posts(stage, records, result, direct_fn, post_fn) -> None:
    for step, (mode, focus, k) in enumerate(records):
        mid = focus if mode == APPLY else direct_fn(focus)
        if not post_fn(k, mid, result):
            raise PostconditionViolation(
                f"{stage} machine: recorded {mode} state {step} does not reach the result"
            )


def _run_impl(phi: Formula, run: _Run) -> FormulaWI:
    records = []
    k: ImplFrame = ImplKont.ID
    mode, focus = DESCEND, phi
    while True:
        run.emit("impl_free", mode, focus, k)
        if run.checked:
            records.append((mode, focus, k))
        if mode == DESCEND:
            match focus:
                case Neg(p1):
                    k = ImplKont.Neg(k, p1)
                    focus = p1
                case Or(p1, p2):
                    k = ImplKont.OrLeft(p2, k)
                    focus = p1
                case And(p1, p2):
                    k = ImplKont.AndLeft(p2, k)
                    focus = p1
                case Impl(p1, p2):
                    k = ImplKont.ImplLeft(p2, k)
                    focus = p1
                case Const(b):
                    mode, focus = APPLY, ConstWI(b)
                case Var(x):
                    mode, focus = APPLY, VarWI(x)
                case _:
                    raise TypeError(f"not a Formula: {focus!r}")
        else:
            match k:
                case ImplKont.Id():
                    if run.checked:
                        _verify_posts(
                            "impl_free", records, focus,
                            _impl_free_direct, check_impl_post,
                        )
                    return focus
                case ImplKont.Neg(k2, _):
                    focus = NegWI(focus)
                    k = k2
                case ImplKont.OrLeft(p, k2):
                    k = ImplKont.OrRight(k2, focus)
                    mode, focus = DESCEND, p
                case ImplKont.OrRight(k2, done):
                    focus = OrWI(done, focus)
                    k = k2
                case ImplKont.AndLeft(p, k2):
                    k = ImplKont.AndRight(k2, focus)
                    mode, focus = DESCEND, p
                case ImplKont.AndRight(k2, done):
                    focus = AndWI(done, focus)
                    k = k2
                case ImplKont.ImplLeft(p, k2):
                    k = ImplKont.ImplRight(k2, focus)
                    mode, focus = DESCEND, p
                case ImplKont.ImplRight(k2, done):
                    focus = OrWI(NegWI(done), focus)
                    k = k2


def _run_nnfc(phi: FormulaWI, run: _Run) -> FormulaWI:
    records = []
    k: NnfcFrame = NnfcKont.ID
    mode, focus = DESCEND, phi
    while True:
        run.emit("nnfc", mode, focus, k)
        if run.checked:
            records.append((mode, focus, k))
        if mode == DESCEND:
            match focus:
                case NegWI(NegWI(p1)):
                    k = NnfcKont.NegNeg(k, p1)
                    focus = p1
                case NegWI(AndWI(p1, p2)):
                    k = NnfcKont.NegAndLeft(p2, k)
                    focus = NegWI(p1)
                case NegWI(OrWI(p1, p2)):
                    k = NnfcKont.NegOrLeft(p2, k)
                    focus = NegWI(p1)
                case OrWI(p1, p2):
                    k = NnfcKont.OrLeft(p2, k)
                    focus = p1
                case AndWI(p1, p2):
                    k = NnfcKont.AndLeft(p2, k)
                    focus = p1
                case VarWI(_) | ConstWI(_) | NegWI(_):
                    mode = APPLY
                case _:
                    raise TypeError(f"not a FormulaWI: {focus!r}")
        else:
            match k:
                case NnfcKont.Id():
                    if run.checked:
                        _verify_posts(
                            "nnfc", records, focus, _nnfc_direct, check_nnfc_post
                        )
                    return focus
                case NnfcKont.NegNeg(k2, _):
                    k = k2
                case NnfcKont.NegAndLeft(p1, k2):
                    k = NnfcKont.NegAndRight(k2, focus)
                    mode, focus = DESCEND, NegWI(p1)
                case NnfcKont.NegAndRight(k2, done):
                    focus = OrWI(done, focus)
                    k = k2
                case NnfcKont.NegOrLeft(p1, k2):
                    k = NnfcKont.NegOrRight(k2, focus)
                    mode, focus = DESCEND, NegWI(p1)
                case NnfcKont.NegOrRight(k2, done):
                    focus = AndWI(done, focus)
                    k = k2
                case NnfcKont.AndLeft(p1, k2):
                    k = NnfcKont.AndRight(k2, focus)
                    mode, focus = DESCEND, p1
                case NnfcKont.AndRight(k2, done):
                    focus = AndWI(done, focus)
                    k = k2
                case NnfcKont.OrLeft(p1, k2):
                    k = NnfcKont.OrRight(k2, focus)
                    mode, focus = DESCEND, p1
                case NnfcKont.OrRight(k2, done):
                    focus = OrWI(done, focus)
                    k = k2


def _require_cnf_arg(who: str, name: str, phi: FormulaWI) -> None:
    if not wf_negations_of_literals(phi):
        raise PreconditionViolation(f"{who}: {name} fails wf_negations_of_literals")
    if not wf_conjunctions_of_disjunctions(phi):
        raise PreconditionViolation(
            f"{who}: {name} fails wf_conjunctions_of_disjunctions"
        )


def _run_distr(phi1: FormulaWI, phi2: FormulaWI, run: _Run) -> FormulaWI:
    if run.checked:
        _require_cnf_arg("distr machine", "left argument", phi1)
        _require_cnf_arg("distr machine", "right argument", phi2)
    k: DistrFrame = DistrKont.ID
    mode = DESCEND
    focus = (phi1, phi2)
    while True:
        run.emit("distr", mode, focus, k)
        if run.checked and not check_wf_distr_kont(k):
            raise StackInvariantViolation("distr machine: stack fails wf_distr_kont")
        if mode == DESCEND:
            match focus:
                case (AndWI(p11, p12), f2):
                    k = DistrKont.Left(p12, f2, k)
                    focus = (p11, f2)
                case (f1, AndWI(p21, p22)):
                    k = DistrKont.Left(f1, p22, k)
                    focus = (f1, p21)
                case (f1, f2):
                    run.budget.charge()
                    mode, focus = APPLY, OrWI(f1, f2)
        else:
            match k:
                case DistrKont.Id():
                    return focus
                case DistrKont.Left(a, b, k2):
                    k = DistrKont.Right(k2, focus)
                    mode, focus = DESCEND, (a, b)
                case DistrKont.Right(k2, done):
                    run.budget.charge()
                    focus = AndWI(done, focus)
                    k = k2


def _run_cnfc(phi: FormulaWI, run: _Run) -> FormulaWI:
    if run.checked and not wf_negations_of_literals(phi):
        raise PreconditionViolation(
            "cnfc machine: argument fails wf_negations_of_literals"
        )
    records = []
    k: CnfcFrame = CnfcKont.ID
    mode, focus = DESCEND, phi
    while True:
        run.emit("cnfc", mode, focus, k)
        if run.checked:
            if not check_wf_cnfc_kont(k):
                raise StackInvariantViolation("cnfc machine: stack fails wf_cnfc_kont")
            if mode == APPLY:
                _require_cnf_arg("cnfc machine apply", "focus", focus)
            records.append((mode, focus, k))
        if mode == DESCEND:
            match focus:
                case OrWI(p1, p2):
                    k = CnfcKont.OrLeft(p2, k)
                    focus = p1
                case AndWI(p1, p2):
                    k = CnfcKont.AndLeft(p2, k)
                    focus = p1
                case _:
                    mode = APPLY
        else:
            match k:
                case CnfcKont.Id():
                    if run.checked:
                        _verify_posts(
                            "cnfc", records, focus, _cnfc_direct, check_cnfc_post
                        )
                    return focus
                case CnfcKont.OrLeft(p, k2):
                    k = CnfcKont.OrRight(k2, focus)
                    mode, focus = DESCEND, p
                case CnfcKont.OrRight(k2, done):
                    focus = _run_distr(done, focus, run)
                    k = k2
                case CnfcKont.AndLeft(p, k2):
                    k = CnfcKont.AndRight(k2, focus)
                    mode, focus = DESCEND, p
                case CnfcKont.AndRight(k2, done):
                    run.budget.charge()
                    focus = AndWI(done, focus)
                    k = k2


# ---------------------------------------------------------------------------
# Public entry points

def impl_free_machine(
    phi: Formula,
    trace_sink: Optional[TraceSink] = None,
    *,
    checked: bool = False,
) -> FormulaWI:
    """Implication removal on the stack machine; equals the direct pass."""
    return _run_impl(phi, _Run(trace_sink, checked, UNLIMITED))


def nnfc_machine(
    phi: FormulaWI,
    trace_sink: Optional[TraceSink] = None,
    *,
    checked: bool = False,
) -> FormulaWI:
    """Negation normal form on the stack machine; equals the direct pass."""
    return _run_nnfc(phi, _Run(trace_sink, checked, UNLIMITED))


def distr_machine(
    phi1: FormulaWI,
    phi2: FormulaWI,
    trace_sink: Optional[TraceSink] = None,
    *,
    checked: bool = False,
) -> FormulaWI:
    """Clause distribution on the stack machine; equals the direct pass."""
    return _run_distr(phi1, phi2, _Run(trace_sink, checked, UNLIMITED))


def cnfc_machine(
    phi: FormulaWI,
    trace_sink: Optional[TraceSink] = None,
    *,
    checked: bool = False,
) -> FormulaWI:
    """CNF conversion of an NNF formula on the stack machine."""
    return _run_cnfc(phi, _Run(trace_sink, checked, UNLIMITED))


def to_cnf_machine(
    phi: Formula,
    trace_sink: Optional[TraceSink] = None,
    *,
    checked: bool = False,
    max_nodes: int | None = DEFAULT_MAX_NODES,
) -> FormulaWI:
    """Full CNF conversion on the stack machine.

    Structurally identical to the direct engine's output, with the same
    node budget guard.  With a trace sink attached, the three passes (and
    any nested distribution runs) stream into one trace with a single
    strictly increasing step counter.
    """
    budget = UNLIMITED if max_nodes is None else NodeBudget(max_nodes)
    run = _Run(trace_sink, checked, budget)
    result = _run_cnfc(_run_nnfc(_run_impl(phi, run), run), run)
    if max_nodes is not None and size(result) > max_nodes:
        raise OutputBudgetExceeded(max_nodes)
    return result


# ---------------------------------------------------------------------------
# Trace replay

def replay_trace(events: Iterable[TraceEvent]) -> FormulaWI:
    """Re-run the machine a trace came from, verifying every transition.

    The first event identifies the input (its focus) and the run kind
    (its stage, and whether later stages follow).  The machine is re-run
    with a sink that compares each fresh event against the recorded one;
    any divergence, surplus, or shortfall raises `TraceReplayError`.
    Returns the replayed run's result formula.
    """
    recorded = list(events)
    if not recorded:
        raise TraceReplayError("empty trace")
    first = recorded[0]
    if first.mode != DESCEND:
        raise TraceReplayError("trace does not start with a descend state")

    pos = 0

    def verify(ev: TraceEvent) -> None:
        nonlocal pos
        if pos >= len(recorded):
            raise TraceReplayError(f"replay produced extra step {ev.step}")
        if recorded[pos] != ev:
            raise TraceReplayError(f"trace diverges at step {pos}")
        pos += 1

    stages = {ev.stage for ev in recorded}
    if first.stage == "impl_free" and stages != {"impl_free"}:
        result = to_cnf_machine(parse(first.focus), verify, max_nodes=None)
    elif first.stage == "impl_free":
        result = impl_free_machine(parse(first.focus), verify)
    elif first.stage == "nnfc":
        result = nnfc_machine(parse_wi(first.focus), verify)
    elif first.stage == "cnfc":
        result = cnfc_machine(parse_wi(first.focus), verify)
    elif first.stage == "distr":
        pair = parse_wi(first.focus)
        if not isinstance(pair, OrWI):
            raise TraceReplayError("distr trace focus is not a disjunction")
        result = distr_machine(pair.left, pair.right, verify)
    else:
        raise TraceReplayError(f"unknown stage {first.stage!r}")
    if pos != len(recorded):
        raise TraceReplayError(f"trace has {len(recorded) - pos} unreplayed steps")
    return result
