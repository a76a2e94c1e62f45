"""Direct-style CNF conversion pipeline.

The conversion is a composition of three structurally recursive passes:

* `impl_free` rewrites every implication using  a -> b  ==  ~a | b,
* `nnfc` pushes negations to the literals (double-negation elimination
  and the De Morgan laws),
* `cnfc` distributes disjunctions over conjunctions via `distr`, using
  a | (b & c)  ==  (a | b) & (a | c).

No constant folding or simplification happens anywhere: constants travel
through the pipeline verbatim.  All functions are pure; `checked=True`
turns on runtime verification of each call's preconditions and of the
termination measures (an instrumented-assertion mode meant for tests, not
production use).
"""

from __future__ import annotations

from .budget import DEFAULT_MAX_NODES, UNLIMITED, NodeBudget
from .errors import OutputBudgetExceeded, PreconditionViolation
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

__all__ = ["impl_free", "nnfc", "distr", "cnfc", "to_cnf"]


def impl_free(phi: Formula) -> FormulaWI:
    """Translate into the implication-free language.

    Homomorphic on every connective except implication, which becomes a
    disjunction with negated left side.  The result is a `FormulaWI`, so
    freedom from implications is guaranteed by the node types.
    """
    match phi:
        case Neg(p1):
            return NegWI(impl_free(p1))
        case Or(p1, p2):
            return OrWI(impl_free(p1), impl_free(p2))
        case And(p1, p2):
            return AndWI(impl_free(p1), impl_free(p2))
        case Impl(p1, p2):
            return OrWI(NegWI(impl_free(p1)), impl_free(p2))
        case Const(b):
            return ConstWI(b)
        case Var(x):
            return VarWI(x)
    raise TypeError(f"not a Formula: {phi!r}")


def nnfc(phi: FormulaWI, *, checked: bool = False) -> FormulaWI:
    """Convert to negation normal form.

    Eliminates double negations and applies the De Morgan laws until
    every negation guards a literal.  Output satisfies
    `wf_negations_of_literals`; the recursion is bounded by the node
    count, which `checked` mode verifies decreases at every call.
    """
    return _nnfc(phi, checked, None)


def _nnfc(phi: FormulaWI, checked: bool, bound: int | None) -> FormulaWI:
    if checked:
        s = size(phi)
        assert bound is None or s < bound, "nnfc measure did not decrease"
    else:
        s = None
    match phi:
        case NegWI(NegWI(p1)):
            return _nnfc(p1, checked, s)
        case NegWI(AndWI(p1, p2)):
            return OrWI(_nnfc(NegWI(p1), checked, s), _nnfc(NegWI(p2), checked, s))
        case NegWI(OrWI(p1, p2)):
            return AndWI(_nnfc(NegWI(p1), checked, s), _nnfc(NegWI(p2), checked, s))
        case OrWI(p1, p2):
            return OrWI(_nnfc(p1, checked, s), _nnfc(p2, checked, s))
        case AndWI(p1, p2):
            return AndWI(_nnfc(p1, checked, s), _nnfc(p2, checked, s))
        case _:
            return phi


def _require_nnf_cnf(phi: FormulaWI, who: str, arg: str) -> None:
    if not wf_negations_of_literals(phi):
        raise PreconditionViolation(
            f"{who}: {arg} fails wf_negations_of_literals"
        )
    if not wf_conjunctions_of_disjunctions(phi):
        raise PreconditionViolation(
            f"{who}: {arg} fails wf_conjunctions_of_disjunctions"
        )


def distr(
    phi1: FormulaWI,
    phi2: FormulaWI,
    *,
    checked: bool = False,
    budget: NodeBudget = UNLIMITED,
) -> FormulaWI:
    """CNF of the disjunction of two CNF formulas.

    Splits conjunctions on the left first, then on the right; once neither
    side is a conjunction the disjunction is emitted as a clause.  Both
    arguments must be in NNF and CNF (verified per call in checked mode).
    """
    return _distr(phi1, phi2, checked, budget, None)


def _distr(
    phi1: FormulaWI,
    phi2: FormulaWI,
    checked: bool,
    budget: NodeBudget,
    bound: int | None,
) -> FormulaWI:
    if checked:
        _require_nnf_cnf(phi1, "distr", "left argument")
        _require_nnf_cnf(phi2, "distr", "right argument")
        s = size(phi1) + size(phi2)
        assert bound is None or s < bound, "distr measure did not decrease"
    else:
        s = None
    match (phi1, phi2):
        case (AndWI(p11, p12), _):
            budget.charge()
            return AndWI(
                _distr(p11, phi2, checked, budget, s),
                _distr(p12, phi2, checked, budget, s),
            )
        case (_, AndWI(p21, p22)):
            budget.charge()
            return AndWI(
                _distr(phi1, p21, checked, budget, s),
                _distr(phi1, p22, checked, budget, s),
            )
        case _:
            budget.charge()
            return OrWI(phi1, phi2)


def cnfc(
    phi: FormulaWI,
    *,
    checked: bool = False,
    budget: NodeBudget = UNLIMITED,
) -> FormulaWI:
    """Convert an NNF formula to conjunctive normal form.

    Recurses homomorphically through conjunctions and hands disjunctions
    to `distr`.  Requires `wf_negations_of_literals(phi)` (verified per
    call in checked mode); the output satisfies both normal-form checks.
    """
    if checked and not wf_negations_of_literals(phi):
        raise PreconditionViolation("cnfc: argument fails wf_negations_of_literals")
    match phi:
        case OrWI(p1, p2):
            return _distr(
                cnfc(p1, checked=checked, budget=budget),
                cnfc(p2, checked=checked, budget=budget),
                checked,
                budget,
                None,
            )
        case AndWI(p1, p2):
            budget.charge()
            return AndWI(
                cnfc(p1, checked=checked, budget=budget),
                cnfc(p2, checked=checked, budget=budget),
            )
        case _:
            return phi


def to_cnf(
    phi: Formula,
    *,
    max_nodes: int | None = DEFAULT_MAX_NODES,
    checked: bool = False,
) -> FormulaWI:
    """Full conversion to conjunctive normal form.

    The result is logically equivalent to `phi`, implication-free by
    type, and passes both `wf_negations_of_literals` and
    `wf_conjunctions_of_disjunctions`.  Conversion aborts with
    `OutputBudgetExceeded` once it would build more than `max_nodes`
    nodes (pass ``max_nodes=None`` to disable the guard).
    """
    budget = UNLIMITED if max_nodes is None else NodeBudget(max_nodes)
    result = cnfc(nnfc(impl_free(phi), checked=checked), checked=checked, budget=budget)
    if max_nodes is not None and size(result) > max_nodes:
        raise OutputBudgetExceeded(max_nodes)
    return result
