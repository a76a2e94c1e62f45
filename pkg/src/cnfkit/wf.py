"""Executable normal-form checkers for implication-free formulas.

These are the specification layer: total boolean predicates describing
negation normal form and conjunctive normal form, plus the bridging
implication used when reasoning about disjunctions of CNF formulas.  They
are written as explicit worklist walks so they stay linear on shared
structure and never hit the interpreter recursion limit, but each one
computes exactly the obvious structural case table.
"""

from __future__ import annotations

from .formula import AndWI, ConstWI, FormulaWI, NegWI, OrWI, VarWI

__all__ = [
    "wf_negations_of_literals",
    "wf_conjunctions_of_disjunctions",
    "wf_disjunctions",
    "check_aux_lemma",
]


def wf_negations_of_literals(phi: FormulaWI) -> bool:
    """True iff every negation in `phi` applies directly to a Var or Const.

    This is negation normal form for the implication-free language: below
    a `NegWI` there may be no `AndWI`, `OrWI`, or further `NegWI`.
    """
    todo = [phi]
    while todo:
        node = todo.pop()
        match node:
            case NegWI(child):
                if not isinstance(child, (VarWI, ConstWI)):
                    return False
            case AndWI(a, b) | OrWI(a, b):
                todo.append(a)
                todo.append(b)
            case VarWI(_) | ConstWI(_):
                pass
            case _:
                raise TypeError(f"not a FormulaWI: {node!r}")
    return True


_CONJ, _DISJ = 0, 1


def _wf_cnf_walk(phi: FormulaWI, mode: int) -> bool:
    # mode _CONJ: conjunctions of disjunctions allowed here.
    # mode _DISJ: inside a disjunction; any conjunction disqualifies.
    todo = [(phi, mode)]
    while todo:
        node, mode = todo.pop()
        match node:
            case AndWI(a, b):
                if mode == _DISJ:
                    return False
                todo.append((a, _CONJ))
                todo.append((b, _CONJ))
            case OrWI(a, b):
                todo.append((a, _DISJ))
                todo.append((b, _DISJ))
            case NegWI(a):
                todo.append((a, mode))
            case VarWI(_) | ConstWI(_):
                pass
            case _:
                raise TypeError(f"not a FormulaWI: {node!r}")
    return True


def wf_conjunctions_of_disjunctions(phi: FormulaWI) -> bool:
    """True iff no conjunction occurs below any disjunction in `phi`.

    Together with `wf_negations_of_literals` this is conjunctive normal
    form: a conjunction of clauses, each clause a disjunction of literals.
    """
    return _wf_cnf_walk(phi, _CONJ)


def wf_disjunctions(phi: FormulaWI) -> bool:
    """True iff `phi` contains no conjunction at all (a single clause)."""
    return _wf_cnf_walk(phi, _DISJ)


def check_aux_lemma(phi: FormulaWI) -> bool:
    """Check one instance of the clause-shape implication.

    For any `phi` that is a conjunction of disjunctions, has negations
    only on literals, and is not itself a conjunction, `phi` must contain
    no conjunction anywhere.  Returns True when the implication holds for
    this `phi` (vacuously so when an antecedent fails); the test suite
    quantifies it over enumerated and random formulas.
    """
    antecedent = (
        wf_conjunctions_of_disjunctions(phi)
        and wf_negations_of_literals(phi)
        and not isinstance(phi, AndWI)
    )
    return (not antecedent) or wf_disjunctions(phi)
