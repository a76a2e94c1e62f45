"""Exception hierarchy shared by all cnfkit modules."""

from __future__ import annotations


class CnfkitError(Exception):
    """Base class for all errors raised by cnfkit."""


class FormulaSyntaxError(CnfkitError):
    """Malformed concrete syntax.

    Carries the byte offset of the offending token and the set of token
    descriptions that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: frozenset[str]):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.expected = expected


class PreconditionViolation(CnfkitError):
    """A checked-mode call received an argument outside its contract."""


class PostconditionViolation(CnfkitError):
    """A checked-mode run produced a state violating its output contract."""


class StackInvariantViolation(CnfkitError):
    """A machine continuation stack failed its well-formedness invariant."""


class OutputBudgetExceeded(CnfkitError):
    """CNF conversion hit the configured node-count guard.

    Plain distribution of disjunctions over conjunctions is worst-case
    exponential; the guard turns a potential out-of-memory into an error.
    """

    def __init__(self, limit: int):
        super().__init__(f"output would exceed the {limit}-node budget")
        self.limit = limit


class DepthLimitExceeded(CnfkitError):
    """The CPS engine hit its configured recursion-depth bound."""

    def __init__(self, limit: int):
        super().__init__(f"continuation nesting exceeded the depth bound {limit}")
        self.limit = limit


class TooManyAtoms(CnfkitError):
    """Truth-table enumeration refused: too many distinct atoms."""

    def __init__(self, count: int, limit: int):
        super().__init__(f"{count} atoms exceed the enumeration limit {limit}")
        self.count = count
        self.limit = limit


class NotInCNF(CnfkitError):
    """DIMACS export requires a formula in conjunctive normal form."""


class TraceReplayError(CnfkitError):
    """A recorded trace does not match a fresh run of the machine."""
