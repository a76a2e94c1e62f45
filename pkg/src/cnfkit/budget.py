"""Node-count guard shared by the three conversion engines.

Distributing disjunctions over conjunctions is worst-case exponential, so
every engine charges this guard once per node it builds during the
distribution phase and aborts with `OutputBudgetExceeded` instead of
exhausting memory.  The linear phases (implication removal, negation
pushing) are not charged; the final result is additionally checked
against the budget by tree node count, which also accounts for subtree
sharing.  All engines charge at the same logical points, so they agree on
whether a given conversion fits a given budget.
"""

from __future__ import annotations

from .errors import OutputBudgetExceeded

__all__ = ["NodeBudget", "UNLIMITED", "DEFAULT_MAX_NODES"]

DEFAULT_MAX_NODES = 10**6


class NodeBudget:
    """Mutable countdown of nodes an engine may still build."""

    __slots__ = ("remaining", "limit")

    def __init__(self, limit: int):
        self.limit = limit
        self.remaining = limit

    def charge(self, n: int = 1) -> None:
        self.remaining -= n
        if self.remaining < 0:
            raise OutputBudgetExceeded(self.limit)


class _Unlimited(NodeBudget):
    """Shared no-op budget used when no guard was requested."""

    def __init__(self):
        super().__init__(0)

    def charge(self, n: int = 1) -> None:
        pass


UNLIMITED = _Unlimited()
