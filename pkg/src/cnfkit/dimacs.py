"""DIMACS CNF export for formulas in conjunctive normal form.

The core pipeline never folds constants, so the export is where `true`
and `false` get resolved: a clause containing a true literal is dropped,
a false literal is dropped from its clause.  A clause left empty makes
the whole document the canonical unsatisfiable one (a single empty
clause); a document left without clauses is the trivially satisfiable
``p cnf n 0``.  Atoms are numbered 1..n in first-occurrence order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotInCNF
from .formula import AndWI, ConstWI, FormulaWI, NegWI, OrWI, VarWI
from .oracle import atoms
from .wf import wf_conjunctions_of_disjunctions, wf_negations_of_literals

__all__ = ["DimacsDocument", "to_dimacs", "parse_dimacs"]


@dataclass(frozen=True)
class DimacsDocument:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    atom_names: tuple[str, ...] = field(default=())  # atom_names[i-1] is var i

    def render(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        for clause in self.clauses:
            lines.append(" ".join(str(lit) for lit in clause + (0,)))
        return "\n".join(lines) + "\n"

    def satisfied_by(self, bits: Sequence[bool]) -> bool:
        """Evaluate the clause set; ``bits[i-1]`` is the value of var i."""
        return all(
            any(bits[abs(lit) - 1] == (lit > 0) for lit in clause)
            for clause in self.clauses
        )


def _flatten_and(phi: FormulaWI) -> list[FormulaWI]:
    # Left-to-right clause order.
    out: list[FormulaWI] = []
    todo = [phi]
    while todo:
        node = todo.pop()
        if isinstance(node, AndWI):
            todo.append(node.right)
            todo.append(node.left)
        else:
            out.append(node)
    return out


def _clause_literals(clause: FormulaWI, index: dict[str, int]) -> tuple[int, ...] | None:
    """Literal list of one clause in source order, or None when it is true."""
    lits: list[int] = []
    todo = [clause]
    while todo:
        node = todo.pop()
        match node:
            case OrWI(a, b):
                todo.append(b)
                todo.append(a)
            case VarWI(x):
                lits.append(index[x])
            case NegWI(VarWI(x)):
                lits.append(-index[x])
            case ConstWI(b):
                if b:
                    return None
            case NegWI(ConstWI(b)):
                if not b:
                    return None
            case _:
                raise NotInCNF(f"clause contains a non-literal: {node}")
    return tuple(lits)


def to_dimacs(phi: FormulaWI) -> DimacsDocument:
    """Export a CNF formula as a DIMACS document.

    Requires `phi` to pass `wf_negations_of_literals` and
    `wf_conjunctions_of_disjunctions`; raises `NotInCNF` otherwise.
    """
    if not wf_negations_of_literals(phi):
        raise NotInCNF("formula fails wf_negations_of_literals")
    if not wf_conjunctions_of_disjunctions(phi):
        raise NotInCNF("formula fails wf_conjunctions_of_disjunctions")

    names = atoms(phi)
    index = {name: i + 1 for i, name in enumerate(names)}
    clauses: list[tuple[int, ...]] = []
    for clause in _flatten_and(phi):
        lits = _clause_literals(clause, index)
        if lits is None:
            continue  # clause contains `true`
        if not lits:
            # An empty clause is unsatisfiable, hence so is the whole set.
            return DimacsDocument(len(names), ((),), tuple(names))
        clauses.append(lits)
    return DimacsDocument(len(names), tuple(clauses), tuple(names))


def parse_dimacs(text: str) -> DimacsDocument:
    """Re-read a rendered document (self-check reader, not a general parser)."""
    num_vars = None
    declared = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[:2] != ["p", "cnf"]:
                raise ValueError(f"bad DIMACS header: {line!r}")
            num_vars, declared = int(parts[2]), int(parts[3])
            continue
        for token in line.split():
            lit = int(token)
            if lit == 0:
                clauses.append(tuple(current))
                current.clear()
            else:
                current.append(lit)
    if num_vars is None:
        raise ValueError("missing DIMACS header")
    if current:
        raise ValueError("unterminated clause")
    if declared != len(clauses):
        raise ValueError(f"header declares {declared} clauses, found {len(clauses)}")
    names = tuple(f"x{i}" for i in range(1, num_vars + 1))
    return DimacsDocument(num_vars, tuple(clauses), names)
