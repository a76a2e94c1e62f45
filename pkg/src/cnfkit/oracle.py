"""Brute-force semantic equivalence by exhaustive truth-table enumeration.

This is the independent referee for the conversion engines: it never
looks at formula structure beyond collecting atoms and evaluating, so it
shares no code path with the normalizers it judges.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TooManyAtoms
from .formula import (
    Formula,
    FormulaWI,
    Valuation,
    Var,
    VarWI,
    evaluate,
    evaluate_wi,
    subformulas,
)

__all__ = ["atoms", "equivalent", "Counterexample", "DEFAULT_MAX_ATOMS"]

DEFAULT_MAX_ATOMS = 20


def atoms(phi: Formula | FormulaWI) -> list[str]:
    """Atom names of `phi` in first-occurrence order, without duplicates."""
    seen = set()
    out: list[str] = []
    for node in subformulas(phi):
        if isinstance(node, (Var, VarWI)) and node.name not in seen:
            seen.add(node.name)
            out.append(node.name)
    return out


@dataclass(frozen=True)
class Counterexample:
    """A valuation separating two formulas.  Falsy, so that
    ``equivalent(...)`` reads naturally in conditions while still carrying
    the witness."""

    valuation: Valuation
    atoms: tuple[str, ...]

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        if not self.atoms:
            return "(no atoms)"
        return " ".join(
            f"{name}={'true' if self.valuation(name) else 'false'}"
            for name in self.atoms
        )


def equivalent(
    phi: Formula,
    psi: FormulaWI,
    *,
    max_atoms: int = DEFAULT_MAX_ATOMS,
):
    """Check logical equivalence over all valuations of the shared atoms.

    Valuations are enumerated by counting in binary with the first
    occurring atom as the least significant bit, so the returned
    `Counterexample` (if any) is deterministic: it is the first differing
    valuation in that order.  Returns True when no valuation differs.
    Raises `TooManyAtoms` when the union of atom sets exceeds
    `max_atoms`.
    """
    names = atoms(phi)
    seen = set(names)
    for name in atoms(psi):
        if name not in seen:
            seen.add(name)
            names.append(name)
    if len(names) > max_atoms:
        raise TooManyAtoms(len(names), max_atoms)
    for bits in range(1 << len(names)):
        v = Valuation({name: bool((bits >> i) & 1) for i, name in enumerate(names)})
        if evaluate(v, phi) != evaluate_wi(v, psi):
            return Counterexample(v, tuple(names))
    return True
