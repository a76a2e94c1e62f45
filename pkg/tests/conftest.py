from __future__ import annotations

import sys

import hypothesis.strategies as st
from hypothesis import settings

from cnfkit import And, AndWI, Const, ConstWI, Impl, Neg, NegWI, Or, OrWI, Var, VarWI

# CNF outputs nest conjunctions a few hundred levels deep in the worst
# corpus cases; give the host-recursive engines and dataclass equality
# room to breathe while staying far from C-stack exhaustion.
sys.setrecursionlimit(12_000)

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

_names = st.sampled_from(("p", "q", "r", "s", "t"))


def formulas(max_leaves: int = 20) -> st.SearchStrategy:
    base = st.builds(Var, _names) | st.builds(Const, st.booleans())
    return st.recursive(
        base,
        lambda sub: st.one_of(
            st.builds(Neg, sub),
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
            st.builds(Impl, sub, sub),
        ),
        max_leaves=max_leaves,
    )


def formulas_wi(max_leaves: int = 20) -> st.SearchStrategy:
    base = st.builds(VarWI, _names) | st.builds(ConstWI, st.booleans())
    return st.recursive(
        base,
        lambda sub: st.one_of(
            st.builds(NegWI, sub),
            st.builds(AndWI, sub, sub),
            st.builds(OrWI, sub, sub),
        ),
        max_leaves=max_leaves,
    )
