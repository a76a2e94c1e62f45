"""Propositional CNF conversion toolkit.

Three engines (direct recursion, continuation-passing style, and a
first-order stack machine) convert formulas to conjunctive normal form
and are kept in structural agreement by the test suite; executable
normal-form checkers and a truth-table oracle make every correctness
claim a runtime check.
"""

from .budget import DEFAULT_MAX_NODES, NodeBudget
from .cps import (
    DEFAULT_MAX_DEPTH,
    cnfc_cps,
    distr_cps,
    impl_free_cps,
    nnfc_cps,
    to_cnf_cps,
)
from .dimacs import DimacsDocument, parse_dimacs, to_dimacs
from .direct import cnfc, distr, impl_free, nnfc, to_cnf
from .errors import (
    CnfkitError,
    DepthLimitExceeded,
    FormulaSyntaxError,
    NotInCNF,
    OutputBudgetExceeded,
    PostconditionViolation,
    PreconditionViolation,
    StackInvariantViolation,
    TooManyAtoms,
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
    Valuation,
    Var,
    VarWI,
    as_wi,
    embed,
    evaluate,
    evaluate_wi,
    parse,
    parse_wi,
    size,
    subformulas,
    to_text,
)
from .machine import (
    CnfcKont,
    DistrKont,
    FrameSnapshot,
    ImplKont,
    NnfcKont,
    TraceEvent,
    check_cnfc_post,
    check_impl_post,
    check_nnfc_post,
    check_wf_cnfc_kont,
    check_wf_distr_kont,
    cnfc_machine,
    distr_machine,
    impl_free_machine,
    nnfc_machine,
    replay_trace,
    to_cnf_machine,
)
from .oracle import Counterexample, atoms, equivalent
from .wf import (
    check_aux_lemma,
    wf_conjunctions_of_disjunctions,
    wf_disjunctions,
    wf_negations_of_literals,
)

__version__ = "0.1.0"
