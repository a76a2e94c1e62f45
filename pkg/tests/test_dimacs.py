from __future__ import annotations

import itertools

import pytest
from hypothesis import given

from cnfkit import (
    AndWI,
    ConstWI,
    NegWI,
    NotInCNF,
    OrWI,
    Valuation,
    VarWI,
    evaluate_wi,
    nnfc,
    cnfc,
    parse_dimacs,
    to_dimacs,
)
from conftest import formulas_wi
from corpus import enumerate_wi

P, Q, R = VarWI("p"), VarWI("q"), VarWI("r")


class TestExport:
    def test_two_clause_document(self):
        doc = to_dimacs(AndWI(OrWI(P, NegWI(Q)), R))
        assert doc.render() == "p cnf 3 2\n1 -2 0\n3 0\n"
        assert doc.atom_names == ("p", "q", "r")

    def test_constant_true_is_empty_document(self):
        assert to_dimacs(ConstWI(True)).render() == "p cnf 0 0\n"

    def test_true_clause_dropped(self):
        assert to_dimacs(OrWI(P, ConstWI(True))).render() == "p cnf 1 0\n"

    def test_false_literal_dropped(self):
        doc = to_dimacs(OrWI(P, ConstWI(False)))
        assert doc.render() == "p cnf 1 1\n1 0\n"

    def test_negated_constants(self):
        # ~false is a true literal; ~true is a false literal.
        assert to_dimacs(OrWI(P, NegWI(ConstWI(False)))).render() == "p cnf 1 0\n"
        assert to_dimacs(OrWI(P, NegWI(ConstWI(True)))).render() == "p cnf 1 1\n1 0\n"

    def test_empty_clause_makes_canonical_unsat(self):
        doc = to_dimacs(AndWI(P, ConstWI(False)))
        assert doc.render() == "p cnf 1 1\n0\n"
        assert doc.clauses == ((),)
        assert not doc.satisfied_by([True])

    def test_rejects_non_cnf(self):
        with pytest.raises(NotInCNF):
            to_dimacs(OrWI(P, AndWI(Q, R)))
        with pytest.raises(NotInCNF):
            to_dimacs(NegWI(AndWI(P, Q)))

    def test_numbering_first_occurrence(self):
        doc = to_dimacs(AndWI(OrWI(R, P), OrWI(Q, R)))
        assert doc.atom_names == ("r", "p", "q")
        assert doc.clauses == ((1, 2), (3, 1))


class TestRoundTrip:
    def test_reparse_identity(self):
        doc = to_dimacs(AndWI(OrWI(P, NegWI(Q)), OrWI(NegWI(P), R)))
        back = parse_dimacs(doc.render())
        assert back.num_vars == doc.num_vars
        assert back.clauses == doc.clauses

    def test_reader_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_dimacs("not a document")
        with pytest.raises(ValueError):
            parse_dimacs("p cnf 1 1\n1")  # unterminated clause

    def test_exhaustive_semantic_fidelity_constant_free(self):
        # Every constant-free CNF of small depth: the exported clause set
        # evaluates exactly like the formula on every assignment.
        checked = 0
        for phi in enumerate_wi(3, consts=False):
            cnf = cnfc(nnfc(phi))
            doc = to_dimacs(cnf)
            back = parse_dimacs(doc.render())
            names = doc.atom_names
            for bits in itertools.product((False, True), repeat=doc.num_vars):
                v = Valuation(dict(zip(names, bits)))
                assert back.satisfied_by(bits) == evaluate_wi(v, cnf)
            checked += 1
        assert checked == 1179

    @given(formulas_wi(max_leaves=10))
    def test_random_semantic_fidelity(self, phi):
        cnf = cnfc(nnfc(phi))
        doc = to_dimacs(cnf)
        names = doc.atom_names
        for bits in itertools.product((False, True), repeat=min(doc.num_vars, 6)):
            padded = list(bits) + [False] * (doc.num_vars - len(bits))
            v = Valuation(dict(zip(names, padded)))
            assert doc.satisfied_by(padded) == evaluate_wi(v, cnf)
