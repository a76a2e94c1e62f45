from __future__ import annotations

import json
import time

import pytest
from hypothesis import given, settings

from cnfkit import (
    AndWI,
    CnfcKont,
    ConstWI,
    DistrKont,
    Impl,
    ImplKont,
    Neg,
    NegWI,
    NnfcKont,
    Or,
    OrWI,
    OutputBudgetExceeded,
    PreconditionViolation,
    TraceReplayError,
    Var,
    VarWI,
    check_cnfc_post,
    check_impl_post,
    check_nnfc_post,
    check_wf_cnfc_kont,
    check_wf_distr_kont,
    cnfc,
    cnfc_machine,
    distr,
    distr_machine,
    impl_free,
    impl_free_machine,
    nnfc,
    nnfc_machine,
    parse,
    replay_trace,
    to_cnf,
    to_cnf_machine,
)
from conftest import formulas, formulas_wi
from corpus import enumerate_formulas, random_corpus

P, Q, R = Var("p"), Var("q"), Var("r")
Pw, Qw, Rw = VarWI("p"), VarWI("q"), VarWI("r")
A, B, C, D = VarWI("a"), VarWI("b"), VarWI("c"), VarWI("d")


def collect(machine, *args, **kwargs):
    events = []
    result = machine(*args, events.append, **kwargs)
    return result, events


class TestImplFreeMachine:
    def test_variable_trace(self):
        result, events = collect(impl_free_machine, P)
        assert result == Pw
        assert [(e.mode, e.focus) for e in events] == [("descend", "p"), ("apply", "p")]
        assert all([f.frame for f in e.stack] == ["Id"] for e in events)

    def test_implication(self):
        assert impl_free_machine(Impl(P, Q)) == OrWI(NegWI(Pw), Qw)

    def test_negation_frame_pushed_then_popped(self):
        result, events = collect(impl_free_machine, Neg(P))
        assert result == NegWI(Pw)
        frames = [[f.frame for f in e.stack] for e in events]
        assert frames == [["Id"], ["Neg", "Id"], ["Neg", "Id"], ["Id"]]

    @given(formulas())
    def test_matches_direct(self, phi):
        assert impl_free_machine(phi) == impl_free(phi)


class TestNnfcMachine:
    def test_double_negation(self):
        assert nnfc_machine(NegWI(NegWI(Pw))) == Pw

    def test_literal(self):
        assert nnfc_machine(Pw) == Pw

    def test_negated_disjunction_pushes_both_frames(self):
        result, events = collect(nnfc_machine, NegWI(OrWI(Pw, Qw)))
        assert result == AndWI(NegWI(Pw), NegWI(Qw))
        tops = [e.stack[0].frame for e in events]
        assert "NegOrLeft" in tops and "NegOrRight" in tops

    @given(formulas_wi())
    def test_matches_direct(self, phi):
        assert nnfc_machine(phi) == nnfc(phi)


class TestDistrMachine:
    def test_examples(self):
        assert distr_machine(A, AndWI(B, C)) == AndWI(OrWI(A, B), OrWI(A, C))
        assert distr_machine(A, B) == OrWI(A, B)
        assert distr_machine(AndWI(A, B), AndWI(C, D)) == distr(
            AndWI(A, B), AndWI(C, D)
        )

    def test_checked_rejects_bad_args(self):
        with pytest.raises(PreconditionViolation):
            distr_machine(NegWI(AndWI(A, B)), C, checked=True)
        with pytest.raises(PreconditionViolation):
            distr_machine(A, OrWI(B, AndWI(C, D)), checked=True)

    @given(formulas_wi(max_leaves=10), formulas_wi(max_leaves=10))
    def test_matches_direct_on_cnf_args(self, x, y):
        a, b = cnfc(nnfc(x)), cnfc(nnfc(y))
        assert distr_machine(a, b, checked=True) == distr(a, b)


class TestCnfcMachine:
    def test_examples(self):
        assert cnfc_machine(OrWI(Pw, AndWI(Qw, Rw))) == AndWI(
            OrWI(Pw, Qw), OrWI(Pw, Rw)
        )
        assert cnfc_machine(Pw) == Pw
        already = AndWI(Pw, OrWI(Qw, Rw))
        assert cnfc_machine(already) == already

    def test_checked_rejects_non_nnf(self):
        with pytest.raises(PreconditionViolation):
            cnfc_machine(NegWI(AndWI(Pw, Qw)), checked=True)

    def test_nested_distr_events_share_the_step_counter(self):
        _, events = collect(cnfc_machine, OrWI(AndWI(Pw, Qw), Rw))
        assert [e.step for e in events] == list(range(len(events)))
        assert {e.stage for e in events} == {"cnfc", "distr"}

    @given(formulas_wi())
    def test_matches_direct(self, phi):
        nnf = nnfc(phi)
        assert cnfc_machine(nnf) == cnfc(nnf)


class TestToCnfMachine:
    def test_examples(self):
        assert to_cnf_machine(Neg(Impl(P, Q))) == AndWI(Pw, NegWI(Qw))
        assert to_cnf_machine(parse("true")) == ConstWI(True)
        assert to_cnf_machine(Impl(P, Q)) == OrWI(NegWI(Pw), Qw)

    def test_trace_lengths_recorded(self):
        for text, expected_result in [
            ("p -> q", "~p | q"),
            ("~(p -> q)", "p & ~q"),
            ("true", "true"),
        ]:
            result, events = collect(to_cnf_machine, parse(text))
            assert str(result) == expected_result
            assert len(events) >= 6
            assert events[-1].mode == "apply"
            assert [f.frame for f in events[-1].stack] == ["Id"]

    def test_exhaustive_depth2_matches_direct(self):
        for phi in enumerate_formulas(2):
            assert to_cnf_machine(phi) == to_cnf(phi)

    @settings(max_examples=150)
    @given(formulas())
    def test_matches_direct(self, phi):
        assert to_cnf_machine(phi) == to_cnf(phi)

    def test_budget_parity_with_direct(self):
        phi = parse("(a & b | (c & d | e & f)) & (x & y | w & z)")
        with pytest.raises(OutputBudgetExceeded):
            to_cnf(phi, max_nodes=20)
        with pytest.raises(OutputBudgetExceeded):
            to_cnf_machine(phi, max_nodes=20)
        assert to_cnf_machine(phi) == to_cnf(phi)


class TestPostPredicates:
    def test_impl_identity_frame(self):
        assert check_impl_post(ImplKont.ID, Pw, Pw) is True
        assert check_impl_post(ImplKont.ID, Pw, Qw) is False

    def test_impl_neg_frame_unfolding(self):
        k = ImplKont.Neg(ImplKont.ID, P)
        assert check_impl_post(k, Pw, NegWI(Pw)) is True
        assert check_impl_post(k, Pw, Pw) is False

    def test_impl_left_frame_resolves_pending_work(self):
        k = ImplKont.OrLeft(Impl(P, Q), ImplKont.ID)
        assert check_impl_post(k, Rw, OrWI(Rw, OrWI(NegWI(Pw), Qw))) is True

    def test_nnfc_frames(self):
        assert check_nnfc_post(NnfcKont.ID, Pw, Pw) is True
        k = NnfcKont.OrRight(NnfcKont.ID, Qw)
        assert check_nnfc_post(k, Pw, OrWI(Qw, Pw)) is True
        assert check_nnfc_post(k, Pw, OrWI(Pw, Qw)) is False
        # The double-negation frame passes the value through untouched.
        k2 = NnfcKont.NegNeg(NnfcKont.ID, Qw)
        assert check_nnfc_post(k2, Pw, Pw) is True

    def test_cnfc_frames(self):
        assert check_cnfc_post(CnfcKont.ID, Pw, Pw) is True
        k = CnfcKont.AndRight(CnfcKont.ID, Qw)
        assert check_cnfc_post(k, Pw, AndWI(Qw, Pw)) is True
        korl = CnfcKont.OrLeft(AndWI(Qw, Rw), CnfcKont.ID)
        # Pending side converts to CNF before distribution.
        assert check_cnfc_post(korl, Pw, AndWI(OrWI(Pw, Qw), OrWI(Pw, Rw))) is True


class TestStackWellFormedness:
    def test_identity_stacks(self):
        assert check_wf_cnfc_kont(CnfcKont.ID) is True
        assert check_wf_distr_kont(DistrKont.ID) is True

    def test_cnfc_right_frame_requires_cnf_payload(self):
        bad = CnfcKont.OrRight(CnfcKont.ID, OrWI(Pw, AndWI(Qw, Rw)))
        assert check_wf_cnfc_kont(bad) is False
        good = CnfcKont.OrRight(CnfcKont.ID, OrWI(Pw, Qw))
        assert check_wf_cnfc_kont(good) is True

    def test_cnfc_left_frame_requires_nnf_payload(self):
        bad = CnfcKont.OrLeft(NegWI(AndWI(Pw, Qw)), CnfcKont.ID)
        assert check_wf_cnfc_kont(bad) is False
        # Left payloads may still contain conjunctions under disjunctions.
        pending = OrWI(Pw, AndWI(Qw, Rw))
        assert check_wf_cnfc_kont(CnfcKont.OrLeft(pending, CnfcKont.ID)) is True

    def test_distr_frames_require_cnf_payloads(self):
        bad = DistrKont.Left(OrWI(Pw, AndWI(Qw, Rw)), Pw, DistrKont.ID)
        assert check_wf_distr_kont(bad) is False
        ok = DistrKont.Left(OrWI(Pw, Qw), AndWI(Pw, Rw), DistrKont.ID)
        assert check_wf_distr_kont(ok) is True
        assert check_wf_distr_kont(DistrKont.Right(DistrKont.ID, NegWI(Pw))) is True
        assert (
            check_wf_distr_kont(DistrKont.Right(DistrKont.ID, NegWI(NegWI(Pw))))
            is False
        )


class TestCheckedRuns:
    def test_exhaustive_depth2(self):
        for phi in enumerate_formulas(2):
            assert to_cnf_machine(phi, checked=True) == to_cnf(phi)

    def test_random_corpus_slice(self):
        for phi in random_corpus(100, seed=13):
            assert to_cnf_machine(phi, checked=True) == to_cnf(phi)


class TestTraces:
    def test_step_indices_contiguous_and_final_stack_id(self):
        for phi in random_corpus(40, seed=99):
            _, events = collect(to_cnf_machine, phi)
            assert [e.step for e in events] == list(range(len(events)))
            assert events[0].mode == "descend"
            assert events[-1].mode == "apply"
            assert [f.frame for f in events[-1].stack] == ["Id"]
            assert all(e.depth == len(e.stack) for e in events)

    def test_replay_reproduces_result(self):
        for phi in random_corpus(40, seed=98):
            result, events = collect(to_cnf_machine, phi)
            assert replay_trace(events) == result

    def test_replay_each_stage_machine(self):
        result, events = collect(impl_free_machine, Impl(P, Q))
        assert replay_trace(events) == result
        result, events = collect(nnfc_machine, NegWI(OrWI(Pw, Qw)))
        assert replay_trace(events) == result
        result, events = collect(cnfc_machine, OrWI(AndWI(Pw, Qw), Rw))
        assert replay_trace(events) == result
        result, events = collect(distr_machine, AndWI(A, B), AndWI(C, D))
        assert replay_trace(events) == result

    def test_replay_detects_tampering(self):
        _, events = collect(to_cnf_machine, parse("p -> q & r"))
        tampered = list(events)
        tampered[3] = tampered[3].__class__(
            step=3,
            stage=tampered[3].stage,
            mode=tampered[3].mode,
            focus="q | q",
            stack=tampered[3].stack,
            depth=tampered[3].depth,
        )
        with pytest.raises(TraceReplayError):
            replay_trace(tampered)
        with pytest.raises(TraceReplayError):
            replay_trace(events[:-2])
        with pytest.raises(TraceReplayError):
            replay_trace([])

    def test_json_schema(self):
        _, events = collect(to_cnf_machine, parse("~(p | q)"))
        for event in events:
            record = json.loads(event.to_json())
            assert list(record) == ["step", "stage", "mode", "focus", "stack", "depth"]
            assert isinstance(record["step"], int)
            assert record["stage"] in {"impl_free", "nnfc", "cnfc", "distr"}
            assert record["mode"] in {"descend", "apply"}
            assert isinstance(record["focus"], str)
            assert record["depth"] == len(record["stack"])
            for frame in record["stack"]:
                assert list(frame) == ["frame", "payload"]
                assert isinstance(frame["payload"], list)

    def test_untraced_runs_skip_pretty_printing(self, monkeypatch):
        import cnfkit.machine as machine_mod

        def boom(*_args, **_kwargs):
            raise AssertionError("to_text called without a sink")

        monkeypatch.setattr(machine_mod, "to_text", boom)
        assert to_cnf_machine(parse("p -> q")) == OrWI(NegWI(Pw), Qw)


class TestConstantStackSpace:
    def test_deep_negation_chain(self):
        depth = 100_000
        phi = P
        for _ in range(depth):
            phi = Neg(phi)
        start = time.monotonic()
        result = to_cnf_machine(phi)
        elapsed = time.monotonic() - start
        assert result == Pw  # even number of negations
        assert elapsed < 5.0

    def test_deep_odd_chain(self):
        phi = P
        for _ in range(100_001):
            phi = Neg(phi)
        assert to_cnf_machine(phi) == NegWI(Pw)
