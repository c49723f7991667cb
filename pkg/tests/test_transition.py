"""Boards: steps, label enumeration, trace sets, graph unfolding."""

import pytest

from hypergames.transition import (
    STAR,
    Label,
    TransitionSystem,
    UndefinedTransitionError,
    UntypedSystem,
    build,
    default_import_cap,
    enumerate_labels,
    erase_imports,
    import_sequences,
    is_lambda_type,
    reachable_graph,
    resolve_branch,
    to_dot,
)
from hypergames.dialogue import erased_trace_set
from hypergames.types import parse_type, pretty


def T(text):
    return parse_type(text)


class TestStep:
    def test_opening_on_lambda_type(self):
        ts = build(T("X -> Y -> X"))
        assert ts.step(STAR, Label(1)) == T("X -> Y -> X")

    def test_quantified_opening_with_imports(self):
        # frozen example: stepping the board of forall X. X -> X
        ts = build(T("forall X. X -> X"))
        assert ts.step(STAR, Label(1, (T("forall Y. Y"), T("Z1 -> Z2 -> Z")))) == T(
            "(forall Y. Y) -> Z1 -> Z2 -> Z"
        )

    def test_missing_imports_undefined(self):
        ts = build(T("forall X. X -> X"))
        assert ts.step(STAR, Label(1)) is None
        with pytest.raises(UndefinedTransitionError):
            ts.step_or_raise(STAR, Label(1))

    def test_surplus_imports_undefined(self):
        ts = build(T("X -> Y"))
        assert ts.step(STAR, Label(1, (T("Z"),))) is None

    def test_branch_out_of_range(self):
        ts = build(T("X -> Y"))
        state = ts.step(STAR, Label(1))
        assert ts.step(state, Label(2)) is None

    def test_inner_step(self):
        ts = build(T("(X -> X) -> Y -> Z"))
        state = ts.step(STAR, Label(1))
        assert ts.step(state, Label(1)) == T("X -> X")
        assert ts.step(state, Label(2)) == T("Y")

    def test_colour_is_head_of_target(self):
        ts = build(T("(X -> X) -> Y -> Z"))
        state = ts.step(STAR, Label(1))
        assert ts.colour(state, Label(1)) == "X"
        assert ts.colour(state, Label(2)) == "Y"

    def test_run_and_is_trace(self):
        ts = build(T("X -> (X -> X) -> X"))
        assert ts.is_trace([Label(1), Label(2), Label(1)])
        assert not ts.is_trace([Label(1), Label(3)])
        assert ts.run([Label(1), Label(2)]) == T("X -> X")
        assert ts.run([Label(1), Label(2), Label(1)]) == T("X")


class TestResolveBranch:
    def test_exact_resolution(self):
        assert resolve_branch(T("forall X. X -> X"), [T("Z")]) == T("Z -> Z")

    def test_under_resolution_is_none(self):
        assert resolve_branch(T("forall X. forall Y. X"), [T("Z")]) is None

    def test_over_resolution_is_none(self):
        assert resolve_branch(T("Z"), [T("W")]) is None


class TestEnumeration:
    def test_lambda_type_has_unique_opening(self):
        ts = build(T("X -> Y -> X"))
        assert enumerate_labels(ts, STAR, ()) == [Label(1)]

    def test_quantified_opening_needs_universe(self):
        ts = build(T("forall X. X -> X"))
        assert enumerate_labels(ts, STAR, ()) == []
        labels = enumerate_labels(ts, STAR, (T("Z"),))
        assert labels == [Label(1, (T("Z"),))]

    def test_import_introducing_new_quantifiers(self):
        # importing forall Y. Y re-opens a quantifier, consuming budget
        seqs = list(import_sequences(T("forall X. X -> X"), (T("forall Y. Y"), T("Z"))))
        assert (T("Z"),) in seqs
        assert (T("forall Y. Y"), T("Z")) in seqs
        assert all(len(s) <= default_import_cap(T("forall X. X -> X"), (T("forall Y. Y"), T("Z"))) for s in seqs)

    def test_cap_is_exhaustive_for_quantifier_free_universe(self):
        t = T("forall X. forall Y. X -> Y")
        seqs = set(import_sequences(t, (T("Z1"), T("Z2"))))
        assert seqs == {
            (T("Z1"), T("Z1")),
            (T("Z1"), T("Z2")),
            (T("Z2"), T("Z1")),
            (T("Z2"), T("Z2")),
        }

    def test_erase_imports(self):
        assert erase_imports(Label(3, (T("Z"),))) == 3

    def test_label_str(self):
        assert str(Label(2)) == "<2>"
        assert str(Label(1, (T("Z -> Z"),))) == "<1, Z -> Z>"


class TestTraceSets:
    def test_example_trace_set(self):
        # frozen example: traces of X -> (X -> X) -> X up to length 4
        ts = build(T("X -> (X -> X) -> X"))
        got = erased_trace_set(ts, 4)
        assert got == {(), (1,), (1, 1), (1, 2), (1, 2, 1)}

    def test_second_example_both_readings(self):
        # frozen via independent hand-walk of the board
        ts = build(T("X -> Y -> X"))
        assert erased_trace_set(ts, 4) == {(), (1,), (1, 1), (1, 2)}
        assert erased_trace_set(ts, 4, root_relative=True) == {(), (1,), (2,)}


class TestGraph:
    def test_unfolding_is_tree(self):
        ts = build(T("X -> (X -> X) -> X"))
        states, edges = reachable_graph(ts, 3)
        assert states[0] is STAR
        assert len(edges) == len(states) - 1

    def test_dot_output(self):
        ts = build(T("X -> Y"))
        dot = to_dot(ts, 2)
        assert dot.startswith("digraph game {")
        assert 'label="X -> Y"' in dot
        assert "->" in dot


class TestUntyped:
    def test_accepts_any_positive_branch_sequence(self):
        u = UntypedSystem()
        assert u.is_trace([1, 5, 2])
        assert not u.is_trace([0])
        assert u.step(STAR, 3) is STAR

    def test_is_lambda_type(self):
        assert is_lambda_type(T("X -> Y -> X"))
        assert not is_lambda_type(T("forall X. X"))
        assert not is_lambda_type(T("(forall X. X) -> Y"))
