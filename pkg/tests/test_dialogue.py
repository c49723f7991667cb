"""Dialogues: pointer discipline, threads, modes, and the trace file format."""

import pytest

from hypergames.dialogue import (
    InvalidDialogueError,
    Mode,
    Move,
    PreconditionError,
    blackbox_ok,
    canonicalize_blackboxes,
    check_pointers,
    copycat_ok,
    dialogue_valid,
    format_dialogue,
    fresh_box_label,
    is_p_backtracking,
    legal_moves,
    move_colour,
    parse_dialogue,
    respects,
    thread_positions,
    threads,
)
from hypergames.transition import Label, TransitionSystem, build
from hypergames.types import Var, parse_type


def T(text):
    return parse_type(text)


def mk(*pairs):
    """Dialogue from (back_ref, branch) or (back_ref, branch, imports)."""
    out = []
    for p in pairs:
        back, branch = p[0], p[1]
        imports = tuple(p[2]) if len(p) > 2 else ()
        out.append(Move(back, Label(branch, imports)))
    return tuple(out)


class TestPointers:
    def test_ok(self):
        check_pointers(mk((0, 1), (1, 1), (2, 1), (1, 2)))

    def test_forward_pointer_rejected(self):
        with pytest.raises(InvalidDialogueError):
            check_pointers(mk((1, 1),))

    def test_same_parity_pointer_rejected(self):
        # move 3 pointing at move 1 would point at its own player
        with pytest.raises(InvalidDialogueError):
            check_pointers(mk((0, 1), (1, 1), (1, 1)))

    def test_even_move_cannot_point_at_start(self):
        with pytest.raises(InvalidDialogueError):
            check_pointers(mk((0, 1), (0, 1)))


class TestThreads:
    def test_interleaved_threads(self):
        # the classic interleaving shape: two games in one pointer sequence
        d = mk(
            (0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (3, 1),
            (6, 1), (3, 2), (0, 1), (7, 1),
        )
        assert thread_positions(d, 10) == [1, 2, 3, 6, 7, 10]
        assert thread_positions(d, 7) == [1, 2, 3, 6, 7]
        assert thread_positions(d, 9) == [9]
        maximal = threads(d)
        assert [len(t) for t in maximal] == [2, 3, 4, 1, 6]

    def test_single_thread(self):
        d = mk((0, 1), (1, 2), (2, 1))
        assert thread_positions(d, 3) == [1, 2, 3]
        assert threads(d) == [[Label(1), Label(2), Label(1)]]


class TestRespects:
    def test_respecting_dialogue(self):
        ts = build(T("X -> (X -> X) -> X"))
        assert respects(ts, mk((0, 1), (1, 2), (2, 1), (1, 1)))

    def test_bad_branch_fails(self):
        ts = build(T("X -> (X -> X) -> X"))
        assert not respects(ts, mk((0, 1), (1, 3)))

    def test_backtracking_thread(self):
        ts = build(T("X -> (X -> X) -> X"))
        # the second player backtracks: both answers hang off move 1
        d = mk((0, 1), (1, 2), (2, 1), (1, 1))
        assert respects(ts, d)
        assert is_p_backtracking(d)
        # an odd move not extending its predecessor breaks the discipline
        assert not is_p_backtracking(mk((0, 1), (1, 2), (0, 1)))


class TestColours:
    def test_colour_of_moves(self):
        ts = build(T("X -> Y -> X")    )
        d = mk((0, 1), (1, 1))
        assert move_colour(ts, d, 1) == "X"
        assert move_colour(ts, d, 2) == "X"

    def test_copycat(self):
        ts = build(T("X -> Y -> X"))
        assert copycat_ok(ts, mk((0, 1), (1, 1)))
        assert not copycat_ok(ts, mk((0, 1), (1, 2)))

    def test_copycat_precondition(self):
        ts = build(T("X -> Y -> X"))
        with pytest.raises(PreconditionError):
            copycat_ok(ts, mk((0, 1), (1, 3)))


class TestBlackBox:
    def test_fresh_import_accepted(self):
        ts = build(T("forall G. G -> G"))
        d = mk((0, 1, [Var("B0")]), (1, 1))
        assert blackbox_ok(ts, d)
        assert dialogue_valid(ts, d, Mode.BLACK_BOX)

    def test_stale_import_rejected(self):
        ts = build(T("forall G. G -> Z"))
        # Z is free in the root, so the first player may not import it
        d = mk((0, 1, [Var("Z")]),)
        assert not blackbox_ok(ts, d)

    def test_second_player_limited_to_seen_names(self):
        ts = build(T("forall G. (G -> G) -> G -> G"))
        d = mk((0, 1, [Var("B0")]), (1, 2))
        assert blackbox_ok(ts, d)
        bad = mk((0, 1, [Var("B0")]), (1, 1, [T("W")]))
        assert not blackbox_ok(ts, bad)

    def test_canonicalize(self):
        ts = build(T("forall G. G -> G"))
        d = mk((0, 1, [Var("FOO")]), (1, 1))
        canon, rename = canonicalize_blackboxes(d)
        assert rename == {"FOO": "B0"}
        assert canon == mk((0, 1, [Var("B0")]), (1, 1))

    def test_fresh_box_label_numbering(self):
        ts = build(T("forall G. forall H. G -> H"))
        label = fresh_box_label(ts, (), T("forall G. forall H. G -> H"), 1)
        assert label == Label(1, (Var("B0"), Var("B1")))


class TestLegalMoves:
    def test_full_mode_allows_backtracking(self):
        ts = build(T("X -> (X -> X) -> X"))
        d = mk((0, 1), (1, 2), (2, 1), (1, 1))
        opens = [m.back_ref for m in legal_moves(ts, d, Mode.FULL)]
        # the start and the X -> X state admit probes; the X states do not
        assert set(opens) == {0, 2}

    def test_p_mode_forces_last_move(self):
        ts = build(T("X -> Y -> X"))
        d = mk((0, 1), (1, 1))
        probes = legal_moves(ts, d, Mode.P_BACKTRACKING)
        assert all(m.back_ref == 2 for m in probes)
        assert len(probes) == 0  # state X has no branches

    def test_p_response_can_backtrack(self):
        ts = build(T("X -> (X -> X) -> X"))
        d = mk((0, 1), (1, 2), (2, 1))
        answers = legal_moves(ts, d, Mode.P_BACKTRACKING)
        # position 3 sits at X (no branches): every answer hangs off move 1
        assert {m.back_ref for m in answers} == {1}
        assert {m.label.branch for m in answers} == {1, 2}

    def test_blackbox_probe_is_forced(self):
        ts = build(T("forall G. G -> G"))
        probes = legal_moves(ts, (), Mode.BLACK_BOX)
        assert probes == [Move(0, Label(1, (Var("B0"),)))]

    def test_blackbox_answer_pool(self):
        ts = build(T("forall G. G -> G"))
        d = mk((0, 1, [Var("B0")]),)
        answers = legal_moves(ts, d, Mode.BLACK_BOX)
        assert Move(1, Label(1)) in answers

    def test_cannot_extend_invalid(self):
        ts = build(T("X -> Y"))
        with pytest.raises(PreconditionError):
            legal_moves(ts, mk((0, 1), (1, 5)), Mode.FULL)


class TestTraceFormat:
    def test_round_trip(self):
        d = mk((0, 1, [T("forall Y. Y"), T("Z -> Z")]), (1, 2), (2, 1))
        assert parse_dialogue(format_dialogue(d)) == d

    def test_comments_and_blanks_ignored(self):
        text = "# a comment\n\n1: (0) branch=1 imports=[]\n"
        assert parse_dialogue(text) == mk((0, 1))

    def test_bad_line_rejected(self):
        with pytest.raises(InvalidDialogueError):
            parse_dialogue("1: nonsense")

    def test_misnumbered_rejected(self):
        with pytest.raises(InvalidDialogueError):
            parse_dialogue("2: (0) branch=1 imports=[]")
