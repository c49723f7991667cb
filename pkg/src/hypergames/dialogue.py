"""Dialogues: pointer sequences of labelled moves over a transition system.

A dialogue is a sequence of moves, each carrying a back-reference to an
earlier position of opposite parity.  Threads (pointer chains) must be traces
of the underlying system.  Three validity modes are supported: unrestricted
backtracking, backtracking for the second player only, and the black-box
discipline where the first player may only import fresh variables.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from . import types as ty
from .transition import STAR, Label, State, TransitionSystem, enumerate_labels
from .types import TypeExpr, Var, free_vars, parse_type, pretty


class InvalidDialogueError(ValueError):
    """A dialogue violates pointer parity or walks off the board."""


class PreconditionError(ValueError):
    """A check was invoked on a dialogue outside its precondition."""


class Mode(enum.Enum):
    FULL = "full"
    P_BACKTRACKING = "p"
    BLACK_BOX = "black-box"


@dataclass(frozen=True)
class Move:
    """One move: a back-reference (0 points at the start) and a label."""

    back_ref: int
    label: Label

    def __str__(self) -> str:
        return f"({self.back_ref}) {self.label}"


Dialogue = tuple  # tuple[Move, ...]; positions are 1-based


def check_pointers(d) -> None:
    """Pointer discipline: each move points strictly back, across parity."""
    for i, move in enumerate(d, start=1):
        if not 0 <= move.back_ref < i:
            raise InvalidDialogueError(f"move {i} points at {move.back_ref}")
        if (i - move.back_ref) % 2 == 0:
            raise InvalidDialogueError(f"move {i} points at its own player's move")


def states_along(ts: TransitionSystem, d) -> list[State] | None:
    """State reached by each move along its thread; None if some step fails.

    Index 0 is the initial state; index i is the state after move i.
    """
    check_pointers(d)
    states: list[State] = [STAR]
    for move in d:
        src = states[move.back_ref]
        if src is None:
            states.append(None)
            continue
        states.append(ts.step(src, move.label))
    return None if any(s is None for s in states[1:]) else states


def respects(ts: TransitionSystem, d) -> bool:
    """Every thread of the dialogue is a trace of the system."""
    try:
        return states_along(ts, d) is not None
    except InvalidDialogueError:
        return False


def thread_positions(d, i: int) -> list[int]:
    """Positions of the thread ending at move i, in play order."""
    chain = []
    while i > 0:
        chain.append(i)
        i = d[i - 1].back_ref
    chain.reverse()
    return chain


def threads(d) -> list[list[Label]]:
    """Label sequences of the maximal threads, ordered by their last move."""
    pointed_at = {move.back_ref for move in d}
    out = []
    for i in range(1, len(d) + 1):
        if i not in pointed_at:
            out.append([d[j - 1].label for j in thread_positions(d, i)])
    return out


def is_p_backtracking(d) -> bool:
    """Odd moves extend the immediately preceding move."""
    return all(
        move.back_ref == i - 1 for i, move in enumerate(d, start=1) if i % 2 == 1
    )


def move_colour(ts: TransitionSystem, d, i: int, states=None) -> str:
    """Head variable of the state reached by move i."""
    if states is None:
        states = states_along(ts, d)
    if states is None:
        raise PreconditionError("dialogue does not respect the system")
    return ty.resolved_view(states[i]).head


def copycat_ok(ts: TransitionSystem, d) -> bool:
    """Every second-player move repeats the colour of the move before it."""
    states = states_along(ts, d)
    if states is None or not is_p_backtracking(d):
        raise PreconditionError("copycat check needs a respecting p-backtracking dialogue")
    for i in range(2, len(d) + 1, 2):
        if move_colour(ts, d, i, states) != move_colour(ts, d, i - 1, states):
            return False
    return True


def _o_boxes(d) -> list[str]:
    """Names imported by the first player so far, in play order."""
    boxes = []
    for i, move in enumerate(d, start=1):
        if i % 2 == 1:
            for v in move.label.imports:
                if isinstance(v, Var):
                    boxes.append(v.name)
    return boxes


def blackbox_ok(ts: TransitionSystem, d) -> bool:
    """Black-box discipline: first-player imports are fresh variables, second-
    player imports only mention those variables and the root's free ones."""
    if not is_p_backtracking(d) or not respects(ts, d):
        return False
    seen = set(free_vars(ts.root_type))
    for i, move in enumerate(d, start=1):
        if i % 2 == 1:
            for v in move.label.imports:
                if not isinstance(v, Var) or v.name in seen:
                    return False
                seen.add(v.name)
        else:
            for v in move.label.imports:
                if not free_vars(v) <= seen:
                    return False
    return True


def canonical_box_names(ambient, count: int, start: int = 0) -> list[str]:
    """Box names B0, B1, ... primed past any ambient collision."""
    names = []
    taken = set(ambient)
    for k in range(start, start + count):
        name = ty._fresh_name(f"B{k}", taken)
        taken.add(name)
        names.append(name)
    return names


def canonicalize_blackboxes(d, ambient=frozenset()):
    """Rename the first player's imported variables to B0, B1, ... in play
    order, renaming consistently in all later imports.  Returns the renamed
    dialogue and the mapping used."""
    rename: dict[str, str] = {}
    out = []
    for i, move in enumerate(d, start=1):
        if i % 2 == 1:
            new_imports = []
            for v in move.label.imports:
                if isinstance(v, Var) and v.name not in ambient:
                    if v.name not in rename:
                        fresh = canonical_box_names(
                            set(ambient) | set(rename.values()), 1, start=len(rename)
                        )[0]
                        rename[v.name] = fresh
                    new_imports.append(Var(rename[v.name]))
                else:
                    new_imports.append(v)
            label = Label(move.label.branch, tuple(new_imports))
        else:
            mapping = {old: Var(new) for old, new in rename.items()}
            label = Label(
                move.label.branch,
                tuple(ty.subst_map(v, mapping) for v in move.label.imports),
            )
        out.append(Move(move.back_ref, label))
    return tuple(out), rename


def fresh_box_label(ts: TransitionSystem, d, branch_type: TypeExpr, branch: int):
    """The forced first-player label at `branch_type`: one fresh box per
    available quantifier, named canonically by play order."""
    used = set(free_vars(ts.root_type)) | set(_o_boxes(d))
    start = len(_o_boxes(d))
    count = ty.available_count(branch_type)
    names = canonical_box_names(used, count, start=start)
    return Label(branch, tuple(Var(n) for n in names))


def legal_moves(
    ts: TransitionSystem,
    d,
    mode: Mode,
    universe=(),
    max_imports: int | None = None,
) -> list[Move]:
    """All single-move extensions of `d` that are valid in `mode`.

    In black-box mode the first player's imports are forced (fresh boxes), and
    the second player's import pool is the boxes seen so far plus `universe`.
    """
    states = states_along(ts, d)
    if states is None:
        raise PreconditionError("cannot extend a dialogue that fails to respect")
    n = len(d) + 1
    out: list[Move] = []
    if n % 2 == 1:
        backs = range(0, n, 2) if mode is Mode.FULL else [n - 1]
        for a in backs:
            src = states[a]
            if mode is Mode.BLACK_BOX:
                for i, bt in enumerate(ts.branches(src), start=1):
                    out.append(Move(a, fresh_box_label(ts, d, bt, i)))
            else:
                out.extend(Move(a, l) for l in enumerate_labels(ts, src, universe, max_imports))
    else:
        for a in range(1, n, 2):
            src = states[a]
            pool = tuple(universe)
            if mode is Mode.BLACK_BOX:
                pool = tuple(Var(b) for b in _o_boxes(d)) + pool
            out.extend(Move(a, l) for l in enumerate_labels(ts, src, pool, max_imports))
    return out


def dialogue_valid(ts: TransitionSystem, d, mode: Mode) -> bool:
    """Full validity of a dialogue in the given mode."""
    try:
        check_pointers(d)
    except InvalidDialogueError:
        return False
    if not respects(ts, d):
        return False
    if mode is Mode.FULL:
        return True
    if not is_p_backtracking(d):
        return False
    if mode is Mode.BLACK_BOX:
        return blackbox_ok(ts, d)
    return True


# ---------------------------------------------------------------------------
# trace sets

def erased_trace_set(
    ts: TransitionSystem,
    max_len: int,
    universe=(),
    max_imports: int | None = None,
    root_relative: bool = False,
) -> set[tuple[int, ...]]:
    """All branch-index sequences of traces up to `max_len` steps.

    With `root_relative`, traces start from the root state reached by an
    opening with no imports (only meaningful when the root resolves bare).
    """
    if root_relative:
        start = ts.step(STAR, Label(1))
        if start is None:
            raise PreconditionError("root type needs imports to resolve")
    else:
        start = STAR
    out: set[tuple[int, ...]] = {()}
    frontier: list[tuple[State, tuple[int, ...]]] = [(start, ())]
    while frontier:
        state, prefix = frontier.pop()
        if len(prefix) >= max_len:
            continue
        for label in enumerate_labels(ts, state, universe, max_imports):
            erased = prefix + (label.branch,)
            out.add(erased)
            frontier.append((ts.step(state, label), erased))
    return out


# ---------------------------------------------------------------------------
# trace file format

_LINE = re.compile(
    r"\s*(\d+)\s*:\s*\(\s*(\d+)\s*\)\s*branch\s*=\s*(\d+)\s*imports\s*=\s*\[([^\]]*)\]\s*$"
)


def format_dialogue(d) -> str:
    """One line per move: ``j: (a) branch=i imports=[T1;...;Tk]``."""
    lines = []
    for j, move in enumerate(d, start=1):
        imps = ";".join(pretty(v) for v in move.label.imports)
        lines.append(f"{j}: ({move.back_ref}) branch={move.label.branch} imports=[{imps}]")
    return "\n".join(lines)


def parse_dialogue(text: str):
    """Inverse of format_dialogue; ignores blank and ``#`` comment lines."""
    moves = []
    expected = 1
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE.match(line)
        if not m:
            raise InvalidDialogueError(f"bad trace line: {raw!r}")
        j, back, branch, imports_text = m.groups()
        if int(j) != expected:
            raise InvalidDialogueError(f"expected move number {expected}, got {j}")
        expected += 1
        imports = tuple(
            parse_type(part) for part in imports_text.split(";") if part.strip()
        )
        moves.append(Move(int(back), Label(int(branch), imports)))
    return tuple(moves)
