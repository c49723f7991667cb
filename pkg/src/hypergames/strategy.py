"""Strategies: deterministic prefix-closed play trees for the second player."""

from __future__ import annotations

from dataclasses import dataclass

from .dialogue import (
    Mode,
    Move,
    canonicalize_blackboxes,
    copycat_ok,
    dialogue_valid,
    format_dialogue,
    legal_moves,
    move_colour,
    parse_dialogue,
    states_along,
)
from .transition import TransitionSystem, is_lambda_type
from .types import free_vars, pretty


@dataclass(frozen=True)
class Strategy:
    """A set of plays, closed under prefixes, with unique P-responses."""

    plays: frozenset

    @staticmethod
    def from_plays(plays) -> "Strategy":
        closed = set()
        for play in plays:
            for k in range(len(play) + 1):
                closed.add(tuple(play[:k]))
        return Strategy(frozenset(closed))

    def maximal_plays(self) -> list:
        prefixes = {play[:-1] for play in self.plays if play}
        return sorted((p for p in self.plays if p not in prefixes), key=_play_key)

    def respond(self, play) -> Move | None:
        """The unique answer to an odd-length play, if any."""
        for p in self.plays:
            if len(p) == len(play) + 1 and p[: len(play)] == play:
                return p[-1]
        return None

    def __contains__(self, play) -> bool:
        return tuple(play) in self.plays


def _move_key(move: Move):
    return (
        move.back_ref,
        move.label.branch,
        tuple(pretty(v) for v in move.label.imports),
    )


def _play_key(play):
    return (len(play), tuple(_move_key(m) for m in play))


@dataclass(frozen=True)
class Violation:
    play: tuple
    reason: str


def validate_strategy_witness(
    ts: TransitionSystem, sigma: Strategy, mode: Mode
) -> Violation | None:
    """First violating play of the strategy laws, or None when valid."""
    if () not in sigma.plays:
        return Violation((), "missing empty play")
    for play in sorted(sigma.plays, key=_play_key):
        if play and play[:-1] not in sigma.plays:
            return Violation(play, "not prefix-closed")
        if not dialogue_valid(ts, play, mode):
            return Violation(play, f"play invalid in mode {mode.value}")
        if len(play) % 2 == 1:
            answers = {
                p[-1] for p in sigma.plays if len(p) == len(play) + 1 and p[:-1] == play
            }
            if len(answers) > 1:
                return Violation(play, "more than one answer")
    return None


def validate_strategy(ts: TransitionSystem, sigma: Strategy, mode: Mode) -> bool:
    return validate_strategy_witness(ts, sigma, mode) is None


@dataclass(frozen=True)
class Liveness:
    """Result of a liveness check.  In modes where the first player draws
    imports from a supplied universe, the verdict is only relative to it."""

    ok: bool
    relative_to_universe: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_live(
    ts: TransitionSystem,
    sigma: Strategy,
    mode: Mode,
    universe=(),
    max_imports: int | None = None,
) -> Liveness:
    """Does the strategy answer every legal first-player extension of every
    even play it contains?"""
    relative = mode is not Mode.BLACK_BOX and not is_lambda_type(ts.root_type)
    for play in sigma.plays:
        if len(play) % 2 != 0:
            continue
        for o_move in legal_moves(ts, play, mode, universe, max_imports):
            extended = play + (o_move,)
            probe = extended
            if mode is Mode.BLACK_BOX:
                # answers are stored with canonical box names already
                probe, _ = canonicalize_blackboxes(extended, free_vars(ts.root_type))
            if sigma.respond(probe) is None:
                return Liveness(False, relative, witness=extended)
    return Liveness(True, relative)


def copycat_ok_strategy(ts: TransitionSystem, sigma: Strategy) -> bool:
    """Every play of the strategy satisfies the copycat condition."""
    return all(copycat_ok(ts, play) for play in sigma.plays if play)


def enumerate_strategies(
    ts: TransitionSystem,
    mode: Mode,
    depth_bound: int,
    universe=(),
    max_imports: int | None = None,
    require_copycat: bool = True,
) -> list[Strategy]:
    """All live strategies whose plays have length at most `depth_bound`.

    Generation is cut off at the bound, then candidates whose liveness fails
    at their boundary plays are discarded, so the result is exactly the finite
    live (optionally copycat) strategies that fit within the bound.
    """

    def subtrees(play) -> list[frozenset]:
        if len(play) + 2 > depth_bound:
            return [frozenset()]
        per_o = []
        for o_move in legal_moves(ts, play, mode, universe, max_imports):
            p1 = play + (o_move,)
            states = states_along(ts, p1)
            options = []
            for r_move in legal_moves(ts, p1, mode, universe, max_imports):
                p2 = p1 + (r_move,)
                if require_copycat:
                    s2 = states_along(ts, p2)
                    if move_colour(ts, p2, len(p2), s2) != move_colour(
                        ts, p2, len(p2) - 1, s2
                    ):
                        continue
                for rest in subtrees(p2):
                    options.append(frozenset((p1, p2)) | rest)
            if not options:
                return []  # no answer to a reachable probe: nothing live here
            per_o.append(options)
        result = [frozenset()]
        for options in per_o:
            result = [acc | opt for acc in result for opt in options]
        return result

    candidates = [Strategy(tree | {()}) for tree in subtrees(())]
    live = [
        s for s in candidates if is_live(ts, s, mode, universe, max_imports).ok
    ]
    return sorted(live, key=lambda s: tuple(_play_key(p) for p in s.maximal_plays()))


def copycat_expand(ts: TransitionSystem, sigma: Strategy, assignment, depth_bound=None, universe=()):
    """Instantiate black boxes of a black-box strategy with concrete types,
    expanding the copycat behaviour the instantiation induces."""
    from .semantics import expand_strategy

    return expand_strategy(ts, sigma, assignment, depth_bound, universe)


# ---------------------------------------------------------------------------
# strategy files: maximal plays in the trace format, blank-line separated

def format_strategy(sigma: Strategy) -> str:
    blocks = []
    for k, play in enumerate(sigma.maximal_plays(), start=1):
        blocks.append(f"# play {k}\n{format_dialogue(play)}")
    return "\n\n".join(blocks) + "\n"


def parse_strategy(text: str) -> Strategy:
    plays = []
    for block in text.split("\n\n"):
        if block.strip():
            plays.append(parse_dialogue(block))
    return Strategy.from_plays(plays)
