"""Transition systems over System F types, in the lazy style.

States are resolved types (no available quantifier) plus a distinguished
initial state.  A labelled step picks a branch of the current state and an
import sequence that exactly resolves it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .types import (
    TypeExpr,
    free_vars,
    forall_count,
    has_available,
    import_lazy,
    pretty,
    resolved_view,
)


class UndefinedTransitionError(ValueError):
    """A label was applied to a state where it denotes no transition."""


class _Star:
    """The initial state, before the root type has been resolved."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "<initial>"


STAR = _Star()

# a state is either STAR or a resolved TypeExpr
State = object


@dataclass(frozen=True)
class Label:
    """A branch choice together with the imports that resolve it."""

    branch: int
    imports: tuple[TypeExpr, ...] = ()

    def __str__(self) -> str:
        if not self.imports:
            return f"<{self.branch}>"
        imps = ", ".join(pretty(v) for v in self.imports)
        return f"<{self.branch}, {imps}>"


def erase_imports(label: Label) -> int:
    """Forget the imports, keeping only the branch index."""
    return label.branch


def resolve_branch(t: TypeExpr, imports) -> TypeExpr | None:
    """Import into `t` until resolved; None when the sequence does not fit."""
    for v in imports:
        if not has_available(t):
            return None
        t = import_lazy(t, v)
    return t if not has_available(t) else None


@dataclass(frozen=True)
class TransitionSystem:
    """The game board of a type: states, labels, and the step function."""

    root_type: TypeExpr

    def branches(self, state: State) -> tuple[TypeExpr, ...]:
        """Branch types selectable at `state` (the root type at the start)."""
        if state is STAR:
            return (self.root_type,)
        return resolved_view(state).branches

    def step(self, state: State, label: Label) -> TypeExpr | None:
        """Target of `label` at `state`, or None when undefined."""
        branches = self.branches(state)
        if not 1 <= label.branch <= len(branches):
            return None
        return resolve_branch(branches[label.branch - 1], label.imports)

    def step_or_raise(self, state: State, label: Label) -> TypeExpr:
        target = self.step(state, label)
        if target is None:
            raise UndefinedTransitionError(f"label {label} undefined at {state}")
        return target

    def colour(self, state: State, label: Label) -> str:
        """Head variable of the target state of `label` at `state`."""
        return resolved_view(self.step_or_raise(state, label)).head

    def run(self, labels) -> State | None:
        """Fold labels from the initial state; None as soon as one fails."""
        state: State = STAR
        for label in labels:
            state = self.step(state, label)
            if state is None:
                return None
        return state

    def is_trace(self, labels) -> bool:
        return self.run(labels) is not None


def build(root_type: TypeExpr) -> TransitionSystem:
    return TransitionSystem(root_type)


def default_import_cap(t: TypeExpr, universe) -> int:
    """Import-sequence length bound making enumeration finite.

    Sufficient to exactly resolve `t` even when every consumed quantifier is
    replaced by all quantifiers of an imported universe type.
    """
    return forall_count(t) + sum(forall_count(u) for u in universe) + 1


def import_sequences(t: TypeExpr, universe, max_imports: int | None = None):
    """All import sequences from `universe` that exactly resolve `t`.

    The label space is infinite in general (an import can introduce new
    quantifiers), so sequences longer than `max_imports` are cut off.
    """
    universe = tuple(universe)
    cap = default_import_cap(t, universe) if max_imports is None else max_imports

    def go(t: TypeExpr, budget: int):
        if not has_available(t):
            yield ()
            return
        if budget == 0:
            return
        for u in universe:
            for rest in go(import_lazy(t, u), budget - 1):
                yield (u,) + rest

    yield from go(t, cap)


def enumerate_labels(
    ts: TransitionSystem,
    state: State,
    universe,
    max_imports: int | None = None,
) -> list[Label]:
    """All labels denoting a transition at `state`, imports drawn from
    `universe`, in (branch, import sequence) order."""
    out = []
    for i, branch_type in enumerate(ts.branches(state), start=1):
        for imports in import_sequences(branch_type, universe, max_imports):
            out.append(Label(i, imports))
    return out


@dataclass(frozen=True)
class UntypedSystem:
    """The one-state system whose labels are bare branch indices."""

    def step(self, state: State, branch: int) -> State | None:
        return STAR if isinstance(branch, int) and branch >= 1 else None

    def is_trace(self, branches) -> bool:
        return all(isinstance(b, int) and b >= 1 for b in branches)


def reachable_graph(
    ts: TransitionSystem,
    depth: int,
    universe=(),
    max_imports: int | None = None,
):
    """Breadth-first unfolding: (states, edges) with edges (src, label, tgt).

    States are indices into the returned list; the unfolding is a tree (the
    same type reached twice is listed twice), cut off at `depth` steps.
    """
    states: list[State] = [STAR]
    edges: list[tuple[int, Label, int]] = []
    frontier = [(0, 0)]
    while frontier:
        idx, d = frontier.pop(0)
        if d >= depth:
            continue
        for label in enumerate_labels(ts, states[idx], universe, max_imports):
            target = ts.step(states[idx], label)
            states.append(target)
            tgt_idx = len(states) - 1
            edges.append((idx, label, tgt_idx))
            frontier.append((tgt_idx, d + 1))
    return states, edges


def to_dot(ts: TransitionSystem, depth: int, universe=(), max_imports=None) -> str:
    """Render the bounded unfolding as a DOT digraph."""
    states, edges = reachable_graph(ts, depth, universe, max_imports)
    lines = ["digraph game {", "  rankdir=TB;"]
    for i, s in enumerate(states):
        text = "*" if s is STAR else pretty(s)
        shape = "doublecircle" if s is STAR else "box"
        lines.append(f'  n{i} [label="{text}", shape={shape}];')
    for src, label, tgt in edges:
        lines.append(f'  n{src} -> n{tgt} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines)


def is_lambda_type(t: TypeExpr) -> bool:
    """Quantifier-free types: every label at every state has no imports."""
    return forall_count(t) == 0
