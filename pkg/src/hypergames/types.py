"""System F type algebra: parsing, prenexification, substitution, importation.

Types are represented with de Bruijn indices for quantifier-bound variables
and plain names for free variables, so structural equality coincides with
alpha-equivalence.  Binder name hints are kept for display only and are
excluded from comparison and hashing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache


class TypeSyntaxError(ValueError):
    """Raised on malformed type text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ResolvedTypeError(ValueError):
    """Importation was requested on a type with no available quantifier."""


class UnresolvedTypeError(ValueError):
    """A resolved view was requested on a type with an available quantifier."""


class TypeExpr:
    """Base class for type ASTs."""

    __slots__ = ()

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Var(TypeExpr):
    """Free type variable."""

    name: str


@dataclass(frozen=True)
class Bound(TypeExpr):
    """Quantifier-bound variable, as a de Bruijn index."""

    index: int


@dataclass(frozen=True)
class Arrow(TypeExpr):
    domain: TypeExpr
    codomain: TypeExpr


@dataclass(frozen=True)
class Forall(TypeExpr):
    body: TypeExpr
    hint: str = field(default="X", compare=False)


@dataclass(frozen=True)
class ResolvedView:
    """A type with no available quantifier, split as T1 -> ... -> Tn -> X."""

    branches: tuple[TypeExpr, ...]
    head: str


# ---------------------------------------------------------------------------
# parsing / printing

_TOKEN = re.compile(r"\s*(->|→|∀|[().]|[A-Za-z_][A-Za-z0-9_']*|'+|\S)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        tok = m.group(1)
        tokens.append((tok, m.start(1)))
        pos = m.end()
    return tokens


def parse_type(text: str) -> TypeExpr:
    """Parse type text.  Grammar: idents, right-associative ``->``, and
    ``forall X. T`` whose body extends maximally to the right."""
    tokens = _tokenize(text)
    idx = 0

    def peek():
        return tokens[idx][0] if idx < len(tokens) else None

    def expect(tok):
        nonlocal idx
        if peek() != tok:
            pos = tokens[idx][1] if idx < len(tokens) else len(text)
            raise TypeSyntaxError(f"expected {tok!r}", pos)
        idx += 1

    def parse_expr(env: tuple[str, ...]) -> TypeExpr:
        nonlocal idx
        if peek() in ("forall", "∀"):
            idx += 1
            name = peek()
            if name is None or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
                pos = tokens[idx][1] if idx < len(tokens) else len(text)
                raise TypeSyntaxError("expected a binder name after 'forall'", pos)
            idx += 1
            expect(".")
            body = parse_expr((name,) + env)
            return Forall(body, hint=name)
        left = parse_atom(env)
        if peek() in ("->", "→"):
            idx += 1
            right = parse_expr(env)
            return Arrow(left, right)
        return left

    def parse_atom(env: tuple[str, ...]) -> TypeExpr:
        nonlocal idx
        tok = peek()
        pos = tokens[idx][1] if idx < len(tokens) else len(text)
        if tok == "(":
            idx += 1
            inner = parse_expr(env)
            expect(")")
            return inner
        if tok is None:
            raise TypeSyntaxError("unexpected end of input", len(text))
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok) or tok in ("forall",):
            raise TypeSyntaxError(f"unexpected token {tok!r}", pos)
        idx += 1
        if tok in env:
            return Bound(env.index(tok))
        return Var(tok)

    result = parse_expr(())
    if idx != len(tokens):
        raise TypeSyntaxError(f"trailing input {tokens[idx][0]!r}", tokens[idx][1])
    return result


def _fresh_name(hint: str, used: set[str]) -> str:
    name = hint
    while name in used:
        name += "'"
    return name


def pretty(t: TypeExpr) -> str:
    """Render with canonical fresh binder names (prime-suffixing collisions)."""
    used = set(free_vars(t))

    def go(t: TypeExpr, env: tuple[str, ...], atom: bool) -> str:
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Bound):
            return env[t.index]
        if isinstance(t, Arrow):
            dom = go(t.domain, env, atom=True)
            cod = go(t.codomain, env, atom=False)
            s = f"{dom} -> {cod}"
            return f"({s})" if atom else s
        if isinstance(t, Forall):
            name = _fresh_name(t.hint, used)
            used.add(name)
            s = f"forall {name}. {go(t.body, (name,) + env, atom=False)}"
            return f"({s})" if atom else s
        raise TypeError(f"not a type: {t!r}")

    return go(t, (), atom=False)


# ---------------------------------------------------------------------------
# structural helpers

def _shift(t: TypeExpr, by: int, cutoff: int = 0) -> TypeExpr:
    if isinstance(t, Bound):
        return Bound(t.index + by) if t.index >= cutoff else t
    if isinstance(t, Var):
        return t
    if isinstance(t, Arrow):
        return Arrow(_shift(t.domain, by, cutoff), _shift(t.codomain, by, cutoff))
    return Forall(_shift(t.body, by, cutoff + 1), hint=t.hint)


def _open(body: TypeExpr, value: TypeExpr, depth: int = 0) -> TypeExpr:
    """Instantiate the binder at `depth` with a locally closed `value`."""
    if isinstance(body, Bound):
        if body.index == depth:
            return value
        return Bound(body.index - 1) if body.index > depth else body
    if isinstance(body, Var):
        return body
    if isinstance(body, Arrow):
        return Arrow(_open(body.domain, value, depth), _open(body.codomain, value, depth))
    return Forall(_open(body.body, value, depth + 1), hint=body.hint)


def close(t: TypeExpr, name: str, depth: int = 0) -> TypeExpr:
    """Turn free occurrences of `name` into the binder at `depth`."""
    if isinstance(t, Var):
        return Bound(depth) if t.name == name else t
    if isinstance(t, Bound):
        return Bound(t.index + 1) if t.index >= depth else t
    if isinstance(t, Arrow):
        return Arrow(close(t.domain, name, depth), close(t.codomain, name, depth))
    return Forall(close(t.body, name, depth + 1), hint=t.hint)


def free_vars(t: TypeExpr) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Bound):
        return frozenset()
    if isinstance(t, Arrow):
        return free_vars(t.domain) | free_vars(t.codomain)
    return free_vars(t.body)


def subst(t: TypeExpr, name: str, value: TypeExpr) -> TypeExpr:
    """Capture-avoiding substitution of a locally closed type for a free var."""
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, Bound):
        return t
    if isinstance(t, Arrow):
        return Arrow(subst(t.domain, name, value), subst(t.codomain, name, value))
    return Forall(subst(t.body, name, value), hint=t.hint)


def subst_map(t: TypeExpr, mapping: dict[str, TypeExpr]) -> TypeExpr:
    """Simultaneous capture-avoiding substitution."""
    if not mapping:
        return t
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Bound):
        return t
    if isinstance(t, Arrow):
        return Arrow(subst_map(t.domain, mapping), subst_map(t.codomain, mapping))
    return Forall(subst_map(t.body, mapping), hint=t.hint)


def size(t: TypeExpr) -> int:
    if isinstance(t, (Var, Bound)):
        return 1
    if isinstance(t, Arrow):
        return 1 + size(t.domain) + size(t.codomain)
    return 1 + size(t.body)


# ---------------------------------------------------------------------------
# prenexification and importation

def prenex(t: TypeExpr) -> TypeExpr:
    """Pull all quantifiers to the front by exhaustively rewriting
    T -> forall X. U  into  forall X. T -> U.  Idempotent; the result is
    unique up to alpha-equivalence (exact, with this representation)."""
    if isinstance(t, (Var, Bound)):
        return t
    if isinstance(t, Forall):
        return Forall(prenex(t.body), hint=t.hint)
    dom = prenex(t.domain)
    cod = prenex(t.codomain)
    hints = []
    while isinstance(cod, Forall):
        hints.append(cod.hint)
        cod = cod.body
    result: TypeExpr = Arrow(_shift(dom, len(hints)), cod)
    for hint in reversed(hints):
        result = Forall(result, hint=hint)
    return result


def substitute(t: TypeExpr, name: str, value: TypeExpr) -> TypeExpr:
    """T[V/X]: capture-avoiding substitution followed by prenexification."""
    return prenex(subst(t, name, value))


def import_prenex(t: TypeExpr, value: TypeExpr) -> TypeExpr:
    """Import `value` into the outermost quantifier of the prenex form of `t`."""
    p = prenex(t)
    if not isinstance(p, Forall):
        raise ResolvedTypeError(f"no outermost quantifier in {pretty(t)}")
    return prenex(_open(p.body, value))


def available_binders(t: TypeExpr) -> list[str]:
    """Display names of the available quantifiers, in order of occurrence.

    These are exactly the outermost quantifiers of the prenex form; names are
    freshened the same way the pretty-printer freshens them.
    """
    used = set(free_vars(t))
    out: list[str] = []

    def go(t: TypeExpr) -> None:
        if isinstance(t, Forall):
            name = _fresh_name(t.hint, used)
            used.add(name)
            out.append(name)
            go(t.body)
        elif isinstance(t, Arrow):
            go(t.codomain)

    go(t)
    return out


# alias: "available quantifiers" is the other common name for the same list
available_quantifiers = available_binders


def available_count(t: TypeExpr) -> int:
    n = 0
    while True:
        if isinstance(t, Forall):
            n += 1
            t = t.body
        elif isinstance(t, Arrow):
            t = t.codomain
        else:
            return n


def has_available(t: TypeExpr) -> bool:
    while True:
        if isinstance(t, Forall):
            return True
        if isinstance(t, Arrow):
            t = t.codomain
        else:
            return False


def import_lazy(t: TypeExpr, value: TypeExpr) -> TypeExpr:
    """Delete the leftmost available quantifier and substitute `value` for it."""
    if isinstance(t, Forall):
        return _open(t.body, value)
    if isinstance(t, Arrow):
        return Arrow(t.domain, import_lazy(t.codomain, value))
    raise ResolvedTypeError(f"cannot import into resolved type {pretty(t)}")


def import_seq(t: TypeExpr, values) -> TypeExpr:
    """Iterated importation, folding left."""
    for v in values:
        t = import_lazy(t, v)
    return t


def resolved_view(t: TypeExpr) -> ResolvedView:
    """Split a resolved type into its branches and head variable."""
    if has_available(t):
        raise UnresolvedTypeError(f"type has an available quantifier: {pretty(t)}")
    branches = []
    while isinstance(t, Arrow):
        branches.append(t.domain)
        t = t.codomain
    if not isinstance(t, Var):
        raise UnresolvedTypeError(f"head is not a free variable: {t!r}")
    return ResolvedView(tuple(branches), t.name)


def reassemble(view: ResolvedView) -> TypeExpr:
    t: TypeExpr = Var(view.head)
    for branch in reversed(view.branches):
        t = Arrow(branch, t)
    return t


def arrow_chain(domains, codomain: TypeExpr) -> TypeExpr:
    t = codomain
    for d in reversed(list(domains)):
        t = Arrow(d, t)
    return t


def forall_count(t: TypeExpr) -> int:
    """Total number of quantifier nodes anywhere in the type."""
    if isinstance(t, (Var, Bound)):
        return 0
    if isinstance(t, Arrow):
        return forall_count(t.domain) + forall_count(t.codomain)
    return 1 + forall_count(t.body)
