"""Seeded random generators for types, boards, and well-typed closed terms."""

from __future__ import annotations

import itertools

from hypergames import terms as tm
from hypergames import types as ty
from hypergames.terms import Abs, App, TmVar, TyAbs, TyApp
from hypergames.types import Arrow, Forall, Var

BASE_VARS = ("Z1", "Z2", "Z3")


def random_type(rng, tyvars=(), qdepth=0, size=5):
    """Random type over `tyvars` plus a few base variables."""
    atoms = tuple(tyvars) + BASE_VARS
    if size <= 1:
        return Var(rng.choice(atoms))
    roll = rng.random()
    if roll < 0.25 and qdepth > 0:
        name = f"Q{rng.randrange(10**6)}"
        body = random_type(rng, tuple(tyvars) + (name,), qdepth - 1, size - 1)
        return Forall(ty.close(body, name), hint="Q")
    if roll < 0.75:
        k = rng.randrange(1, size)
        return Arrow(
            random_type(rng, tyvars, qdepth, k),
            random_type(rng, tyvars, max(0, qdepth - 1), size - k),
        )
    return Var(rng.choice(atoms))


def random_lambda_type(rng, size=6):
    return random_type(rng, (), 0, size)


def _inhabit(rng, target, env, tyvars, depth, counter):
    """A term of the given type from the environment; None when the search
    gives up."""
    if depth < 0:
        return None
    if depth > 0 and rng.random() < 0.2:
        # plant a beta-redex of the target type
        a = random_type(rng, tyvars, 0, 3)
        x = f"h{next(counter)}"
        body = _inhabit(rng, target, env + ((x, a),), tyvars, depth - 1, counter)
        arg = _inhabit(rng, a, env, tyvars, depth - 1, counter)
        if body is not None and arg is not None:
            return App(Abs(x, a, body), arg)
    if isinstance(target, Arrow):
        x = f"h{next(counter)}"
        body = _inhabit(rng, target.codomain, env + ((x, target.domain),), tyvars, depth, counter)
        return None if body is None else Abs(x, target.domain, body)
    if isinstance(target, Forall):
        x = f"H{next(counter)}"
        body = _inhabit(rng, ty._open(target.body, Var(x)), env, tyvars + (x,), depth, counter)
        return None if body is None else TyAbs(x, body)
    candidates = list(env)
    rng.shuffle(candidates)
    for name, vty in candidates:
        done = _complete(rng, TmVar(name), vty, target, env, tyvars, depth - 1, counter)
        if done is not None:
            return done
    return None


def _complete(rng, head, head_ty, target, env, tyvars, depth, counter):
    if head_ty == target:
        return head
    if depth < 0:
        return None
    if isinstance(head_ty, Arrow):
        arg = _inhabit(rng, head_ty.domain, env, tyvars, depth - 1, counter)
        if arg is None:
            return None
        return _complete(rng, App(head, arg), head_ty.codomain, target, env, tyvars, depth, counter)
    if isinstance(head_ty, Forall):
        pool = [Var(x) for x in tyvars] + [Var(b) for b in BASE_VARS]
        rng.shuffle(pool)
        for v in pool[:3]:
            done = _complete(
                rng, TyApp(head, v), ty._open(head_ty.body, v), target, env, tyvars, depth, counter
            )
            if done is not None:
                return done
    return None


def _grow(rng, env, tyvars, depth, qdepth, counter):
    """Random well-typed term of a random type; returns (term, type)."""
    if depth <= 0:
        if env and rng.random() < 0.8:
            name, vty = rng.choice(env)
            return TmVar(name), vty
        a = random_type(rng, tyvars, 0, 3)
        x = f"h{next(counter)}"
        return Abs(x, a, TmVar(x)), Arrow(a, a)
    roll = rng.random()
    if roll < 0.30:
        a = random_type(rng, tyvars, max(0, qdepth - 1), 4)
        x = f"h{next(counter)}"
        body, bty = _grow(rng, env + ((x, a),), tyvars, depth - 1, qdepth, counter)
        return Abs(x, a, body), Arrow(a, bty)
    if roll < 0.42 and qdepth > 0:
        x = f"H{next(counter)}"
        body, bty = _grow(rng, env, tyvars + (x,), depth - 1, qdepth - 1, counter)
        return TyAbs(x, body), Forall(ty.close(bty, x), hint="H")
    if roll < 0.72:
        fun, fty = _grow(rng, env, tyvars, depth - 1, qdepth, counter)
        while isinstance(fty, Arrow):
            arg = _inhabit(rng, fty.domain, env, tyvars, 4, counter)
            if arg is None:
                break
            fun, fty = App(fun, arg), fty.codomain
            if rng.random() < 0.4:
                break
        return fun, fty
    if roll < 0.85:
        fun, fty = _grow(rng, env, tyvars, depth - 1, qdepth, counter)
        if isinstance(fty, Forall):
            v = random_type(rng, tyvars, 0, 3)
            return TyApp(fun, v), ty._open(fty.body, v)
        return fun, fty
    if env:
        name, vty = rng.choice(env)
        return TmVar(name), vty
    return _grow(rng, env, tyvars, depth - 1, qdepth, counter)


def random_closed_term(rng, max_size=25, qdepth=2, depth=5, min_size=1):
    """Closed well-typed term within the size bounds (retries until found)."""
    counter = itertools.count()
    while True:
        term, _ = _grow(rng, (), (), depth, qdepth, counter)
        if tm.free_term_vars(term):
            continue
        if not min_size <= tm.term_size(term) <= max_size:
            continue
        try:
            tm.typecheck(term)
        except tm.TypeCheckError:
            continue
        return term
