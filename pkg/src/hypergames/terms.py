"""System F terms: parsing, typechecking, normalization, eta-expansion.

Term binders (both kinds) are named; type variables bound by a term-level
big-lambda occur as free `Var`s inside the type ASTs of the subterm.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from . import types as ty
from .types import Arrow, Bound, Forall, TypeExpr, Var, parse_type, pretty


class TermSyntaxError(ValueError):
    pass


class TypeCheckError(ValueError):
    pass


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return pretty_term(self)


@dataclass(frozen=True)
class TmVar(Term):
    name: str


@dataclass(frozen=True)
class Abs(Term):
    var: str
    annot: TypeExpr
    body: Term


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True)
class TyAbs(Term):
    tyvar: str
    body: Term


@dataclass(frozen=True)
class TyApp(Term):
    fun: Term
    ty: TypeExpr


# ---------------------------------------------------------------------------
# parsing / printing

_TERM_TOKEN = re.compile(r"\s*(/\\|->|→|[\\().\[\]:]|[A-Za-z_][A-Za-z0-9_']*)")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TERM_TOKEN.match(text, pos)
            if not m:
                if text[pos:].strip():
                    raise TermSyntaxError(f"bad character at position {pos}")
                break
            self.tokens.append((m.group(1), m.start(1)))
            pos = m.end()
        self.idx = 0

    def peek(self):
        return self.tokens[self.idx][0] if self.idx < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.idx][1] if self.idx < len(self.tokens) else len(self.text)

    def take(self, tok):
        if self.peek() != tok:
            raise TermSyntaxError(f"expected {tok!r} at position {self.pos()}")
        self.idx += 1

    def ident(self):
        tok = self.peek()
        if tok is None or not _IDENT.fullmatch(tok) or tok == "forall":
            raise TermSyntaxError(f"expected a name at position {self.pos()}")
        self.idx += 1
        return tok

    # type sub-grammar sharing the token stream
    def type_expr(self, env: tuple[str, ...]) -> TypeExpr:
        if self.peek() == "forall":
            self.idx += 1
            name = self.ident()
            self.take(".")
            return Forall(self.type_expr((name,) + env), hint=name)
        left = self.type_atom(env)
        if self.peek() in ("->", "→"):
            self.idx += 1
            return Arrow(left, self.type_expr(env))
        return left

    def type_atom(self, env) -> TypeExpr:
        if self.peek() == "(":
            self.idx += 1
            inner = self.type_expr(env)
            self.take(")")
            return inner
        name = self.ident()
        return Bound(env.index(name)) if name in env else Var(name)

    # term grammar
    def term(self) -> Term:
        if self.peek() == "\\":
            self.idx += 1
            name = self.ident()
            self.take(":")
            annot = self.type_expr(())
            self.take(".")
            return Abs(name, annot, self.term())
        if self.peek() == "/\\":
            self.idx += 1
            name = self.ident()
            self.take(".")
            return TyAbs(name, self.term())
        t = self.atom()
        while True:
            nxt = self.peek()
            if nxt == "[":
                self.idx += 1
                t = TyApp(t, self.type_expr(()))
                self.take("]")
            elif nxt == "(" or (nxt is not None and _IDENT.fullmatch(nxt)) or nxt == "\\" or nxt == "/\\":
                if nxt in ("\\", "/\\"):
                    t = App(t, self.term())
                else:
                    t = App(t, self.atom())
            else:
                return t

    def atom(self) -> Term:
        if self.peek() == "(":
            self.idx += 1
            inner = self.term()
            self.take(")")
            return inner
        return TmVar(self.ident())


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.idx != len(p.tokens):
        raise TermSyntaxError(f"trailing input at position {p.pos()}")
    return t


def pretty_term(t: Term) -> str:
    def go(t: Term, atom: bool) -> str:
        if isinstance(t, TmVar):
            return t.name
        if isinstance(t, Abs):
            s = f"\\{t.var}:{pretty(t.annot)}. {go(t.body, False)}"
        elif isinstance(t, TyAbs):
            s = f"/\\{t.tyvar}. {go(t.body, False)}"
        elif isinstance(t, App):
            s = f"{go(t.fun, False) if isinstance(t.fun, (App, TyApp)) else go(t.fun, True)} {go(t.arg, True)}"
        elif isinstance(t, TyApp):
            fun = go(t.fun, False) if isinstance(t.fun, (App, TyApp)) else go(t.fun, True)
            s = f"{fun} [{pretty(t.ty)}]"
        else:
            raise TypeError(f"not a term: {t!r}")
        return f"({s})" if atom else s

    return go(t, False)


# ---------------------------------------------------------------------------
# variables and substitution

def free_term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, TmVar):
        return frozenset((t.name,))
    if isinstance(t, Abs):
        return free_term_vars(t.body) - {t.var}
    if isinstance(t, App):
        return free_term_vars(t.fun) | free_term_vars(t.arg)
    if isinstance(t, TyAbs):
        return free_term_vars(t.body)
    return free_term_vars(t.fun)


def free_ty_vars(t: Term) -> frozenset[str]:
    if isinstance(t, TmVar):
        return frozenset()
    if isinstance(t, Abs):
        return ty.free_vars(t.annot) | free_ty_vars(t.body)
    if isinstance(t, App):
        return free_ty_vars(t.fun) | free_ty_vars(t.arg)
    if isinstance(t, TyAbs):
        return free_ty_vars(t.body) - {t.tyvar}
    return free_ty_vars(t.fun) | ty.free_vars(t.ty)


def all_binder_names(t: Term) -> frozenset[str]:
    if isinstance(t, TmVar):
        return frozenset()
    if isinstance(t, Abs):
        return all_binder_names(t.body) | {t.var}
    if isinstance(t, App):
        return all_binder_names(t.fun) | all_binder_names(t.arg)
    if isinstance(t, TyAbs):
        return all_binder_names(t.body) | {t.tyvar}
    return all_binder_names(t.fun)


def freshen_binders(t: Term, reserved=frozenset()) -> Term:
    """Rename binders so all are distinct and avoid `reserved` plus the term's
    free variables of both kinds."""
    used = set(reserved) | set(free_term_vars(t)) | set(free_ty_vars(t))

    def go(t: Term, tm_env: dict, ty_env: dict) -> Term:
        if isinstance(t, TmVar):
            return TmVar(tm_env.get(t.name, t.name))
        if isinstance(t, Abs):
            new = ty._fresh_name(t.var, used)
            used.add(new)
            mapping = {old: Var(n) for old, n in ty_env.items()}
            return Abs(new, ty.subst_map(t.annot, mapping), go(t.body, {**tm_env, t.var: new}, ty_env))
        if isinstance(t, App):
            return App(go(t.fun, tm_env, ty_env), go(t.arg, tm_env, ty_env))
        if isinstance(t, TyAbs):
            new = ty._fresh_name(t.tyvar, used)
            used.add(new)
            return TyAbs(new, go(t.body, tm_env, {**ty_env, t.tyvar: new}))
        mapping = {old: Var(n) for old, n in ty_env.items()}
        return TyApp(go(t.fun, tm_env, ty_env), ty.subst_map(t.ty, mapping))

    return go(t, {}, {})


def subst_ty_in_term(t: Term, name: str, value: TypeExpr) -> Term:
    """Substitute a type for a free type variable throughout a term."""
    if isinstance(t, TmVar):
        return t
    if isinstance(t, Abs):
        return Abs(t.var, ty.subst(t.annot, name, value), subst_ty_in_term(t.body, name, value))
    if isinstance(t, App):
        return App(subst_ty_in_term(t.fun, name, value), subst_ty_in_term(t.arg, name, value))
    if isinstance(t, TyAbs):
        if t.tyvar == name:
            return t
        if t.tyvar in ty.free_vars(value):
            fresh = ty._fresh_name(t.tyvar, ty.free_vars(value) | free_ty_vars(t) | {name})
            renamed = TyAbs(fresh, subst_ty_in_term(t.body, t.tyvar, Var(fresh)))
            return subst_ty_in_term(renamed, name, value)
        return TyAbs(t.tyvar, subst_ty_in_term(t.body, name, value))
    return TyApp(subst_ty_in_term(t.fun, name, value), ty.subst(t.ty, name, value))


def subst_term(t: Term, name: str, value: Term) -> Term:
    """Capture-avoiding substitution of a term for a free term variable."""
    if isinstance(t, TmVar):
        return value if t.name == name else t
    if isinstance(t, App):
        return App(subst_term(t.fun, name, value), subst_term(t.arg, name, value))
    if isinstance(t, TyApp):
        return TyApp(subst_term(t.fun, name, value), t.ty)
    if isinstance(t, Abs):
        if t.var == name:
            return t
        if t.var in free_term_vars(value):
            fresh = ty._fresh_name(t.var, free_term_vars(value) | free_term_vars(t) | {name})
            renamed = Abs(fresh, t.annot, subst_term(t.body, t.var, TmVar(fresh)))
            return subst_term(renamed, name, value)
        return Abs(t.var, t.annot, subst_term(t.body, name, value))
    # TyAbs: the binder may capture type variables free in the value
    if t.tyvar in free_ty_vars(value):
        fresh = ty._fresh_name(t.tyvar, free_ty_vars(value) | free_ty_vars(t))
        renamed = TyAbs(fresh, subst_ty_in_term(t.body, t.tyvar, Var(fresh)))
        return subst_term(renamed, name, value)
    return TyAbs(t.tyvar, subst_term(t.body, name, value))


def term_size(t: Term) -> int:
    if isinstance(t, TmVar):
        return 1
    if isinstance(t, (Abs, TyAbs)):
        return 1 + term_size(t.body)
    if isinstance(t, App):
        return 1 + term_size(t.fun) + term_size(t.arg)
    return 1 + term_size(t.fun)


# ---------------------------------------------------------------------------
# alpha-equivalence

def _type_alpha_eq(t1: TypeExpr, t2: TypeExpr, m1: dict, m2: dict) -> bool:
    if isinstance(t1, Var) and isinstance(t2, Var):
        return m1.get(t1.name, ("free", t1.name)) == m2.get(t2.name, ("free", t2.name))
    if isinstance(t1, Bound) and isinstance(t2, Bound):
        return t1.index == t2.index
    if isinstance(t1, Arrow) and isinstance(t2, Arrow):
        return _type_alpha_eq(t1.domain, t2.domain, m1, m2) and _type_alpha_eq(
            t1.codomain, t2.codomain, m1, m2
        )
    if isinstance(t1, Forall) and isinstance(t2, Forall):
        return _type_alpha_eq(t1.body, t2.body, m1, m2)
    return False


def alpha_eq(a: Term, b: Term) -> bool:
    counter = itertools.count()

    def go(a, b, e1, e2, m1, m2) -> bool:
        if isinstance(a, TmVar) and isinstance(b, TmVar):
            return e1.get(a.name, ("free", a.name)) == e2.get(b.name, ("free", b.name))
        if isinstance(a, Abs) and isinstance(b, Abs):
            if not _type_alpha_eq(a.annot, b.annot, m1, m2):
                return False
            slot = ("bound", next(counter))
            return go(a.body, b.body, {**e1, a.var: slot}, {**e2, b.var: slot}, m1, m2)
        if isinstance(a, App) and isinstance(b, App):
            return go(a.fun, b.fun, e1, e2, m1, m2) and go(a.arg, b.arg, e1, e2, m1, m2)
        if isinstance(a, TyAbs) and isinstance(b, TyAbs):
            slot = ("tybound", next(counter))
            return go(a.body, b.body, e1, e2, {**m1, a.tyvar: slot}, {**m2, b.tyvar: slot})
        if isinstance(a, TyApp) and isinstance(b, TyApp):
            return _type_alpha_eq(a.ty, b.ty, m1, m2) and go(a.fun, b.fun, e1, e2, m1, m2)
        return False

    return go(a, b, {}, {}, {}, {})


# ---------------------------------------------------------------------------
# typechecking and normalization

def typecheck(t: Term, ctx: dict[str, TypeExpr] | None = None) -> TypeExpr:
    """Type of `t` in context `ctx`; raises TypeCheckError when ill-typed."""
    ctx = dict(ctx or {})

    def go(t: Term, ctx: dict[str, TypeExpr]) -> TypeExpr:
        if isinstance(t, TmVar):
            if t.name not in ctx:
                raise TypeCheckError(f"unbound variable {t.name}")
            return ctx[t.name]
        if isinstance(t, Abs):
            return Arrow(t.annot, go(t.body, {**ctx, t.var: t.annot}))
        if isinstance(t, App):
            tf = go(t.fun, ctx)
            if not isinstance(tf, Arrow):
                raise TypeCheckError(f"applying a non-function of type {pretty(tf)}")
            ta = go(t.arg, ctx)
            if ta != tf.domain:
                raise TypeCheckError(
                    f"argument type {pretty(ta)} does not match {pretty(tf.domain)}"
                )
            return tf.codomain
        if isinstance(t, TyAbs):
            for name, vty in ctx.items():
                if t.tyvar in ty.free_vars(vty):
                    raise TypeCheckError(
                        f"type variable {t.tyvar} occurs in the type of {name}"
                    )
            return Forall(ty.close(go(t.body, ctx), t.tyvar), hint=t.tyvar)
        if isinstance(t, TyApp):
            tf = go(t.fun, ctx)
            if not isinstance(tf, Forall):
                raise TypeCheckError(f"type-applying a non-quantified {pretty(tf)}")
            return ty._open(tf.body, t.ty)
        raise TypeError(f"not a term: {t!r}")

    return go(t, ctx)


def beta_normalize(t: Term, ctx: dict[str, TypeExpr] | None = None) -> Term:
    """Full beta-normal form (both redex kinds).  Typechecks first, so the
    reduction is guaranteed to terminate."""
    typecheck(t, ctx)

    def nf(t: Term) -> Term:
        if isinstance(t, TmVar):
            return t
        if isinstance(t, Abs):
            return Abs(t.var, t.annot, nf(t.body))
        if isinstance(t, TyAbs):
            return TyAbs(t.tyvar, nf(t.body))
        if isinstance(t, App):
            fun = nf(t.fun)
            if isinstance(fun, Abs):
                return nf(subst_term(fun.body, fun.var, t.arg))
            return App(fun, nf(t.arg))
        fun = nf(t.fun)
        if isinstance(fun, TyAbs):
            return nf(subst_ty_in_term(fun.body, fun.tyvar, t.ty))
        return TyApp(fun, t.ty)

    return nf(t)


def is_beta_normal(t: Term) -> bool:
    if isinstance(t, TmVar):
        return True
    if isinstance(t, (Abs, TyAbs)):
        return is_beta_normal(t.body)
    if isinstance(t, App):
        return not isinstance(t.fun, Abs) and is_beta_normal(t.fun) and is_beta_normal(t.arg)
    return not isinstance(t.fun, TyAbs) and is_beta_normal(t.fun)


def eta_long(t: Term, target: TypeExpr, ctx: dict[str, TypeExpr] | None = None) -> Term:
    """Eta-long form of a beta-normal term at the given type: every subterm is
    expanded until its head is fully applied under a full binder prefix."""
    ctx = dict(ctx or {})
    t = freshen_binders(t, frozenset(ctx) | ty.free_vars(target) | {n for v in ctx.values() for n in ty.free_vars(v)})
    used = set(ctx) | set(all_binder_names(t)) | ty.free_vars(target)
    for v in ctx.values():
        used |= ty.free_vars(v)
    counter = itertools.count()

    def fresh(hint: str) -> str:
        name = ty._fresh_name(hint, used)
        used.add(name)
        return name

    def spine(t: Term, ctx) -> tuple[Term, TypeExpr]:
        if isinstance(t, TmVar):
            if t.name not in ctx:
                raise TypeCheckError(f"unbound variable {t.name}")
            return t, ctx[t.name]
        if isinstance(t, App):
            fun, tf = spine(t.fun, ctx)
            if not isinstance(tf, Arrow):
                raise TypeCheckError("spine head over-applied")
            return App(fun, go(t.arg, tf.domain, ctx)), tf.codomain
        if isinstance(t, TyApp):
            fun, tf = spine(t.fun, ctx)
            if not isinstance(tf, Forall):
                raise TypeCheckError("spine head over-type-applied")
            return TyApp(fun, t.ty), ty._open(tf.body, t.ty)
        raise TypeCheckError("term is not beta-normal")

    def go(t: Term, target: TypeExpr, ctx) -> Term:
        if isinstance(target, Arrow):
            if isinstance(t, Abs):
                return Abs(t.var, target.domain, go(t.body, target.codomain, {**ctx, t.var: target.domain}))
            x = fresh(f"x{next(counter)}")
            return Abs(x, target.domain, go(App(t, TmVar(x)), target.codomain, {**ctx, x: target.domain}))
        if isinstance(target, Forall):
            if isinstance(t, TyAbs):
                return TyAbs(t.tyvar, go(t.body, ty._open(target.body, Var(t.tyvar)), ctx))
            x = fresh(target.hint)
            return TyAbs(x, go(TyApp(t, Var(x)), ty._open(target.body, Var(x)), ctx))
        rebuilt, found = spine(t, ctx)
        if found != target:
            raise TypeCheckError(
                f"spine has type {pretty(found)}, expected {pretty(target)}"
            )
        return rebuilt

    return go(t, target, ctx)


def is_eta_long(t: Term, target: TypeExpr, ctx=None) -> bool:
    try:
        return is_beta_normal(t) and alpha_eq(t, eta_long(t, target, ctx))
    except TypeCheckError:
        return False


# ---------------------------------------------------------------------------
# enumeration of eta-long beta-normal inhabitants

def enumerate_normal_terms(
    target: TypeExpr,
    size_bound: int,
    ctx: dict[str, TypeExpr] | None = None,
    ty_pool=None,
) -> list[Term]:
    """All eta-long beta-normal terms of the type within the size bound.

    Quantifier instantiations are drawn from `ty_pool` when given, otherwise
    from the type variables in scope; richer instantiations are out of reach
    of any finite enumeration.
    """
    counter = itertools.count()

    def gen(target, env, tyvars, budget):
        # yields (term, size) with size <= budget
        if budget <= 0:
            return
        if isinstance(target, Arrow):
            x = f"x{next(counter)}"
            for body, s in gen(target.codomain, env + ((x, target.domain),), tyvars, budget - 1):
                yield Abs(x, target.domain, body), s + 1
        elif isinstance(target, Forall):
            x = f"{target.hint}{next(counter)}"
            for body, s in gen(ty._open(target.body, Var(x)), env, tyvars + (x,), budget - 1):
                yield TyAbs(x, body), s + 1
        else:
            for name, vty in env:
                yield from spines(TmVar(name), vty, target, env, tyvars, budget - 1, 1)

    def spines(head, head_ty, target, env, tyvars, budget, sofar):
        if budget < 0:
            return
        if isinstance(head_ty, Var):
            if head_ty == target:
                yield head, sofar
            return
        if isinstance(head_ty, Arrow):
            for arg, s in gen(head_ty.domain, env, tyvars, budget - 1):
                yield from spines(
                    App(head, arg), head_ty.codomain, target, env, tyvars,
                    budget - 1 - s, sofar + 1 + s,
                )
        elif isinstance(head_ty, Forall):
            pool = ty_pool if ty_pool is not None else [Var(x) for x in tyvars]
            for v in pool:
                yield from spines(
                    TyApp(head, v), ty._open(head_ty.body, v), target, env, tyvars,
                    budget - 1, sofar + 1,
                )

    env = tuple((ctx or {}).items())
    tyvars = tuple(sorted({n for _, vty in env for n in ty.free_vars(vty)} | ty.free_vars(target)))
    seen = set()
    out = []
    for term, _ in gen(target, env, tyvars, size_bound):
        key = pretty_term(term)
        if key not in seen:
            seen.add(key)
            out.append(term)
    return out
