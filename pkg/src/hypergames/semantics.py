"""Compiling terms to strategies, reading strategies back, and composing
strategies by interaction.

Everything here works against a single oracle interface: an object with a
`root_type` and a `respond(play)` method returning the unique answer to an
odd-length play (or None).  Finite strategies, compiled terms, instantiated
views and interaction composites all implement it, so they can be nested
freely and materialized or read back uniformly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import types as ty
from .dialogue import Mode, Move, canonicalize_blackboxes, fresh_box_label, legal_moves, states_along
from .strategy import Strategy
from .terms import (
    Abs,
    App,
    Term,
    TmVar,
    TyAbs,
    TyApp,
    alpha_eq,
    enumerate_normal_terms,
    eta_long,
    is_eta_long,
    typecheck,
)
from .transition import STAR, Label, TransitionSystem, is_lambda_type, resolve_branch
from .types import Arrow, Forall, TypeExpr, Var, arrow_chain, forall_count, pretty


class LivenessError(ValueError):
    """An oracle failed to answer a probe it should answer; carries the play."""

    def __init__(self, play):
        super().__init__("no answer to a legal probe")
        self.play = play


class BudgetExceededError(RuntimeError):
    """An interaction ran past its step budget; carries a partial transcript."""

    def __init__(self, limit: int, transcript):
        super().__init__(f"interaction exceeded {limit} steps")
        self.transcript = list(transcript)


class Budget:
    """Shared step counter for a (possibly nested) interaction."""

    def __init__(self, limit: int = 10**6):
        self.limit = limit
        self.used = 0
        self.transcript = []

    def tick(self, item=None):
        self.used += 1
        if item is not None and len(self.transcript) < 500:
            self.transcript.append(item)
        if self.used > self.limit:
            raise BudgetExceededError(self.limit, self.transcript)


class _CachedOracle:
    """Memoizes respond per play; subclasses implement _respond."""

    def respond(self, play):
        cache = self.__dict__.setdefault("_cache", {})
        if play not in cache:
            cache[play] = self._respond(play)
        return cache[play]


class StrategyOracle(_CachedOracle):
    """Finite strategy as an oracle.  Incoming plays may use any fresh names
    for the first player's boxes; they are canonicalized for lookup and the
    answer is renamed back."""

    def __init__(self, sigma: Strategy, root_type: TypeExpr):
        self.sigma = sigma
        self.root_type = root_type
        self._ambient = ty.free_vars(root_type)

    def _respond(self, play):
        canon, rename = canonicalize_blackboxes(play, self._ambient)
        resp = self.sigma.respond(canon)
        if resp is None:
            return None
        back = {new: Var(old) for old, new in rename.items()}
        imports = tuple(ty.subst_map(v, back) for v in resp.label.imports)
        return Move(resp.back_ref, Label(resp.label.branch, imports))


def materialize(oracle, depth_bound: int | None = None, universe=()) -> Strategy:
    """Unfold an oracle into a strategy by playing out every black-box probe."""
    ts = TransitionSystem(oracle.root_type)
    plays = {()}
    frontier = [()]
    while frontier:
        play = frontier.pop()
        if depth_bound is not None and len(play) + 2 > depth_bound:
            continue
        for o_move in legal_moves(ts, play, Mode.BLACK_BOX, universe):
            p1 = play + (o_move,)
            resp = oracle.respond(p1)
            if resp is None:
                continue
            p2 = p1 + (resp,)
            plays.add(p1)
            plays.add(p2)
            frontier.append(p2)
    return Strategy(frozenset(plays))


def as_oracle(x, root_type: TypeExpr):
    if isinstance(x, Strategy):
        return StrategyOracle(x, root_type)
    return x


# ---------------------------------------------------------------------------
# term -> strategy

@dataclass
class _SpineNode:
    binders: list  # ('lam', name) | ('ty', name), in textual order
    head: str
    items: list  # ('ty', TypeExpr) | ('arg', _SpineNode), in application order
    args: list = field(default_factory=list)


def _build_spine(term: Term) -> _SpineNode:
    binders = []
    while isinstance(term, (Abs, TyAbs)):
        if isinstance(term, Abs):
            binders.append(("lam", term.var))
        else:
            binders.append(("ty", term.tyvar))
        term = term.body
    items: list = []

    def dec(t: Term) -> str:
        if isinstance(t, TmVar):
            return t.name
        if isinstance(t, App):
            head = dec(t.fun)
            items.append(("arg", _build_spine(t.arg)))
            return head
        if isinstance(t, TyApp):
            head = dec(t.fun)
            items.append(("ty", t.ty))
            return head
        raise ValueError("term is not in eta-long beta-normal form")

    head = dec(term)
    node = _SpineNode(binders, head, items)
    node.args = [child for kind, child in items if kind == "arg"]
    return node


class TermOracle(_CachedOracle):
    """The strategy of an eta-long beta-normal term, as a respond function.

    Successive probes walk down the term's spine tree: the k-th first-player
    move probes a child of the node probed by the previous one, so binder
    bindings accumulate along the play.
    """

    def __init__(self, term: Term, root_type: TypeExpr):
        from .terms import freshen_binders

        self.root_type = root_type
        self.root_node = _build_spine(freshen_binders(term, ty.free_vars(root_type)))

    def _respond(self, play):
        lam_env: dict[str, tuple[int, int]] = {}
        ty_env: dict[str, TypeExpr] = {}
        node = None
        for i in range(1, len(play) + 1, 2):
            move = play[i - 1]
            node = self.root_node if i == 1 else node.args[move.label.branch - 1]
            lam_idx = 0
            imp_idx = 0
            for kind, name in node.binders:
                if kind == "lam":
                    lam_idx += 1
                    lam_env[name] = (i, lam_idx)
                else:
                    ty_env[name] = move.label.imports[imp_idx]
                    imp_idx += 1
        if node is None or node.head not in lam_env:
            return None
        o_pos, branch = lam_env[node.head]
        mapping = dict(ty_env)
        imports = tuple(
            ty.subst_map(v, mapping) for kind, v in node.items if kind == "ty"
        )
        return Move(o_pos, Label(branch, imports))


def term_to_strategy(
    term: Term, root_type: TypeExpr, ctx: dict[str, TypeExpr] | None = None
) -> Strategy:
    """Compile an eta-long beta-normal term into its black-box strategy."""
    if not is_eta_long(term, root_type, ctx):
        raise ValueError("term_to_strategy needs an eta-long beta-normal term")
    if ctx:
        raise ValueError("term must be closed in term variables")
    return materialize(TermOracle(term, root_type))


# ---------------------------------------------------------------------------
# strategy -> term

def strategy_to_term(strategy_or_oracle, root_type: TypeExpr, max_nodes: int = 100000) -> Term:
    """Read an eta-long beta-normal term off a live strategy (or oracle)."""
    oracle = as_oracle(strategy_or_oracle, root_type)
    ts = TransitionSystem(root_type)
    counter = itertools.count()
    nodes = itertools.count()

    def binder_walk(branch_type: TypeExpr, imports):
        binders = []  # ('lam', name, domain) | ('ty', boxname)
        imps = list(imports)
        t = branch_type
        while True:
            if isinstance(t, Forall):
                box = imps.pop(0)
                binders.append(("ty", box.name, None))
                t = ty._open(t.body, box)
            elif isinstance(t, Arrow):
                binders.append(("lam", f"v{next(counter)}", t.domain))
                t = t.codomain
            else:
                return binders

    def build(play, env) -> Term:
        if next(nodes) > max_nodes:
            raise BudgetExceededError(max_nodes, play)
        o_move = play[-1]
        states = states_along(ts, play)
        src = states[o_move.back_ref] if o_move.back_ref else STAR
        branch_type = ts.branches(src)[o_move.label.branch - 1]
        binders = binder_walk(branch_type, o_move.label.imports)
        env2 = {**env, len(play): [(n, d) for k, n, d in binders if k == "lam"]}
        resp = oracle.respond(play)
        if resp is None:
            raise LivenessError(play)
        head_name, head_type = env2[resp.back_ref][resp.label.branch - 1]
        term: Term = TmVar(head_name)
        new_play = play + (resp,)
        imports = list(resp.label.imports)
        t = head_type
        child_branch = 0
        while True:
            if isinstance(t, Forall):
                v = imports.pop(0)
                term = TyApp(term, v)
                t = ty._open(t.body, v)
            elif isinstance(t, Arrow):
                child_branch += 1
                probe = Move(
                    len(new_play),
                    fresh_box_label(ts, new_play, t.domain, child_branch),
                )
                term = App(term, build(new_play + (probe,), env2))
                t = t.codomain
            else:
                break
        for kind, name, dom in reversed(binders):
            term = Abs(name, dom, term) if kind == "lam" else TyAbs(name, term)
        return term

    opening = Move(0, fresh_box_label(ts, (), root_type, 1))
    return build((opening,), {})


# ---------------------------------------------------------------------------
# copycat expansion

_expanded_uid = itertools.count()


class Expanded(_CachedOracle):
    """View of an oracle under instantiation of its black boxes.

    The underlying oracle plays a black-box ("shadow") game; this wrapper
    answers plays of the concrete ("real") game where the first player may
    import arbitrary types.  Core moves are translated move-for-move, with
    each concrete import bound to a fresh shadow box.  When a move lands on a
    state whose shadow head is a box, both players' boards carry a copy of the
    instantiated type; probes into those copies are answered by copycat,
    mirroring the label onto the paired board.

    An optional preset environment instantiates named free variables of the
    underlying root up front, which turns this class into the interpretation
    of type application.
    """

    def __init__(self, oracle, pre_env=None):
        self.oracle = oracle
        self.pre_env = dict(pre_env or {})
        self.shadow_root = oracle.root_type
        self.root_type = ty.subst_map(self.shadow_root, self.pre_env)
        self.game = TransitionSystem(self.root_type)
        self._uid = next(_expanded_uid)
        self._analysis: dict = {}

    def _box(self, k: int) -> str:
        return f"?{self._uid}.{k}"

    def _respond(self, play):
        result = self._analyze(play)
        return None if result is None else result[0]

    def analyze(self, play):
        """Shadow environment values created along the play, in creation
        order (preset entries excluded); None when the play is not ours."""
        result = self._analyze(play)
        return None if result is None else result[1]

    def _analyze(self, play):
        if play in self._analysis:
            return self._analysis[play]
        result = self._compute(play)
        self._analysis[play] = result
        return result

    def _compute(self, play):
        env: dict[str, TypeExpr] = dict(self.pre_env)
        created: list[TypeExpr] = []
        core_play: list[Move] = []
        core_pos: list[int] = []
        core_index: dict[int, int] = {}
        kind: dict[int, str] = {}
        shadow_state: dict[int, TypeExpr] = {}
        region_tail: dict[int, tuple] = {}
        mirror: dict[int, int] = {}
        native: dict[int, int] = {}
        real_state: dict = {0: STAR}
        env_map = lambda: dict(env)

        def handle_core(i, move, shadow_branch):
            # pair concrete imports with shadow quantifiers; the leftover
            # imports instantiate the copy carried by the head box
            sh = shadow_branch
            boxes = []
            reals = list(move.label.imports)
            idx = 0
            while idx < len(reals) and ty.has_available(sh):
                box = self._box(len(created))
                env[box] = reals[idx]
                created.append(reals[idx])
                boxes.append(box)
                sh = ty.import_lazy(sh, Var(box))
                idx += 1
            if ty.has_available(sh):
                return None
            tail = tuple(reals[idx:])
            view = ty.resolved_view(sh)
            if tail and view.head not in env:
                return None
            shadow_state[i] = sh
            region_tail[i] = tail
            kind[i] = "core"
            native[i] = len(view.branches)
            back = 0 if move.back_ref == 0 else core_index[move.back_ref]
            shadow_move = Move(back, Label(move.label.branch, tuple(Var(b) for b in boxes)))
            core_play.append(shadow_move)
            core_pos.append(i)
            core_index[i] = len(core_play)
            resp = self.oracle.respond(tuple(core_play))
            if resp is None:
                return None
            back_real = core_pos[resp.back_ref - 1]
            source = ty.resolved_view(shadow_state[back_real])
            if not 1 <= resp.label.branch <= len(source.branches):
                return None
            target = resolve_branch(source.branches[resp.label.branch - 1], resp.label.imports)
            if target is None:
                return None
            p_view = ty.resolved_view(target)
            p_tail = ()
            if p_view.head in env:
                o_head = ty.resolved_view(shadow_state[i]).head
                if o_head == p_view.head:
                    mirror[i] = i + 1
                    mirror[i + 1] = i
                    region_tail[i + 1] = region_tail[i]
                    p_tail = region_tail[i]
                elif ty.available_count(env[p_view.head]) > 0:
                    return None  # copy needs imports but there is no paired board
            shadow_state[i + 1] = target
            kind[i + 1] = "core"
            native[i + 1] = len(p_view.branches)
            core_play.append(resp)
            core_pos.append(i + 1)
            core_index[i + 1] = len(core_play)
            mapping = env_map()
            real_imports = tuple(ty.subst_map(v, mapping) for v in resp.label.imports) + p_tail
            real_move = Move(back_real, Label(resp.label.branch, real_imports))
            tgt = self.game.step(real_state[back_real], real_move.label)
            if tgt is None:
                return None
            real_state[i + 1] = tgt
            return real_move

        def handle_region(i, move, entry):
            src = i - 1
            if src not in mirror:
                return None
            pair = mirror[src]
            if entry:
                branch = native[pair] + (move.label.branch - native[src])
            else:
                branch = move.label.branch
            kind[i] = "region"
            kind[i + 1] = "region"
            real_move = Move(pair, Label(branch, move.label.imports))
            tgt = self.game.step(real_state[pair], real_move.label)
            if tgt is None:
                return None
            real_state[i + 1] = tgt
            mirror[i] = i + 1
            mirror[i + 1] = i
            return real_move

        i = 1
        n = len(play)
        if n % 2 == 0:
            return None
        while i <= n:
            move = play[i - 1]
            if move.back_ref != i - 1:
                return None
            src = i - 1
            tgt = self.game.step(real_state[src], move.label)
            if tgt is None:
                return None
            real_state[i] = tgt
            if src == 0 or kind[src] == "core":
                shadow_branches = (
                    (self.shadow_root,)
                    if src == 0
                    else ty.resolved_view(shadow_state[src]).branches
                )
                if move.label.branch <= len(shadow_branches):
                    resp = handle_core(i, move, shadow_branches[move.label.branch - 1])
                else:
                    resp = handle_region(i, move, entry=True)
            else:
                resp = handle_region(i, move, entry=False)
            if resp is None:
                return None
            if i == n:
                return resp, tuple(created)
            if play[i] != resp:
                return None
            i += 2
        return None


def expand_strategy(ts, sigma: Strategy, assignment, depth_bound=None, universe=()):
    """Materialize the instantiation of a black-box strategy.

    `assignment` maps canonical box names (B0, B1, ... in play order) to the
    concrete types the first player imports there; unassigned boxes stay
    fresh variables.  The copycat threads induced by the instantiated boxes
    are played out and recorded.  Probes that would need imports beyond
    `universe` are not explored, so the result is relative to it whenever the
    assigned types carry quantifiers.
    """
    oracle = Expanded(StrategyOracle(sigma, ts.root_type))
    if depth_bound is None:
        longest = max((len(p) for p in sigma.plays), default=0)
        extra = sum(ty.size(v) for v in assignment.values())
        depth_bound = longest + 2 * extra + 2
    ambient = ty.free_vars(ts.root_type)

    def conforms(play):
        created = oracle.analyze(play)
        if created is None:
            return False
        for k, value in enumerate(created):
            name = f"B{k}"
            if name in assignment:
                if value != assignment[name]:
                    return False
            elif not isinstance(value, Var):
                return False
        return True

    plays = {()}
    frontier = [()]
    while frontier:
        play = frontier.pop()
        if len(play) + 2 > depth_bound:
            continue
        for o_move in legal_moves(ts, play, Mode.P_BACKTRACKING, _expand_pool(play, assignment, universe, ambient)):
            p1 = play + (o_move,)
            if not conforms(p1):
                continue
            resp = oracle.respond(p1)
            if resp is None:
                continue
            p2 = p1 + (resp,)
            plays.add(p1)
            plays.add(p2)
            frontier.append(p2)
    return Strategy(frozenset(plays))


def _expand_pool(play, assignment, universe, ambient):
    # candidate imports for the next probe: the assigned types, the supplied
    # universe, and fresh box variables for unassigned quantifiers
    used = set(ambient)
    for move in play:
        for v in move.label.imports:
            used |= ty.free_vars(v)
    fresh = []
    k = 0
    while len(fresh) < 3:
        name = f"B{k}"
        k += 1
        if name not in used:
            fresh.append(Var(name))
            used.add(name)
    return tuple(assignment.values()) + tuple(universe) + tuple(fresh)


# ---------------------------------------------------------------------------
# quantifier currying wrappers

class UncurryTyVar(_CachedOracle):
    """View an oracle whose root binds a leading quantifier as one over the
    root with that quantifier opened to an ambient name."""

    def __init__(self, oracle, name: str):
        self.oracle = oracle
        self.name = name
        self.root_type = ty.import_lazy(oracle.root_type, Var(name))

    def _respond(self, play):
        first = play[0]
        opened = Move(
            0, Label(first.label.branch, (Var(self.name),) + first.label.imports)
        )
        return self.oracle.respond((opened,) + play[1:])


class CurryTyVar(_CachedOracle):
    """View an oracle with an ambient type variable as one whose root binds
    it: the opening import supplies the opponent's name for it."""

    def __init__(self, oracle, name: str, root_type: TypeExpr):
        self.oracle = oracle
        self.name = name
        self.root_type = root_type

    def _respond(self, play):
        first = play[0]
        if not first.label.imports or not isinstance(first.label.imports[0], Var):
            return None
        outer_name = first.label.imports[0].name
        inward = {outer_name: Var(self.name)}
        moves = [
            Move(
                0,
                Label(
                    first.label.branch,
                    tuple(ty.subst_map(v, inward) for v in first.label.imports[1:]),
                ),
            )
        ]
        for move in play[1:]:
            moves.append(
                Move(
                    move.back_ref,
                    Label(
                        move.label.branch,
                        tuple(ty.subst_map(v, inward) for v in move.label.imports),
                    ),
                )
            )
        resp = self.oracle.respond(tuple(moves))
        if resp is None:
            return None
        outward = {self.name: Var(outer_name)}
        return Move(
            resp.back_ref,
            Label(
                resp.label.branch,
                tuple(ty.subst_map(v, outward) for v in resp.label.imports),
            ),
        )


# ---------------------------------------------------------------------------
# composition by interaction

class _Entry:
    """One move of the shared interaction history.

    `sig_play` is the function-side view ending at this entry; `tau_play` is
    the argument-side view for moves in the argument zone.
    """

    __slots__ = ("sig_move", "sig_play", "tau_move", "tau_play", "comp_pos")

    def __init__(self):
        self.sig_move = None
        self.sig_play = ()
        self.tau_move = None
        self.tau_play = None
        self.comp_pos = None


class ComposeOracle(_CachedOracle):
    """Composite of a strategy on U -> V with a strategy on U, as a strategy
    on V, computed by playing the two against each other.

    Between a probe on V and the composite answer, the function strategy and
    the argument strategy exchange moves in the hidden U zone; each side is
    consulted with its own view of the shared history.  A probe pointing at
    the function's opening with branch 1 opens a fresh argument-side thread.
    """

    def __init__(self, fun_oracle, arg_oracle, budget: Budget | None = None):
        root = fun_oracle.root_type
        if not isinstance(root, Arrow):
            raise ValueError("function strategy must live on an arrow type")
        if root.domain != arg_oracle.root_type:
            raise ValueError(
                f"cannot compose: argument plays {pretty(arg_oracle.root_type)}, "
                f"function consumes {pretty(root.domain)}"
            )
        self.root_type = root.codomain
        self.sig = Expanded(fun_oracle)
        self.tau = Expanded(arg_oracle)
        self.budget = budget if budget is not None else Budget()
        self._states: dict[tuple, tuple] = {(): ()}

    def _entries_for(self, comp_play):
        if comp_play in self._states:
            return self._states[comp_play]
        resp = self.respond(comp_play[:-1])
        if resp is None or resp != comp_play[-1]:
            return None
        return self._states.get(comp_play)

    def _respond(self, play):
        entries = self._entries_for(play[:-1])
        if entries is None:
            return None
        result = self._process(entries, play[-1])
        if result is None:
            return None
        resp, new_entries = result
        self._states[play + (resp,)] = entries + new_entries
        return resp

    def _query_tau(self, entry):
        self.budget.tick(("arg", str(entry.tau_move)))
        resp = self.tau.respond(tuple(e.tau_move for e in entry.tau_play))
        if resp is None:
            return None
        pointed = entry.tau_play[resp.back_ref - 1]
        nxt = _Entry()
        nxt.tau_move = resp
        nxt.tau_play = entry.tau_play + (nxt,)
        nxt.sig_move = Move(len(pointed.sig_play), resp.label)
        nxt.sig_play = pointed.sig_play + (nxt,)
        return nxt

    def _process(self, entries, o_move):
        if o_move.back_ref != len(entries):
            return None
        ext = _Entry()
        ext.comp_pos = len(entries) + 1
        if entries:
            prev = entries[-1]
            ext.sig_move = Move(len(prev.sig_play), o_move.label)
            ext.sig_play = prev.sig_play + (ext,)
        else:
            ext.sig_move = Move(0, o_move.label)
            ext.sig_play = (ext,)
        cur = ext
        while True:
            self.budget.tick(("fun", str(cur.sig_move)))
            resp = self.sig.respond(tuple(e.sig_move for e in cur.sig_play))
            if resp is None:
                return None
            pointed = cur.sig_play[resp.back_ref - 1]
            at_opening = len(pointed.sig_play) == 1
            if at_opening and resp.label.branch == 1:
                # fresh thread in the hidden zone
                nxt = _Entry()
                nxt.sig_move = resp
                nxt.sig_play = cur.sig_play + (nxt,)
                nxt.tau_move = Move(0, Label(1, resp.label.imports))
                nxt.tau_play = (nxt,)
                cur = self._query_tau(nxt)
                if cur is None:
                    return None
                continue
            if pointed.tau_play is not None:
                # extension of an existing hidden thread
                nxt = _Entry()
                nxt.sig_move = resp
                nxt.sig_play = cur.sig_play + (nxt,)
                nxt.tau_move = Move(len(pointed.tau_play), resp.label)
                nxt.tau_play = pointed.tau_play + (nxt,)
                cur = self._query_tau(nxt)
                if cur is None:
                    return None
                continue
            # a move on V: the composite answer
            answer = _Entry()
            answer.sig_move = resp
            answer.sig_play = cur.sig_play + (answer,)
            answer.comp_pos = len(entries) + 2
            branch = resp.label.branch - 1 if at_opening else resp.label.branch
            return Move(pointed.comp_pos, Label(branch, resp.label.imports)), (ext, answer)


def compose(fun, arg, fun_type: TypeExpr | None = None, arg_type: TypeExpr | None = None, budget: Budget | None = None):
    """Compose a strategy (or oracle) on U -> V with one on U; the result is
    an oracle on V (materialize it to obtain a strategy)."""
    if isinstance(fun, Strategy):
        if fun_type is None:
            raise ValueError("fun_type is needed to compose a bare strategy")
        fun = StrategyOracle(fun, fun_type)
    if isinstance(arg, Strategy):
        if arg_type is None:
            arg_type = fun.root_type.domain
        arg = StrategyOracle(arg, arg_type)
    return ComposeOracle(fun, arg, budget)


# ---------------------------------------------------------------------------
# compositional normalization

def _rename_all_binders(t: Term) -> Term:
    """Give every binder a machine-generated name so that internally chosen
    box and instantiation names can never collide with them."""
    counter = itertools.count()

    def go(t: Term, tm_env, ty_env):
        if isinstance(t, TmVar):
            return TmVar(tm_env.get(t.name, t.name))
        if isinstance(t, Abs):
            new = f"a{next(counter)}"
            mapping = {old: Var(n) for old, n in ty_env.items()}
            return Abs(new, ty.subst_map(t.annot, mapping), go(t.body, {**tm_env, t.var: new}, ty_env))
        if isinstance(t, App):
            return App(go(t.fun, tm_env, ty_env), go(t.arg, tm_env, ty_env))
        if isinstance(t, TyAbs):
            new = f"T{next(counter)}"
            return TyAbs(new, go(t.body, tm_env, {**ty_env, t.tyvar: new}))
        mapping = {old: Var(n) for old, n in ty_env.items()}
        return TyApp(go(t.fun, tm_env, ty_env), ty.subst_map(t.ty, mapping))

    return go(t, {}, {})


_plumbing_cache: dict = {}


def _plumbing_oracle(ctx_types: tuple, a: TypeExpr, b: TypeExpr):
    """Compiled strategy of the applicator  \\F. \\X. \\x1..xn. F x~ (X x~),
    used to contract the shared context of a function and its argument."""
    key = (ctx_types, a, b)
    if key not in _plumbing_cache:
        fun_ty = arrow_chain(ctx_types, Arrow(a, b))
        arg_ty = arrow_chain(ctx_types, a)
        res_ty = arrow_chain(ctx_types, b)
        target = Arrow(fun_ty, Arrow(arg_ty, res_ty))
        xs = [f"c{i}" for i in range(len(ctx_types))]
        spine: Term = TmVar("F")
        for x in xs:
            spine = App(spine, TmVar(x))
        arg_spine: Term = TmVar("A")
        for x in xs:
            arg_spine = App(arg_spine, TmVar(x))
        body: Term = App(spine, arg_spine)
        for x, xt in zip(reversed(xs), reversed(ctx_types)):
            body = Abs(x, xt, body)
        comb = Abs("F", fun_ty, Abs("A", arg_ty, body))
        expanded = eta_long(comb, target)
        _plumbing_cache[key] = StrategyOracle(term_to_strategy(expanded, target), target)
    return _plumbing_cache[key]


def _interpret(t: Term, ctx: tuple, budget: Budget):
    """Oracle of `t` in context `ctx` (name, type pairs), over the game of
    A1 -> ... -> An -> B where B is the type of `t`."""
    ctx_types = tuple(typ for _, typ in ctx)
    ctx_dict = dict(ctx)
    if isinstance(t, TmVar):
        target = arrow_chain(ctx_types, ctx_dict[t.name])
        raw: Term = TmVar(t.name)
        for name, typ in reversed(ctx):
            raw = Abs(name, typ, raw)
        expanded = eta_long(raw, target)
        return StrategyOracle(term_to_strategy(expanded, target), target)
    if isinstance(t, Abs):
        # same game: A1 -> .. -> An -> (A -> B) is literally (A1, .., An, A) -> B
        return _interpret(t.body, ctx + ((t.var, t.annot),), budget)
    if isinstance(t, TyAbs):
        inner = _interpret(t.body, ctx, budget)
        body_type = inner.root_type
        for _ in ctx:
            body_type = body_type.codomain
        outer = arrow_chain(ctx_types, Forall(ty.close(body_type, t.tyvar), hint=t.tyvar))
        return CurryTyVar(inner, t.tyvar, outer)
    if isinstance(t, TyApp):
        inner = _interpret(t.fun, ctx, budget)
        opened = _interpret_fresh_name(inner)
        return Expanded(UncurryTyVar(inner, opened), {opened: t.ty})
    if isinstance(t, App):
        fun_type = typecheck(t.fun, ctx_dict)
        sf = _interpret(t.fun, ctx, budget)
        sa = _interpret(t.arg, ctx, budget)
        plumbing = _plumbing_oracle(ctx_types, fun_type.domain, fun_type.codomain)
        return ComposeOracle(ComposeOracle(plumbing, sf, budget), sa, budget)
    raise TypeError(f"not a term: {t!r}")


_inst_counter = itertools.count()


def _interpret_fresh_name(oracle) -> str:
    used = ty.free_vars(oracle.root_type)
    while True:
        name = f"I{next(_inst_counter)}"
        if name not in used:
            return name


def normalize_via_games(t: Term, budget: Budget | None = None) -> Term:
    """Normalize a closed term by interpreting it compositionally as a
    strategy and reading the resulting behaviour back as a term."""
    target = typecheck(t)
    budget = budget if budget is not None else Budget()
    oracle = _interpret(_rename_all_binders(t), (), budget)
    if oracle.root_type != target:
        raise RuntimeError(
            f"interpretation landed on {pretty(oracle.root_type)}, expected {pretty(target)}"
        )
    return strategy_to_term(oracle, target)


# ---------------------------------------------------------------------------
# bijection checking

@dataclass
class BijectionReport:
    root_type: TypeExpr
    mode: Mode
    term_size_bound: int
    depth_bound: int
    n_terms: int
    n_strategies: int
    unmatched_terms: list
    unmatched_strategies: list
    roundtrip_failures: list

    @property
    def ok(self) -> bool:
        return (
            self.n_terms == self.n_strategies
            and not self.unmatched_terms
            and not self.unmatched_strategies
            and not self.roundtrip_failures
        )

    def summary(self) -> str:
        status = "OK" if self.ok else "MISMATCH"
        return (
            f"type: {pretty(self.root_type)}\n"
            f"terms: {self.n_terms}, strategies: {self.n_strategies}, "
            f"bijection: {status}"
        )


def check_bijection(
    root_type: TypeExpr,
    term_size_bound: int,
    depth_bound: int,
    mode: Mode | None = None,
    universe=(),
) -> BijectionReport:
    """Enumerate both sides within the bounds and verify that compilation and
    readback are mutually inverse bijections between them."""
    from .strategy import enumerate_strategies

    if mode is None:
        mode = Mode.P_BACKTRACKING if is_lambda_type(root_type) else Mode.BLACK_BOX
    ts = TransitionSystem(root_type)
    terms = enumerate_normal_terms(root_type, term_size_bound)
    strategies = enumerate_strategies(ts, mode, depth_bound, universe)
    by_plays = {s.plays: i for i, s in enumerate(strategies)}
    unmatched_terms = []
    roundtrip_failures = []
    hit = set()
    for term in terms:
        sigma = term_to_strategy(term, root_type)
        idx = by_plays.get(sigma.plays)
        if idx is None:
            unmatched_terms.append(term)
            continue
        hit.add(idx)
        back = strategy_to_term(sigma, root_type)
        if not alpha_eq(back, term):
            roundtrip_failures.append(term)
    unmatched_strategies = [s for i, s in enumerate(strategies) if i not in hit]
    return BijectionReport(
        root_type,
        mode,
        term_size_bound,
        depth_bound,
        len(terms),
        len(strategies),
        unmatched_terms,
        unmatched_strategies,
        roundtrip_failures,
    )
