"""Games for System F: boards, dialogues, strategies and their terms."""

from .types import (
    Arrow,
    Bound,
    Forall,
    TypeExpr,
    Var,
    available_binders,
    available_quantifiers,
    free_vars,
    import_lazy,
    import_prenex,
    import_seq,
    parse_type,
    prenex,
    pretty,
    resolved_view,
    substitute,
)
from .transition import Label, STAR, TransitionSystem, build, enumerate_labels, erase_imports
from .dialogue import Dialogue, Mode, Move, format_dialogue, legal_moves, parse_dialogue, threads
from .strategy import (
    Strategy,
    copycat_expand,
    copycat_ok_strategy,
    enumerate_strategies,
    is_live,
    validate_strategy,
)
from .terms import (
    Abs,
    App,
    Term,
    TmVar,
    TyAbs,
    TyApp,
    alpha_eq,
    beta_normalize,
    enumerate_normal_terms,
    eta_long,
    parse_term,
    pretty_term,
    typecheck,
)
from .semantics import (
    BijectionReport,
    Budget,
    BudgetExceededError,
    LivenessError,
    check_bijection,
    compose,
    materialize,
    normalize_via_games,
    strategy_to_term,
    term_to_strategy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
