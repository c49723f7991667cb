"""Command line interface.

Exit codes: 0 on success, 1 when a check or validation fails or the engines
disagree, 2 on budget exhaustion or bad usage.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys

from . import dialogue as dlg
from . import semantics, strategy as strat
from .dialogue import Mode
from .terms import alpha_eq, beta_normalize, eta_long, parse_term, pretty_term, typecheck
from .transition import TransitionSystem, to_dot
from .types import parse_type, prenex, pretty


def _parse_universe(text: str | None):
    if not text:
        return ()
    return tuple(parse_type(part) for part in text.split(";") if part.strip())


def _mode(name: str) -> Mode:
    return Mode.P_BACKTRACKING if name == "lambda" else Mode.BLACK_BOX


def cmd_prenex(args) -> int:
    print(pretty(prenex(parse_type(args.type))))
    return 0


def cmd_graph(args) -> int:
    ts = TransitionSystem(parse_type(args.type))
    universe = _parse_universe(args.universe)
    dot = to_dot(ts, args.depth, universe)
    if args.out:
        if args.out.endswith(".png"):
            from .plots import render_graph
            from .transition import reachable_graph

            states, edges = reachable_graph(ts, args.depth, universe)
            render_graph(states, edges, args.out)
        else:
            with open(args.out, "w") as fh:
                fh.write(dot + "\n")
        print(f"wrote {args.out}")
    else:
        print(dot)
    return 0


def cmd_traces(args) -> int:
    ts = TransitionSystem(parse_type(args.type))
    if args.validate:
        with open(args.validate) as fh:
            d = dlg.parse_dialogue(fh.read())
        ok = dlg.dialogue_valid(ts, d, _mode(args.mode))
        print("valid" if ok else "invalid")
        return 0 if ok else 1
    universe = _parse_universe(args.universe)
    traces = sorted(
        dlg.erased_trace_set(ts, args.depth, universe, root_relative=args.root_relative),
        key=lambda t: (len(t), t),
    )
    lines = ["e" if not t else "".join(str(b) for b in t) for t in traces]
    text = "\n".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def cmd_strategies(args) -> int:
    ts = TransitionSystem(parse_type(args.type))
    universe = _parse_universe(args.universe)
    strategies = strat.enumerate_strategies(
        ts,
        _mode(args.mode),
        args.depth,
        universe,
        require_copycat=not args.no_copycat,
    )
    print(f"strategies: {len(strategies)}")
    for i, sigma in enumerate(strategies, start=1):
        print(f"--- strategy {i} ---")
        print(strat.format_strategy(sigma), end="")
    if args.out:
        with open(args.out, "w") as fh:
            for i, sigma in enumerate(strategies, start=1):
                fh.write(f"# strategy {i}\n{strat.format_strategy(sigma)}\n")
        print(f"wrote {args.out}")
    return 0


def cmd_compile(args) -> int:
    term = parse_term(args.term)
    target = parse_type(args.type) if args.type else typecheck(term)
    sigma = semantics.term_to_strategy(term, target)
    text = strat.format_strategy(sigma)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def cmd_readback(args) -> int:
    with open(args.file) as fh:
        sigma = strat.parse_strategy(fh.read())
    term = semantics.strategy_to_term(sigma, parse_type(args.type))
    print(pretty_term(term))
    return 0


def cmd_normalize(args) -> int:
    term = parse_term(args.term)
    target = typecheck(term)
    results = {}
    if args.engine in ("syntax", "both"):
        results["syntax"] = eta_long(beta_normalize(term), target)
    if args.engine in ("games", "both"):
        budget = semantics.Budget(args.budget)
        try:
            results["games"] = semantics.normalize_via_games(term, budget)
        except semantics.BudgetExceededError as exc:
            print("budget exhausted; partial interaction transcript:", file=sys.stderr)
            for item in exc.transcript[-50:]:
                print(f"  {item}", file=sys.stderr)
            return 2
    for engine, result in results.items():
        print(f"{engine}: {pretty_term(result)}")
    if len(results) == 2:
        agree = alpha_eq(results["games"], results["syntax"])
        print("AGREE" if agree else "DISAGREE")
        return 0 if agree else 1
    return 0


def cmd_check(args) -> int:
    target = parse_type(args.type)
    report = semantics.check_bijection(
        target,
        args.term_size,
        args.depth,
        mode=_mode(args.mode) if args.mode else None,
        universe=_parse_universe(args.universe),
    )
    print(report.summary())
    if args.out:
        csv_path = args.out if args.out.endswith(".csv") else args.out + ".csv"
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["type", "mode", "term_size_bound", "depth_bound", "terms", "strategies", "bijection"]
            )
            writer.writerow(
                [
                    pretty(report.root_type),
                    report.mode.value,
                    report.term_size_bound,
                    report.depth_bound,
                    report.n_terms,
                    report.n_strategies,
                    "OK" if report.ok else "MISMATCH",
                ]
            )
        fig_path = csv_path[: -len(".csv")] + ".png"
        from .plots import render_check_figure

        render_check_figure(report, fig_path)
        print(f"wrote {csv_path} and {fig_path}")
    return 0 if report.ok else 1


def cmd_play(args) -> int:
    term = parse_term(args.term)
    target = typecheck(term)
    played = eta_long(beta_normalize(term), target)
    sigma = semantics.term_to_strategy(played, target)
    oracle = semantics.StrategyOracle(sigma, target)
    ts = TransitionSystem(target)
    rng = random.Random(args.seed)
    play: tuple = ()
    print(f"playing against: {pretty_term(term)} : {pretty(target)}")
    while True:
        moves = dlg.legal_moves(ts, play, Mode.BLACK_BOX)
        if not moves:
            print("no probes left; game over")
            break
        for i, move in enumerate(moves, start=1):
            print(f"  [{i}] {move}")
        if args.random:
            choice = rng.randrange(len(moves))
            print(f"probe> {choice + 1} (random)")
        else:
            try:
                raw = input("probe> ").strip()
            except EOFError:
                print()
                break
            if not raw:
                break
            try:
                choice = int(raw) - 1
            except ValueError:
                print("enter a move number")
                continue
            if not 0 <= choice < len(moves):
                print("no such move")
                continue
        play = play + (moves[choice],)
        resp = oracle.respond(play)
        if resp is None:
            print("no answer (strategy is not live here)")
            break
        play = play + (resp,)
        print(f"answer: {resp}")
        if args.random and len(play) >= 2 * args.depth:
            break
    out = args.out or "play_transcript.txt"
    with open(out, "w") as fh:
        fh.write(dlg.format_dialogue(play) + "\n")
    print(f"transcript saved to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypergames",
        description="games for System F: boards, dialogues, strategies, terms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prenex", help="prenex form of a type")
    p.add_argument("type")
    p.set_defaults(func=cmd_prenex)

    p = sub.add_parser("graph", help="bounded unfolding of a type's board")
    p.add_argument("type")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--universe", default="")
    p.add_argument("--out", help="write DOT (or a .png figure) here")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("traces", help="enumerate or validate traces")
    p.add_argument("type")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--universe", default="")
    p.add_argument("--root-relative", action="store_true")
    p.add_argument("--validate", help="trace file to validate instead")
    p.add_argument("--mode", choices=["lambda", "f"], default="f")
    p.add_argument("--out")
    p.set_defaults(func=cmd_traces)

    p = sub.add_parser("strategies", help="enumerate live strategies")
    p.add_argument("type")
    p.add_argument("--mode", choices=["lambda", "f"], default="f")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--universe", default="")
    p.add_argument("--no-copycat", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_strategies)

    p = sub.add_parser("compile", help="compile a term to a strategy file")
    p.add_argument("term")
    p.add_argument("--type")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("readback", help="read a strategy file back as a term")
    p.add_argument("file")
    p.add_argument("--type", required=True)
    p.set_defaults(func=cmd_readback)

    p = sub.add_parser("normalize", help="normalize a closed term")
    p.add_argument("term")
    p.add_argument("--engine", choices=["games", "syntax", "both"], default="both")
    p.add_argument("--budget", type=int, default=10**6)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("check", help="bijection report for a type")
    p.add_argument("type")
    p.add_argument("--mode", choices=["lambda", "f"])
    p.add_argument("--term-size", type=int, default=12)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--universe", default="")
    p.add_argument("--out", help="write a CSV report and a PNG figure")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("play", help="probe a term's strategy interactively")
    p.add_argument("term")
    p.add_argument("--random", action="store_true", help="probe randomly instead of via stdin")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=6, help="stop random play after this many rounds")
    p.add_argument("--out")
    p.set_defaults(func=cmd_play)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except semantics.BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
