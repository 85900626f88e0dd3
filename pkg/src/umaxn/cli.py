"""Command line: run / solve / bench / report / perft."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .core import GameError
from .eval import builtin_heuristic, evaluator_from_id
from .games import DESK_CONFIGS, make_game, perft
from .harness import (
    aggregate,
    format_table,
    read_records,
    run_experiment,
    write_report,
)
from .harness.config import ENV_OUTPUT_DIR
from .harness.match import normalized_evaluator
from .oracle import count_states, solve_maxn
from .search import SearchBudget, parse_algorithm, run_algorithm


def _game(args):
    cfg = json.loads(args.config) if args.config else DESK_CONFIGS.get(args.game, {})
    return make_game(args.game, cfg)


def _state(game, text):
    return game.initial_state() if text in ("initial", "-", "") else game.parse(text)


def cmd_run(args):
    def progress(k, n, rec):
        if not args.quiet:
            print(f"[{k}/{n}] {rec.key} status={rec.status} winners={rec.winners}", file=sys.stderr)

    res = run_experiment(args.config, output_dir=args.out, workers=args.workers, resume=args.resume,
                         seed=args.seed, progress=progress)
    paths = write_report(res.table, res.output_dir)
    print(format_table(res.table), end="")
    for p in paths.values():
        print(f"wrote {p}")
    return 0


def cmd_report(args):
    records = read_records(args.records)
    if not records:
        print(f"no records in {args.records}", file=sys.stderr)
        return 1
    table = aggregate(records, tuple(args.strata.split(",")), args.resamples, args.seed)
    out = args.out or os.path.dirname(os.path.abspath(args.records))
    paths = write_report(table, out)
    print(format_table(table), end="")
    for p in paths.values():
        print(f"wrote {p}")
    return 0


def cmd_solve(args):
    game = _game(args)
    state = _state(game, args.state)
    n = count_states(game, state, args.cap)
    if n > args.cap:
        print(f"refused: more than {args.cap} reachable states", file=sys.stderr)
        return 2
    table = solve_maxn(game, state, cap=args.cap, key=args.key)
    e = table.root_entry
    print(f"states {n}")
    print(f"value {list(e.value)}")
    print(f"completion {list(e.completion)}")
    print(f"best {game.format_action(e.best) if e.best is not None else '-'}")
    if args.save:
        table.save(args.save)
        print(f"wrote {args.save}")
    return 0


def cmd_bench(args):
    game = _game(args)
    algo = parse_algorithm(args.agent)
    ev = None
    if algo.needs_evaluator:
        ev = evaluator_from_id(game, args.evaluator) if args.evaluator else builtin_heuristic(game, 0)
        if algo.family == "mctsh":
            ev = normalized_evaluator(game, ev)
    budget = SearchBudget(seconds=args.seconds) if args.seconds else SearchBudget(nodes=args.nodes)
    trace_fh = open(args.trace, "w") if args.trace else None
    trace = (lambda line: trace_fh.write(line + "\n")) if trace_fh else None
    state = _state(game, args.state)
    total_t = total_n = 0
    try:
        for ply in range(args.moves):
            if game.is_terminal(state):
                break
            t0 = time.perf_counter()
            r = run_algorithm(algo, game, state, ev, budget, seed=args.seed + ply, trace=trace)
            dt = time.perf_counter() - t0
            total_t += dt
            total_n += r.nodes
            print(f"ply {ply} player {state.mover} action {game.format_action(r.chosen)} "
                  f"nodes {r.nodes} depth {r.depth} time {dt:.3f}s")
            state = game.apply(state, r.chosen)
    finally:
        if trace_fh:
            trace_fh.close()
    rate = total_n / total_t if total_t > 0 else 0.0
    print(f"total nodes {total_n} time {total_t:.3f}s ({rate:.0f} nodes/s)")
    return 0


def cmd_perft(args):
    game = _game(args)
    state = _state(game, args.state)
    for d in range(1, args.depth + 1):
        t0 = time.perf_counter()
        n = perft(game, state, d)
        print(f"depth {d} {n} ({time.perf_counter() - t0:.2f}s)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="umaxn", description="Multiplayer game search: tournaments, oracle, profiling.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a tournament from a JSON config")
    r.add_argument("config")
    r.add_argument("--seed", type=int, default=None, help="override the config seed")
    r.add_argument("--workers", type=int, default=None, help="parallel match workers")
    r.add_argument("--resume", action="store_true", help="continue an interrupted run in the same directory")
    r.add_argument("--out", default=None, help=f"output directory (env {ENV_OUTPUT_DIR})")
    r.add_argument("--quiet", action="store_true")
    r.set_defaults(fn=cmd_run)

    s = sub.add_parser("solve", help="solve a small position exactly")
    s.add_argument("game")
    s.add_argument("state", help="serialized state or 'initial'")
    s.add_argument("--config", default=None, help="game config as JSON")
    s.add_argument("--key", choices=["value", "completion"], default="value")
    s.add_argument("--cap", type=int, default=10**6)
    s.add_argument("--save", default=None, help="write the solved table (binary)")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_solve)

    b = sub.add_parser("bench", help="self-play profiling of one agent")
    b.add_argument("game")
    b.add_argument("agent", help="algorithm id, e.g. umaxn-safe, kbest:5, mcts:sqrt2/4")
    b.add_argument("--config", default=None, help="game config as JSON")
    b.add_argument("--state", default="initial")
    b.add_argument("--nodes", type=int, default=10_000)
    b.add_argument("--seconds", type=float, default=None)
    b.add_argument("--moves", type=int, default=5)
    b.add_argument("--evaluator", default=None, help="<game>:<family>:<variant>")
    b.add_argument("--trace", default=None, help="write a per-iteration search trace here")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--workers", type=int, default=1)
    b.set_defaults(fn=cmd_bench)

    rp = sub.add_parser("report", help="re-aggregate a records log")
    rp.add_argument("records")
    rp.add_argument("--out", default=None)
    rp.add_argument("--resamples", type=int, default=10_000)
    rp.add_argument("--strata", default="game,seat,pair")
    rp.add_argument("--seed", type=int, default=0)
    rp.set_defaults(fn=cmd_report)

    pf = sub.add_parser("perft", help="count action sequences")
    pf.add_argument("game")
    pf.add_argument("depth", type=int)
    pf.add_argument("--config", default=None, help="game config as JSON")
    pf.add_argument("--state", default="initial")
    pf.set_defaults(fn=cmd_perft)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (GameError, FileExistsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
