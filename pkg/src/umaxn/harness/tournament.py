"""Seat and evaluator rotation, the append-only record log, and resumable tournament runs."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .config import AgentSpec, GameSpec, TournamentConfig, env_output_dir, env_workers, load_config
from .match import MatchRecord, derive_seed, play_match
from .stats import ScoreTable, aggregate

RECORDS_FILE = "records.jsonl"


@dataclass(frozen=True)
class Assignment:
    """One scheduled match: the evaluated agent sits at ``seat`` with evaluator i;
    the other seats, in seat order, use evaluators j, j+1, ... (mod E)."""

    game: GameSpec
    evaluated: AgentSpec
    benchmark: AgentSpec
    seat: int
    i: int
    j: int
    P: int
    E: int
    seed: int

    @property
    def indices(self) -> list:
        out, k = [], 0
        for s in range(self.P):
            if s == self.seat:
                out.append(self.i)
            else:
                out.append((self.j + k) % self.E)
                k += 1
        return out

    @property
    def agents(self) -> list:
        return [self.evaluated if s == self.seat else self.benchmark for s in range(self.P)]

    @property
    def key(self) -> str:
        return f"{self.game.game}|{json.dumps(self.game.config, sort_keys=True)}|{self.evaluated.label}|" \
               f"seat={self.seat}|i={self.i}|j={self.j}|seed={self.seed}"


def schedule_count(P: int, E: int) -> int:
    return P * E * E


def schedule(config: TournamentConfig) -> list:
    """Every (game, evaluated agent, seat, i, j) once: P * E^2 matches per game and agent."""
    out = []
    for g in config.games:
        P = g.build().num_players
        for agent in config.evaluated:
            for seat in range(P):
                for i in range(config.E):
                    for j in range(config.E):
                        seed = derive_seed(config.seed, g.game, agent.label, seat, i, j)
                        out.append(Assignment(g, agent, config.benchmark, seat, i, j, P, config.E, seed))
    return out


def run_assignment(a: Assignment) -> MatchRecord:
    game = a.game.build()
    return play_match(game, a.agents, seed=a.seed, indices=a.indices, key=a.key, evaluated_seat=a.seat,
                      i=a.i, j=a.j)


# -- record log --------------------------------------------------------------


def read_records(path) -> list:
    """Records of a JSONL log; a torn last line (interrupted write) is ignored."""
    out = []
    if not os.path.exists(path):
        return out
    with open(path) as fh:
        lines = fh.read().split("\n")
    for n, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            out.append(MatchRecord.from_json(json.loads(line)))
        except json.JSONDecodeError:
            if n >= len(lines) - 2:
                break
            raise
    return out


def append_record(path, record: MatchRecord) -> None:
    with open(path, "a") as fh:
        fh.write(json.dumps(record.to_json(), sort_keys=True) + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def _repair_tail(path) -> None:
    """Drop a partially written last line so appends start on a fresh line."""
    if not os.path.exists(path):
        return
    with open(path, "rb") as fh:
        data = fh.read()
    if data and not data.endswith(b"\n"):
        with open(path, "wb") as fh:
            fh.write(data[: data.rfind(b"\n") + 1])


@dataclass
class ExperimentResult:
    table: ScoreTable
    records: list
    output_dir: str
    missing: list  # scheduled keys without a record


def run_experiment(config, output_dir: str | None = None, workers: int | None = None, resume: bool = False,
                   seed: int | None = None, max_matches: int | None = None, progress=None) -> ExperimentResult:
    """Schedule, play (skipping keys already logged when resuming), aggregate.

    ``max_matches`` stops after that many new matches, which is how an
    interrupted run is simulated in tests.
    """
    if not isinstance(config, TournamentConfig):
        config = load_config(config)
    if seed is not None:
        config = TournamentConfig(**{**config.__dict__, "seed": seed})
    out = output_dir or env_output_dir(config.output)
    workers = workers or env_workers(config.workers)
    os.makedirs(out, exist_ok=True)
    log = os.path.join(out, RECORDS_FILE)
    if os.path.exists(log) and os.path.getsize(log) > 0 and not resume:
        raise FileExistsError(f"{log} already holds records; pass resume=True (--resume) or use a fresh directory")
    _repair_tail(log)
    with open(os.path.join(out, "config.json"), "w") as fh:
        json.dump(config.to_dict(), fh, indent=2, sort_keys=True)
    plan = schedule(config)
    done = {r.key for r in read_records(log)}
    todo = [a for a in plan if a.key not in done]
    if max_matches is not None:
        todo = todo[:max_matches]
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for k, rec in enumerate(pool.map(run_assignment, todo)):
                append_record(log, rec)
                if progress:
                    progress(k + 1, len(todo), rec)
    else:
        for k, a in enumerate(todo):
            rec = run_assignment(a)
            append_record(log, rec)
            if progress:
                progress(k + 1, len(todo), rec)
    planned = {a.key for a in plan}
    records = [r for r in read_records(log) if r.key in planned]
    # the primary key guards against double counting if a log was concatenated by hand
    unique = {}
    for r in records:
        unique.setdefault(r.key, r)
    records = [unique[k] for k in sorted(unique)]
    missing = sorted(planned - set(unique))
    table = aggregate(records, config.strata, config.resamples, config.seed) if records else ScoreTable()
    table.excluded = missing
    return ExperimentResult(table, records, out, missing)
