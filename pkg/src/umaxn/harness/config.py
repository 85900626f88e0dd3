"""Tournament configuration: JSON file, validation with field paths, environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field

from ..core import ConfigError, UnsupportedGameError
from ..games import GAMES, make_game
from ..search import SearchBudget, parse_algorithm

ENV_WORKERS = "UMAXN_WORKERS"
ENV_OUTPUT_DIR = "UMAXN_OUTPUT_DIR"


@dataclass(frozen=True)
class AgentSpec:
    """Algorithm identifier, evaluator family and move budget of one seat."""

    algorithm: str
    budget_nodes: int | None = None
    budget_seconds: float | None = None
    evaluator: str = "builtin"  # evaluator family; the index comes from the schedule
    calibration_matches: int = 4  # self-play matches used to normalize evaluators for mctsh

    def __post_init__(self):
        parse_algorithm(self.algorithm)
        self.budget()

    def budget(self) -> SearchBudget:
        try:
            return SearchBudget(nodes=self.budget_nodes, seconds=self.budget_seconds)
        except ValueError as exc:
            raise ConfigError(f"agent {self.algorithm}: {exc}") from None

    @property
    def label(self) -> str:
        return self.algorithm.strip()


@dataclass(frozen=True)
class GameSpec:
    game: str
    config: dict = field(default_factory=dict)

    def build(self):
        return make_game(self.game, self.config)


@dataclass(frozen=True)
class TournamentConfig:
    games: tuple
    evaluated: tuple
    benchmark: AgentSpec
    E: int = 2
    seed: int = 0
    resamples: int = 10_000
    strata: tuple = ("game", "seat", "pair")
    output: str = "results"
    workers: int = 1
    name: str = "tournament"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["games"] = [asdict(g) for g in self.games]
        d["evaluated"] = [asdict(a) for a in self.evaluated]
        d["strata"] = list(self.strata)
        return d


def _agent(d, path, budget):
    if isinstance(d, str):
        d = {"algorithm": d}
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected an object or algorithm string")
    if "algorithm" not in d:
        raise ConfigError(f"{path}.algorithm: missing")
    b = dict(budget or {})
    b.update(d.get("budget") or {})
    unknown = set(d) - {"algorithm", "budget", "evaluator", "calibration_matches"}
    if unknown:
        raise ConfigError(f"{path}: unknown field(s) {sorted(unknown)}")
    unknown = set(b) - {"nodes", "seconds"}
    if unknown:
        raise ConfigError(f"{path}.budget: unknown field(s) {sorted(unknown)}")
    try:
        return AgentSpec(d["algorithm"], b.get("nodes"), b.get("seconds"), d.get("evaluator", "builtin"),
                         int(d.get("calibration_matches", 4)))
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def config_from_dict(d: dict) -> TournamentConfig:
    """Validate a parsed config; errors name the offending field path."""
    if not isinstance(d, dict):
        raise ConfigError("config: expected a JSON object")
    known = {"name", "games", "game", "evaluated", "benchmark", "E", "budget", "seed", "resamples", "strata",
             "output", "workers"}
    unknown = set(d) - known
    if unknown:
        raise ConfigError(f"config: unknown field(s) {sorted(unknown)}")
    raw_games = d.get("games")
    if raw_games is None and "game" in d:
        raw_games = [d["game"]]
    if not raw_games:
        raise ConfigError("games: at least one game is required")
    games = []
    for k, g in enumerate(raw_games):
        path = f"games[{k}]"
        if isinstance(g, str):
            g = {"game": g}
        if not isinstance(g, dict) or "game" not in g:
            raise ConfigError(f"{path}.game: missing")
        if g["game"] not in GAMES:
            raise ConfigError(f"{path}.game: unknown game {g['game']!r}")
        spec = GameSpec(g["game"], dict(g.get("config") or {}))
        try:
            spec.build()
        except (ConfigError, UnsupportedGameError) as exc:
            raise ConfigError(f"{path}.config: {exc}") from None
        games.append(spec)
    budget = d.get("budget")
    if budget is not None and not isinstance(budget, dict):
        raise ConfigError("budget: expected an object like {\"nodes\": 10000}")
    evaluated = d.get("evaluated")
    if not evaluated:
        raise ConfigError("evaluated: at least one evaluated agent is required")
    agents = tuple(_agent(a, f"evaluated[{k}]", budget) for k, a in enumerate(evaluated))
    bench = _agent(d.get("benchmark", "maxn"), "benchmark", budget)
    E = d.get("E", 2)
    if not isinstance(E, int) or E < 1:
        raise ConfigError("E: must be an integer >= 1")
    strata = d.get("strata", ["game", "seat", "pair"])
    bad = [s for s in strata if s not in ("game", "seat", "pair", "i", "j")]
    if bad:
        raise ConfigError(f"strata: unknown component(s) {bad}")
    resamples = d.get("resamples", 10_000)
    if not isinstance(resamples, int) or resamples < 1:
        raise ConfigError("resamples: must be an integer >= 1")
    workers = d.get("workers", 1)
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError("workers: must be an integer >= 1")
    return TournamentConfig(
        games=tuple(games), evaluated=agents, benchmark=bench, E=E, seed=int(d.get("seed", 0)),
        resamples=resamples, strata=tuple(strata), output=str(d.get("output", "results")), workers=workers,
        name=str(d.get("name", "tournament")),
    )


def load_config(path) -> TournamentConfig:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return config_from_dict(d)


def env_workers(default: int) -> int:
    v = os.environ.get(ENV_WORKERS)
    if not v:
        return default
    try:
        n = int(v)
    except ValueError:
        raise ConfigError(f"{ENV_WORKERS} must be an integer, got {v!r}") from None
    if n < 1:
        raise ConfigError(f"{ENV_WORKERS} must be >= 1")
    return n


def env_output_dir(default: str) -> str:
    return os.environ.get(ENV_OUTPUT_DIR) or default
