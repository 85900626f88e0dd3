"""Playing one match, recording it, replaying it and scoring it."""

from __future__ import annotations

import ast
import hashlib
import time
from dataclasses import asdict, dataclass, field

from ..core import Game
from ..eval import NormalizationBounds, builtin_heuristic, calibrate_range, evaluator_from_id, normalize
from ..games import make_game
from ..search import parse_algorithm, run_algorithm
from .config import AgentSpec

STATUS_OK = "ok"
STATUS_FORFEIT = "forfeit"


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from arbitrary parts (independent of PYTHONHASHSEED)."""
    h = hashlib.sha256(":".join(map(str, parts)).encode()).digest()
    return int.from_bytes(h[:8], "little") >> 1


@dataclass
class MatchRecord:
    """One finished match. ``timing`` is wall-clock and excluded from equality checks."""

    key: str
    game: str
    config: dict
    seats: list  # agent label per seat
    evaluators: list  # evaluator id per seat
    evaluated_seat: int
    i: int
    j: int
    seed: int
    moves: list = field(default_factory=list)  # repr of each action
    outcome: list | None = None  # terminal payoff f_t
    win_loss: list | None = None  # f_b
    winners: list = field(default_factory=list)
    status: str = STATUS_OK
    forfeit_seat: int | None = None
    reason: str = ""
    nodes: list = field(default_factory=list)
    timing: list = field(default_factory=list)
    algorithm: str = ""  # label of the evaluated agent

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "MatchRecord":
        return cls(**d)

    def comparable(self) -> dict:
        d = self.to_json()
        d.pop("timing")
        return d


_NORMALIZED_CACHE: dict = {}


def normalized_evaluator(game: Game, evaluator, matches: int = 4, seed: int = 0):
    """[0, 1] version of ``evaluator`` with bounds from seeded self-play (cached per process)."""
    key = (evaluator.ident, repr(game), matches, seed)
    hit = _NORMALIZED_CACHE.get(key)
    if hit is not None:
        return hit
    lo_, hi_ = calibrate_range(evaluator, game, sample_budget=matches, seed=seed)
    # a constant component gets a unit-width window so the rescale stays defined
    m = tuple(lo if lo < hi else lo - 0.5 for lo, hi in zip(lo_, hi_))
    M = tuple(hi if lo < hi else hi + 0.5 for lo, hi in zip(lo_, hi_))
    out = normalize(evaluator, NormalizationBounds(m, M))
    _NORMALIZED_CACHE[key] = out
    return out


def evaluator_for(game: Game, spec: AgentSpec, index: int):
    """Evaluator of ``spec`` with variant ``index``; ``builtin`` picks the game's handcrafted family."""
    if spec.evaluator == "builtin":
        ev = builtin_heuristic(game, index)
    else:
        ev = evaluator_from_id(game, f"{game.name}:{spec.evaluator}:{index}")
    if parse_algorithm(spec.algorithm).family == "mctsh":
        ev = normalized_evaluator(game, ev, spec.calibration_matches)
    return ev


class Seat:
    """An agent bound to its evaluator for the duration of a match."""

    def __init__(self, game, spec: AgentSpec, index: int):
        self.spec = spec
        self.algo = parse_algorithm(spec.algorithm)
        self.evaluator = evaluator_for(game, spec, index) if self.algo.needs_evaluator else None
        self.evaluator_id = self.evaluator.ident if self.evaluator is not None else "-"
        self.budget = spec.budget()

    def choose(self, game, state, seed, trace=None):
        return run_algorithm(self.algo, game, state, self.evaluator, self.budget, seed=seed, trace=trace)


def play_match(game: Game, agents, seed: int = 0, indices=None, key: str = "", evaluated_seat: int = -1,
               i: int = -1, j: int = -1, max_plies: int = 100_000) -> MatchRecord:
    """Play ``game`` to the end with one AgentSpec (or prepared Seat) per seat.

    An agent that returns an illegal action or raises forfeits the match.
    """
    if len(agents) != game.num_players:
        raise ValueError(f"{game.name} needs {game.num_players} agents, got {len(agents)}")
    indices = list(indices) if indices is not None else [0] * game.num_players
    seats = [a if isinstance(a, Seat) else Seat(game, a, idx) for a, idx in zip(agents, indices)]
    rec = MatchRecord(
        key=key, game=game.name, config=dict(getattr(game, "config", {})),
        seats=[s.spec.label for s in seats], evaluators=[s.evaluator_id for s in seats],
        evaluated_seat=evaluated_seat, i=i, j=j, seed=seed,
        algorithm=seats[evaluated_seat].spec.label if evaluated_seat >= 0 else "",
    )
    state = game.initial_state()
    ply = 0
    while not game.is_terminal(state):
        if ply >= max_plies:
            raise RuntimeError(f"{game.name}: match exceeded {max_plies} plies")
        p = game.current_player(state)
        t0 = time.perf_counter()
        try:
            result = seats[p].choose(game, state, derive_seed(seed, ply))
            action = result.chosen
            legal = action in game.legal_actions(state)
        except Exception as exc:  # a crashing agent forfeits, it does not stop the tournament
            rec.status, rec.forfeit_seat = STATUS_FORFEIT, p
            rec.reason = f"{type(exc).__name__}: {exc}"
            return rec
        rec.timing.append(time.perf_counter() - t0)
        rec.nodes.append(result.nodes)
        if not legal:
            rec.status, rec.forfeit_seat = STATUS_FORFEIT, p
            rec.reason = f"illegal action {action!r}"
            rec.moves.append(repr(action))
            return rec
        rec.moves.append(repr(action))
        state = game.apply(state, action, check=False)
        ply += 1
    rec.outcome = list(game.terminal_payoff(state))
    rec.win_loss = list(game.win_loss_vector(state))
    rec.winners = sorted(game.winners(state))
    return rec


def replay(record: MatchRecord, game: Game | None = None):
    """Re-simulate the move list; returns (f_t, f_b) of the final state (None for forfeits)."""
    game = game or make_game(record.game, record.config)
    state = game.initial_state()
    moves = record.moves if record.status == STATUS_OK else record.moves[:-1] if record.reason.startswith(
        "illegal") else record.moves
    for m in moves:
        state = game.apply(state, ast.literal_eval(m))
    if record.status != STATUS_OK:
        return None
    return list(game.terminal_payoff(state)), list(game.win_loss_vector(state))


def binary_score(record: MatchRecord, player: int) -> int:
    """1 for a victory, 0 for a draw or an all-way tie, -1 for a defeat (or a forfeit)."""
    if record.status == STATUS_FORFEIT:
        return -1 if player == record.forfeit_seat else 0
    winners = set(record.winners)
    P = len(record.seats)
    if not winners or len(winners) == P:
        return 0
    return 1 if player in winners else -1
