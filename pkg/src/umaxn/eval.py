"""State evaluators: handcrafted heuristics, normalization to [0, 1], batching."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .core import ConfigError, Game, TerminalStateError, UnsupportedGameError
from .games import hexfamily
from .games.hexgrid import INF, path_cost


class InvalidBoundsError(ValueError):
    pass


class Evaluator:
    """Deterministic map state -> payoff vector. ``ident`` names it in configs."""

    def __init__(self, game: Game, ident: str):
        self.game = game
        self.ident = ident

    def values(self, state) -> tuple:
        raise NotImplementedError

    def __call__(self, state) -> tuple:
        return self.values(state)

    def evaluate(self, state) -> tuple:
        if self.game.is_terminal(state):
            raise TerminalStateError("evaluate called on a terminal state; use terminal_payoff")
        return self.values(state)

    def __repr__(self):
        return f"{type(self).__name__}({self.ident!r})"


class BatchedEvaluator:
    """Adds the batch entry point used for child batching; keeps call statistics."""

    def __init__(self, evaluator: Evaluator):
        self.evaluator = evaluator
        self.game = evaluator.game
        self.ident = evaluator.ident
        self.n_batches = 0
        self.n_states = 0
        self.last_batch_size = 0

    def evaluate(self, state) -> tuple:
        return self.evaluator.evaluate(state)

    def __call__(self, state) -> tuple:
        return self.evaluator.values(state)

    def values(self, state) -> tuple:
        return self.evaluator.values(state)

    def evaluate_batch(self, states) -> list:
        states = list(states)
        is_terminal = self.game.is_terminal
        for i, s in enumerate(states):
            if is_terminal(s):
                raise TerminalStateError(f"evaluate_batch: state at index {i} is terminal")
        self.n_batches += 1
        self.n_states += len(states)
        self.last_batch_size = len(states)
        f = self.evaluator.values
        return [f(s) for s in states]


def as_batched(evaluator) -> BatchedEvaluator:
    return evaluator if isinstance(evaluator, BatchedEvaluator) else BatchedEvaluator(evaluator)


def evaluate(evaluator, state) -> tuple:
    return evaluator.evaluate(state)


def evaluate_batch(batched: BatchedEvaluator, states) -> list:
    return batched.evaluate_batch(states)


# -- simple evaluators -----------------------------------------------------


class ZeroEvaluator(Evaluator):
    def __init__(self, game, ident=None):
        super().__init__(game, ident or f"{game.name}:zero:0")
        self._zero = (0.0,) * game.num_players

    def values(self, state):
        return self._zero


class ConstantEvaluator(Evaluator):
    def __init__(self, game, value, ident=None):
        super().__init__(game, ident or f"{game.name}:constant:0")
        self._value = tuple(float(x) for x in value)

    def values(self, state):
        return self._value


class FunctionEvaluator(Evaluator):
    """Wraps ``fn(state) -> sequence``; picklable only if ``fn`` is."""

    def __init__(self, game, fn, ident=None):
        super().__init__(game, ident or f"{game.name}:function:0")
        self.fn = fn

    def values(self, state):
        return tuple(float(x) for x in self.fn(state))


class ScaledEvaluator(Evaluator):
    """Positive per-component rescaling ``scale[p] * f_p + shift[p]``."""

    def __init__(self, base, scale, shift=None):
        super().__init__(base.game, base.ident + ":scaled")
        self.base = base
        self.scale = tuple(scale)
        self.shift = tuple(shift) if shift is not None else (0.0,) * len(self.scale)

    def values(self, state):
        return tuple(a * x + b for a, x, b in zip(self.scale, self.base.values(state), self.shift))


# -- normalization -----------------------------------------------------------


@dataclass(frozen=True)
class NormalizationBounds:
    m: tuple  # minimum practical value per component
    M: tuple  # maximum practical value per component

    def __post_init__(self):
        if len(self.m) != len(self.M):
            raise InvalidBoundsError("bounds have different lengths")
        for i, (lo, hi) in enumerate(zip(self.m, self.M)):
            if not lo < hi:
                raise InvalidBoundsError(f"component {i}: need m < M, got m={lo}, M={hi}")


class NormalizedEvaluator(Evaluator):
    """Clamp to [m, M] then rescale affinely to [0, 1], component-wise."""

    def __init__(self, base: Evaluator, bounds: NormalizationBounds):
        super().__init__(base.game, base.ident + ":normalized")
        self.base = base
        self.bounds = bounds

    def values(self, state):
        return tuple(
            (max(min(x, hi), lo) - lo) / (hi - lo)
            for x, lo, hi in zip(self.base.values(state), self.bounds.m, self.bounds.M)
        )


def normalize(evaluator: Evaluator, bounds: NormalizationBounds) -> NormalizedEvaluator:
    if not isinstance(bounds, NormalizationBounds):
        bounds = NormalizationBounds(tuple(bounds[0]), tuple(bounds[1]))
    return NormalizedEvaluator(evaluator, bounds)


def _epsilon_greedy(evaluator, epsilon=0.2):
    def agent(game, state, rng):
        actions = game.legal_actions(state)
        if rng.random() < epsilon:
            return rng.choice(actions)
        p = state.mover
        best, best_v = actions[0], -math.inf
        for a in actions:
            child = game.apply(state, a, check=False)
            v = game.terminal_payoff(child)[p] if game.is_terminal(child) else evaluator.values(child)[p]
            if v > best_v:
                best, best_v = a, v
        return best

    return agent


def calibrate_range(evaluator: Evaluator, game: Game, agent=None, sample_budget: int = 10, seed: int = 0,
                    max_plies: int = 10_000) -> tuple:
    """Component-wise (min, max) lists of ``evaluator`` over the non-terminal states of sampled matches.

    ``agent(game, state, rng) -> action`` drives all seats; the default is
    epsilon-greedy on the evaluator itself.
    """
    if sample_budget < 1:
        raise ConfigError("sample_budget must be >= 1")
    agent = agent or _epsilon_greedy(evaluator)
    rng = random.Random(seed)
    P = game.num_players
    lo, hi = [math.inf] * P, [-math.inf] * P
    for _ in range(sample_budget):
        s = game.initial_state()
        for _ply in range(max_plies):
            if game.is_terminal(s):
                break
            for i, x in enumerate(evaluator.values(s)):
                lo[i] = min(lo[i], x)
                hi[i] = max(hi[i], x)
            s = game.apply(s, agent(game, s, rng))
    return lo, hi


def calibrate_bounds(evaluator: Evaluator, game: Game, agent=None, sample_budget: int = 10, seed: int = 0,
                     max_plies: int = 10_000) -> NormalizationBounds:
    """Bounds (m, M) from ``calibrate_range``; raises InvalidBoundsError if a component never varied."""
    lo, hi = calibrate_range(evaluator, game, agent, sample_budget, seed, max_plies)
    return NormalizationBounds(tuple(lo), tuple(hi))


# -- handcrafted heuristics ----------------------------------------------------

N_VARIANTS = 30


class _Weighted(Evaluator):
    """Linear in per-player features; variant k > 0 jitters the weights with a seeded draw."""

    family = "weighted"
    base_weights: tuple = (1.0,)
    jitter: tuple = (0.0,)

    def __init__(self, game, variant: int = 0):
        super().__init__(game, f"{game.name}:{self.family}:{variant}")
        self.variant = variant
        if variant == 0:
            self.weights = tuple(self.base_weights)
        else:
            rng = random.Random(f"{game.name}:{self.family}:{variant}")
            self.weights = tuple(w + j * rng.gauss(0.0, 1.0) for w, j in zip(self.base_weights, self.jitter))

    def features(self, state) -> list:
        """One feature tuple per player."""
        raise NotImplementedError

    def squash(self, x):
        return x

    def values(self, state):
        w = self.weights
        return tuple(self.squash(sum(wi * fi for wi, fi in zip(w, f))) for f in self.features(state))


class MaterialEvaluator(_Weighted):
    """Othello family: [score, edge stones, corner stones, tempo].

    Tempo is the mover's best immediate gain (placed plus captured stones);
    it is 0 for everyone else. Without it the count lags one capture behind
    whoever is about to move.
    """

    family = "material"
    base_weights = (1.0, 0.0, 0.0, 1.0)
    jitter = (0.1, 0.3, 0.6, 0.2)

    def __init__(self, game, variant=0):
        super().__init__(game, variant)
        if game.name == "quadrothello":
            n = game.n
            self.edge = frozenset(i for i in range(n * n) if i // n in (0, n - 1) or i % n in (0, n - 1))
            self.corner = frozenset((0, n - 1, n * (n - 1), n * n - 1))
        else:
            k = game.geom.side - 1
            coords = game.geom.coords
            self.edge = frozenset(i for i, (q, r) in enumerate(coords) if max(abs(q), abs(r), abs(q + r)) == k)
            self.corner = frozenset(i for i, (q, r) in enumerate(coords) if sorted((abs(q), abs(r), abs(q + r))) == [0, k, k])

    def features(self, state):
        b = state.board
        P = self.game.num_players
        counts = [0] * P
        edges = [0] * P
        corners = [0] * P
        for i, v in enumerate(b):
            if 1 <= v <= P:
                counts[v - 1] += 1
        for i in self.edge:
            v = b[i]
            if 1 <= v <= P:
                edges[v - 1] += 1
        for i in self.corner:
            v = b[i]
            if 1 <= v <= P:
                corners[v - 1] += 1
        if self.game.name == "triinversion":
            from .games.othello import INDIRECT_OPPONENT

            scores = [counts[p] + counts[INDIRECT_OPPONENT[p]] for p in range(P)]
        else:
            scores = counts
        g = self.game
        tempo = [0] * P
        if not g.is_terminal(state):
            m = state.mover
            cells = g.moves_for(b, m)
            if cells:
                tempo[m] = 1 + max(len(g.capture_run(b, m, i)) for i in cells)
        return [(scores[p], edges[p], corners[p], tempo[p]) for p in range(P)]


class ConnectionEvaluator(_Weighted):
    """Hex family: shortest-connection differential squashed into (-1, 1).

    feature 0: mean opponent connection distance minus own distance;
    feature 1: opponent team distance minus own team distance (Teamhex only).
    """

    family = "connection"
    base_weights = (1.0, 1.0)
    jitter = (0.15, 0.3)
    SCALE = 0.35

    def __init__(self, game, variant=0):
        super().__init__(game, variant)
        self.cap = len(game.geom) + 1
        if isinstance(game, hexfamily.SeparedTeamhex):
            self.allowed = [
                frozenset(i for z in game.player_zones[p] for i in game.zone_cells[z]) for p in range(4)
            ]

    def _distances(self, board):
        g = self.game
        P = g.num_players
        nb = g.geom.neighbors
        cap = self.cap
        if isinstance(g, hexfamily.SeparedTeamhex):
            d = []
            for p in range(P):
                allowed = self.allowed[p]
                cost = [0 if v == p + 1 else (1 if v == 0 and i in allowed else None) for i, v in enumerate(board)]
                d.append(min(cap, path_cost(nb, cost, *g.player_sides[p])))
            team = []
            for t, members in enumerate(hexfamily.TEAMS):
                cost = [0 if v and (v - 1) in members else (1 if v == 0 else None) for v in board]
                team.append(min(cap, path_cost(nb, cost, *g.team_sides[t])))
            return d, team
        d = []
        for p in range(P):
            cost = hexfamily.hex_distance_costs(g, board, p)
            d.append(min(cap, path_cost(nb, cost, *g.geom.sides[p])))
        return d, None

    def features(self, state):
        d, team = self._distances(state.board)
        P = len(d)
        total = sum(d)
        out = []
        for p in range(P):
            own_team = opp_team = 0.0
            if team is not None:
                own_team, opp_team = team[p % 2], team[1 - p % 2]
            out.append(((total - d[p]) / (P - 1) - d[p], opp_team - own_team))
        return out

    def squash(self, x):
        return 0.99 * math.tanh(self.SCALE * x)


class MobilityEvaluator(_Weighted):
    """Quadamazons: [own queen-move count, mean opponent queen-move count]."""

    family = "mobility"
    base_weights = (1.0, 0.0)
    jitter = (0.1, 0.3)

    def features(self, state):
        g = self.game
        mob = [0 if p in state.elim else len(g.amazon_moves(state.board, p)) for p in range(4)]
        total = sum(mob)
        return [(mob[p], (total - mob[p]) / 3) for p in range(4)]


class FishEvaluator(_Weighted):
    """Hey, That's My Fish!: [fish collected, fish under the penguins, fish reachable in one move]."""

    family = "fish"
    base_weights = (1.0, 1.0, 0.1)
    jitter = (0.1, 0.3, 0.1)

    def features(self, state):
        g = self.game
        P = g.num_players
        tiles, pens = state.tiles, state.pens
        under = [0] * P
        reach = [0] * P
        for i, o in enumerate(pens):
            if o:
                under[o - 1] += tiles[i]
                reach[o - 1] += sum(tiles[j] for j in g._moves_from(tiles, pens, i))
        return [(state.scores[p], under[p], reach[p]) for p in range(P)]


_HEURISTICS = {
    "quadrothello": MaterialEvaluator,
    "triinversion": MaterialEvaluator,
    "three_player_hex": ConnectionEvaluator,
    "threehex": ConnectionEvaluator,
    "separed_teamhex": ConnectionEvaluator,
    "quadamazons": MobilityEvaluator,
    "hey_fish": FishEvaluator,
}


def builtin_heuristic(game: Game, variant: int = 0) -> Evaluator:
    """Handcrafted evaluator for a shipped game; ``variant`` in [0, 30) picks a jittered copy."""
    if game.name in ("trinim", "bandit"):
        return ZeroEvaluator(game, f"{game.name}:zero:{variant}")
    try:
        cls = _HEURISTICS[game.name]
    except KeyError:
        raise UnsupportedGameError(f"no builtin heuristic for {game.name!r}") from None
    return cls(game, variant)


def evaluator_from_id(game: Game, ident: str) -> Evaluator:
    """Resolve ``<game>:<family>:<variant>``."""
    try:
        gname, family, variant = ident.split(":")
        variant = int(variant)
    except ValueError:
        raise ConfigError(f"bad evaluator id {ident!r}; expected <game>:<family>:<variant>") from None
    if gname != game.name:
        raise ConfigError(f"evaluator {ident!r} is for {gname}, not {game.name}")
    if family == "zero":
        return ZeroEvaluator(game, ident)
    ev = builtin_heuristic(game, variant)
    if ev.ident.split(":")[1] != family:
        raise ConfigError(f"unknown evaluator family {family!r} for {game.name}")
    return ev


__all__ = [
    "Evaluator", "BatchedEvaluator", "NormalizationBounds", "NormalizedEvaluator", "InvalidBoundsError",
    "ZeroEvaluator", "ConstantEvaluator", "FunctionEvaluator", "ScaledEvaluator",
    "MaterialEvaluator", "ConnectionEvaluator", "MobilityEvaluator", "FishEvaluator",
    "evaluate", "evaluate_batch", "normalize", "calibrate_bounds", "calibrate_range", "builtin_heuristic",
    "evaluator_from_id", "as_batched", "N_VARIANTS", "INF",
]
