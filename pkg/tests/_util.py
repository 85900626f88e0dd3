"""Shared test helpers: a synthetic game with arbitrary payoffs, random positions, naive references."""

from __future__ import annotations

import math
import random

from umaxn.core import Game, State
from umaxn.eval import FunctionEvaluator, as_batched
from umaxn.games import DESK_CONFIGS, make_game
from umaxn.search import TranspositionTable, um_backup, um_descend, um_expand

# PASS/FAIL lines of the acceptance suite, printed in the terminal summary
ACCEPTANCE_LINES: list = []


class SeqState(State):
    __slots__ = ("hist", "mover")

    def __init__(self, hist, mover):
        self.hist = hist
        self.mover = mover

    def _ident(self):
        return (self.hist, self.mover)

    def __repr__(self):
        return f"SeqState({self.hist}, mover={self.mover})"


class SeqGame(Game):
    """Players pick 0..b-1 in turn for ``length`` plies; payoffs are seeded pseudo-random.

    ``levels`` is the number of distinct score values, so ties are common.
    ``scale`` multiplies every terminal score.
    Supports out-of-turn moves (a pick appended for any player).
    """

    name = "seq"
    supports_out_of_turn = True

    def __init__(self, players=3, branching=3, length=4, seed=0, levels=3, scale=1.0):
        self.num_players = players
        self.scale = scale
        self.b = branching
        self.length = length
        self.seed = seed
        self.levels = levels
        self.config = {"players": players, "branching": branching, "length": length, "seed": seed}
        self._zob = {}

    def initial_state(self):
        return SeqState((), 0)

    def _legal(self, s):
        return list(range(self.b))

    def _next(self, s, a):
        return SeqState(s.hist + ((s.mover, a),), (s.mover + 1) % self.num_players)

    def _terminal(self, s):
        return len(s.hist) >= self.length

    def _scores(self, s):
        rng = random.Random(f"{self.seed}:t:{s.hist}")
        return tuple(self.scale * rng.randrange(self.levels) for _ in range(self.num_players))

    def _zobrist(self, s):
        k = (s.hist, s.mover)
        z = self._zob.get(k)
        if z is None:
            z = random.Random(f"{self.seed}:z:{k}").getrandbits(64)
            self._zob[k] = z
        return z

    def out_of_turn_actions(self, s, player):
        return [] if self._terminal(s) else list(range(self.b))

    def apply_out_of_turn(self, s, player, action):
        return SeqState(s.hist + ((player, action),), s.mover)

    def with_mover(self, s, player):
        return SeqState(s.hist, player)

    def serialize(self, s):
        return repr((s.hist, s.mover))


def seq_evaluator(game, salt="h"):
    def f(s):
        rng = random.Random(f"{game.seed}:{salt}:{s.hist}:{s.mover}")
        return tuple(round(rng.uniform(-1, 1), 3) for _ in range(game.num_players))

    return FunctionEvaluator(game, f, ident=f"seq:{salt}:0")


def desk_game(name):
    return make_game(name, DESK_CONFIGS[name])


def random_position(game, rng, max_plies=None, allow_terminal=False):
    """Random playout prefix; returns a non-terminal state unless the game is over immediately."""
    s = game.initial_state()
    plies = rng.randrange(0, (max_plies or 60) + 1)
    for _ in range(plies):
        if game.is_terminal(s):
            break
        acts = game.legal_actions(s)
        nxt = game.apply(s, rng.choice(acts))
        if game.is_terminal(nxt) and not allow_terminal:
            break
        s = nxt
    return s


def step_search(game, root, evaluator, iterations):
    """Drive unbounded max^n one iteration at a time; yields (table, path) after each backup."""
    table = TranspositionTable()
    batched = as_batched(evaluator)
    zob = game.zobrist_key
    for _ in range(iterations):
        path, frontier = um_descend(game, table, root)
        if not path and zob(root) in table:
            return
        if not game.is_terminal(frontier) and zob(frontier) not in table:
            um_expand(game, table, frontier, batched)
        um_backup(game, table, path)
        yield table, path


def playout(game, rng, state=None):
    s = state or game.initial_state()
    trail = [s]
    while not game.is_terminal(s):
        s = game.apply(s, rng.choice(game.legal_actions(s)))
        trail.append(s)
    return trail


# -- naive references (no pruning, no tables) ---------------------------------


def leafval(game, ev, s, root):
    return game.terminal_payoff(s)[root] if game.is_terminal(s) else ev.values(s)[root]


def naive_paranoid(game, ev, s, depth, root):
    if game.is_terminal(s) or depth == 0:
        return leafval(game, ev, s, root), None
    acts = game.legal_actions(s)
    vals = [naive_paranoid(game, ev, game.apply(s, a), depth - 1, root)[0] for a in acts]
    pick = max(vals) if s.mover == root else min(vals)
    i = vals.index(pick)
    return pick, acts[i]


def naive_brs(game, ev, s, depth, root, root_turn=True):
    if game.is_terminal(s) or depth == 0:
        return leafval(game, ev, s, root), None
    if root_turn:
        acts = game.legal_actions(s)
        if not acts:
            return naive_brs(game, ev, s, depth - 1, root, False)[0], None
        vals = [naive_brs(game, ev, game.apply(s, a, check=False), depth - 1, root, False)[0] for a in acts]
        best = max(vals)
        return best, acts[vals.index(best)]
    vals = []
    for q in range(game.num_players):
        if q == root:
            continue
        for a in game.out_of_turn_actions(s, q):
            ch = game.apply_out_of_turn(s, q, a)
            if not game.is_terminal(ch):
                ch = game.with_mover(ch, root)
            vals.append(naive_brs(game, ev, ch, depth - 1, root, True)[0])
    if not vals:
        return naive_brs(game, ev, game.with_mover(s, root), depth - 1, root, True)[0], None
    return min(vals), None


def _greedy(game, ev, s):
    p = s.mover
    best, best_v = None, -math.inf
    for a in game.legal_actions(s):
        ch = game.apply(s, a, check=False)
        v = game.terminal_payoff(ch)[p] if game.is_terminal(ch) else ev.values(ch)[p]
        if v > best_v:
            best, best_v = ch, v
    return best


def naive_brs_plus(game, ev, s, depth, root):
    """Root layer; mover is root."""
    if game.is_terminal(s) or depth == 0:
        return leafval(game, ev, s, root), None
    acts = game.legal_actions(s)
    vals = []
    for a in acts:
        ch = game.apply(s, a, check=False)
        if depth == 1:
            vals.append(leafval(game, ev, ch, root))
        else:
            vals.append(_naive_segment_min(game, ev, ch, depth - 1, root))
    best = max(vals)
    return best, acts[vals.index(best)]


def _naive_segment_min(game, ev, s, depth, root):
    if game.is_terminal(s) or s.mover == root:
        return _after(game, ev, s, depth, root)
    opps = [q for q in range(game.num_players) if q != root]
    return min(_naive_segment(game, ev, s, j, depth, root) for j in opps)


def _naive_segment(game, ev, s, j, depth, root):
    while not game.is_terminal(s) and s.mover not in (root, j):
        s = _greedy(game, ev, s)
    if game.is_terminal(s) or s.mover == root:
        return _after(game, ev, s, depth, root)
    return min(_naive_segment(game, ev, game.apply(s, a, check=False), j, depth, root)
               for a in game.legal_actions(s))


def _after(game, ev, s, depth, root):
    if game.is_terminal(s):
        return game.terminal_payoff(s)[root]
    return naive_brs_plus(game, ev, s, depth - 1, root)[0]
