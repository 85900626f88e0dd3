"""Depth-limited searches: max^n, k-best max^n, paranoid, BRS, BRS+ and iterative deepening.

All of them count plies (BRS and BRS+ count layers: a root-player move or
one opponent reply). Leaves at depth 0 are scored with the evaluator, the
children of a depth-1 node in one batch. Every generated child is charged
to the clock so node budgets stay deterministic.
"""

from __future__ import annotations

import math

from ..core import Game, TerminalStateError
from ..eval import as_batched
from .common import BudgetExceeded, SearchBudget, SearchResult, argmax

INF = math.inf
EXACT, LOWER, UPPER = 0, 1, 2


class _Searcher:
    """Shared plumbing: evaluator, clock, memo tables and the completeness flag."""

    def __init__(self, game: Game, evaluator, clock=None):
        self.game = game
        self.ev = as_batched(evaluator)
        self.clock = clock
        self.memo: dict = {}
        # set when some depth-0 leaf was not terminal, i.e. a deeper search could differ
        self.cut = False

    def expand(self, state):
        g = self.game
        actions = g.legal_actions(state)
        nxt = g._next
        children = [nxt(state, a) for a in actions]
        if self.clock is not None:
            self.clock.charge(len(children))
        return actions, children

    def leaf_values(self, children):
        """Payoff vectors of ``children``: f_t at terminals, one evaluator batch for the rest."""
        g = self.game
        out = [None] * len(children)
        pending = []
        for i, ch in enumerate(children):
            if g.is_terminal(ch):
                out[i] = g.terminal_payoff(ch)
            else:
                pending.append(i)
        if pending:
            self.cut = True
            for i, v in zip(pending, self.ev.evaluate_batch([children[i] for i in pending])):
                out[i] = v
        return out

    def static_values(self, children):
        """Like ``leaf_values`` but for move ordering: does not mark the search as cut."""
        saved = self.cut
        out = self.leaf_values(children)
        self.cut = saved
        return out

    def leaf(self, state):
        g = self.game
        if g.is_terminal(state):
            return g.terminal_payoff(state)
        self.cut = True
        return self.ev.values(state)


# -- max^n and k-best max^n --------------------------------------------------


class _Maxn(_Searcher):
    def __init__(self, game, evaluator, clock=None, k=None):
        super().__init__(game, evaluator, clock)
        self.k = k

    def search(self, s, depth):
        """Return (value vector, action index or None)."""
        g = self.game
        if g.is_terminal(s):
            return g.terminal_payoff(s), None
        if depth == 0:
            self.cut = True
            return self.ev.values(s), None
        key = (g.zobrist_key(s), depth)
        hit = self.memo.get(key)
        if hit is not None:
            value, idx, cut = hit
            self.cut |= cut
            return value, idx
        saved, self.cut = self.cut, False
        p = s.mover
        actions, children = self.expand(s)
        if depth == 1:
            values = self.leaf_values(children)
            idxs = range(len(children))
        else:
            idxs = self.ordered(children, p)
            values = [None] * len(children)
            for i in idxs:
                values[i] = self.search(children[i], depth - 1)[0]
        j = idxs[argmax(values[i][p] for i in idxs)]
        self.memo[key] = (values[j], j, self.cut)
        self.cut |= saved
        return values[j], j

    def ordered(self, children, p):
        """Children kept for search, in ordinal order (all of them unless k-best prunes)."""
        n = len(children)
        if self.k is None or self.k >= n:
            return range(n)
        static = self.static_values(children)
        # stable sort: equal static values keep ordinal order
        keep = sorted(range(n), key=lambda i: -static[i][p])[: self.k]
        return sorted(keep)


def maxn_depth(game: Game, state, evaluator, depth: int, clock=None, table=None):
    """Depth-limited max^n. Returns (value vector, action); the action is None at leaves."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    s = _Maxn(game, evaluator, clock)
    if table is not None:
        s.memo = table
    value, idx = s.search(state, depth)
    return value, (None if idx is None else game.legal_actions(state)[idx])


def kbest_maxn(game: Game, state, evaluator, depth: int, k: int, clock=None, table=None):
    """Max^n that searches only the ``k`` statically best children of every interior node."""
    if k <= 0:
        raise ValueError("k must be >= 1")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    s = _Maxn(game, evaluator, clock, k=k)
    if table is not None:
        s.memo = table
    value, idx = s.search(state, depth)
    return value, (None if idx is None else game.legal_actions(state)[idx])


# -- paranoid ----------------------------------------------------------------


class _AlphaBeta(_Searcher):
    """Scalar searches on the root player's component with a bound-flagged table."""

    def __init__(self, game, evaluator, root_player, clock=None, prune=True):
        super().__init__(game, evaluator, clock)
        self.root = root_player
        self.prune = prune

    def probe(self, key, alpha, beta):
        if not self.prune:
            return None
        hit = self.memo.get(key)
        if hit is None:
            return None
        value, flag, cut = hit
        if flag == EXACT or (flag == LOWER and value >= beta) or (flag == UPPER and value <= alpha):
            self.cut |= cut
            return value
        return None

    def save(self, key, value, alpha0, beta, cut):
        if not self.prune:
            return
        flag = UPPER if value <= alpha0 else LOWER if value >= beta else EXACT
        self.memo[key] = (value, flag, cut)

    def scalar_leaf(self, state):
        return self.leaf(state)[self.root]

    def layer(self, items, maximize, alpha, beta, value_of):
        """Fail-soft max or min over ``items``; returns (value, index of the first best)."""
        best, best_i = (-INF if maximize else INF), None
        for i, item in enumerate(items):
            v = value_of(item, alpha, beta)
            if maximize:
                if best_i is None or v > best:
                    best, best_i = v, i
                if self.prune:
                    alpha = max(alpha, v)
            else:
                if best_i is None or v < best:
                    best, best_i = v, i
                if self.prune:
                    beta = min(beta, v)
            if self.prune and alpha >= beta:
                break
        return best, best_i


class _Paranoid(_AlphaBeta):
    def search(self, s, depth, alpha, beta):
        g = self.game
        if g.is_terminal(s):
            return g.terminal_payoff(s)[self.root], None
        if depth == 0:
            self.cut = True
            return self.ev.values(s)[self.root], None
        key = (g.zobrist_key(s), depth)
        got = self.probe(key, alpha, beta)
        if got is not None:
            return got, None
        saved, self.cut = self.cut, False
        maximize = s.mover == self.root
        actions, children = self.expand(s)
        if depth == 1:
            vals = [v[self.root] for v in self.leaf_values(children)]
            value, idx = self.layer(vals, maximize, alpha, beta, lambda v, a, b: v)
        else:
            value, idx = self.layer(children, maximize, alpha, beta,
                                    lambda ch, a, b: self.search(ch, depth - 1, a, b)[0])
        self.save(key, value, alpha, beta, self.cut)
        self.cut |= saved
        return value, idx


def paranoid(game: Game, state, evaluator, depth: int, root_player: int | None = None,
             clock=None, prune: bool = True, table=None):
    """Paranoid search: the root player maximizes its component, everyone else minimizes it.

    ``prune=False`` gives the plain minimax reference. Returns (value, action).
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    root = state.mover if root_player is None else root_player
    s = _Paranoid(game, evaluator, root, clock, prune)
    if table is not None:
        s.memo = table
    value, idx = s.search(state, depth, -INF, INF)
    return value, (None if idx is None else game.legal_actions(state)[idx])


# -- best-reply search -------------------------------------------------------


class _BRS(_AlphaBeta):
    """Root-player layers alternate with one opponent reply chosen among all opponents.

    Opponent replies are applied out of turn; afterwards the root player is
    made the mover again.
    """

    def replies(self, s):
        g = self.game
        out = []
        for q in range(g.num_players):
            if q != self.root:
                out.extend((q, a) for a in g.out_of_turn_actions(s, q))
        return out

    def search(self, s, depth, alpha, beta, root_turn=True):
        g = self.game
        if g.is_terminal(s):
            return g.terminal_payoff(s)[self.root], None
        if depth == 0:
            self.cut = True
            return self.ev.values(s)[self.root], None
        key = (g.zobrist_key(s), depth, root_turn)
        got = self.probe(key, alpha, beta)
        if got is not None:
            return got, None
        saved, self.cut = self.cut, False
        if root_turn:
            actions = g.legal_actions(s)
            if not actions:
                # the root player cannot move in this artificial state: hand over
                value, idx = self.search(s, depth - 1, alpha, beta, False)
                idx = None
            else:
                _, children = self.expand(s)
                value, idx = self.layer(children, True, alpha, beta,
                                        lambda ch, a, b: self.search(ch, depth - 1, a, b, False)[0])
        else:
            pairs = self.replies(s)
            if not pairs:
                value, _ = self.search(g.with_mover(s, self.root), depth - 1, alpha, beta, True)
                idx = None
            else:
                def reply_value(pair, a, b):
                    q, act = pair
                    ch = g.apply_out_of_turn(s, q, act)
                    if self.clock is not None:
                        self.clock.charge(1)
                    if not g.is_terminal(ch):
                        ch = g.with_mover(ch, self.root)
                    return self.search(ch, depth - 1, a, b, True)[0]

                value, idx = self.layer(pairs, False, alpha, beta, reply_value)
        self.save(key, value, alpha, beta, self.cut)
        self.cut |= saved
        return value, idx


def brs(game: Game, state, evaluator, depth: int, root_player: int | None = None,
        clock=None, prune: bool = True, table=None):
    """Best-Reply Search. Needs a game with out-of-turn moves. Returns (value, action)."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    root = state.mover if root_player is None else root_player
    game.out_of_turn_actions(state, (root + 1) % game.num_players)  # capability check
    s = _BRS(game, evaluator, root, clock, prune)
    if table is not None:
        s.memo = table
    value, idx = s.search(state, depth, -INF, INF, True)
    return value, (None if idx is None else game.legal_actions(state)[idx])


class _BRSPlus(_AlphaBeta):
    """Like BRS, but replies keep the real turn order.

    Between two root turns one opponent is searched over all its moves; the
    other opponents play their greedy move (best own component one ply ahead).
    """

    def greedy(self, s):
        actions, children = self.expand(s)
        vals = self.static_values(children)
        p = s.mover
        return children[argmax(v[p] for v in vals)]

    def search(self, s, depth, alpha, beta):
        """Root-player layer; ``s.mover`` is the root player."""
        g = self.game
        if g.is_terminal(s):
            return g.terminal_payoff(s)[self.root], None
        if depth == 0:
            self.cut = True
            return self.ev.values(s)[self.root], None
        key = (g.zobrist_key(s), depth)
        got = self.probe(key, alpha, beta)
        if got is not None:
            return got, None
        saved, self.cut = self.cut, False
        _, children = self.expand(s)
        if depth == 1:
            vals = [v[self.root] for v in self.leaf_values(children)]
            value, idx = self.layer(vals, True, alpha, beta, lambda v, a, b: v)
        else:
            value, idx = self.layer(children, True, alpha, beta,
                                    lambda ch, a, b: self.opponents(ch, depth - 1, a, b))
        self.save(key, value, alpha, beta, self.cut)
        self.cut |= saved
        return value, idx

    def opponents(self, s, depth, alpha, beta):
        """Min over the choice of searched opponent, then over that opponent's moves."""
        g = self.game
        if g.is_terminal(s) or s.mover == self.root:
            return self.after_segment(s, depth, alpha, beta)
        # opponents in turn order from the current mover
        order = []
        for k in range(g.num_players):
            q = (s.mover + k) % g.num_players
            if q != self.root:
                order.append(q)
        value, _ = self.layer(order, False, alpha, beta, lambda j, a, b: self.segment(s, j, depth, a, b))
        return value

    def segment(self, s, j, depth, alpha, beta):
        """Play out the opponents' turns with ``j`` searched and the others greedy."""
        g = self.game
        while not g.is_terminal(s) and s.mover != self.root and s.mover != j:
            s = self.greedy(s)
        if g.is_terminal(s) or s.mover == self.root:
            return self.after_segment(s, depth, alpha, beta)
        _, children = self.expand(s)
        value, _ = self.layer(children, False, alpha, beta,
                              lambda ch, a, b: self.segment(ch, j, depth, a, b))
        return value

    def after_segment(self, s, depth, alpha, beta):
        # the opponent layer consumed one unit of depth
        if self.game.is_terminal(s):
            return self.game.terminal_payoff(s)[self.root]
        return self.search(s, depth - 1, alpha, beta)[0]


def brs_plus(game: Game, state, evaluator, depth: int, root_player: int | None = None,
             clock=None, prune: bool = True, table=None):
    """BRS+: best-reply search that only visits turn-legal states. Returns (value, action)."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    root = state.mover if root_player is None else root_player
    if state.mover != root:
        raise ValueError("brs_plus must be called on a state where the root player is to move")
    s = _BRSPlus(game, evaluator, root, clock, prune)
    if table is not None:
        s.memo = table
    value, idx = s.search(state, depth, -INF, INF)
    return value, (None if idx is None else game.legal_actions(state)[idx])


# -- iterative deepening -----------------------------------------------------

DEPTH_ALGORITHMS = {
    "maxn": maxn_depth,
    "kbest": kbest_maxn,
    "paranoid": paranoid,
    "brs": brs,
    "brs+": brs_plus,
}

_SEARCHERS = {
    "maxn": lambda g, e, c, p: _Maxn(g, e, c),
    "kbest": lambda g, e, c, p: _Maxn(g, e, c, k=p["k"]),
    "paranoid": lambda g, e, c, p: _Paranoid(g, e, p["root"], c),
    "brs": lambda g, e, c, p: _BRS(g, e, p["root"], c),
    "brs+": lambda g, e, c, p: _BRSPlus(g, e, p["root"], c),
}


def _run_depth(name, searcher, state, depth):
    if name in ("maxn", "kbest"):
        return searcher.search(state, depth)
    if name == "brs":
        return searcher.search(state, depth, -INF, INF, True)
    return searcher.search(state, depth, -INF, INF)


def iterative_deepening(game: Game, algorithm: str, state, evaluator, budget: SearchBudget,
                        max_depth: int | None = None, trace=None, **params) -> SearchResult:
    """Search depths 1, 2, ... until the budget runs out; keep the deepest completed result.

    Depth 1 always completes (it runs without budget checks). The loop also
    stops once a depth reaches no non-terminal leaf, since deeper searches
    would return the same answer.
    """
    if algorithm not in _SEARCHERS:
        raise ValueError(f"unknown depth-limited algorithm {algorithm!r}")
    if game.is_terminal(state):
        raise TerminalStateError("search root is terminal")
    if algorithm == "kbest" and params.get("k", 0) <= 0:
        raise ValueError("kbest needs k >= 1")
    params.setdefault("root", state.mover)
    if algorithm == "brs":
        game.out_of_turn_actions(state, (state.mover + 1) % game.num_players)
    clock = budget.start()
    searcher = _SEARCHERS[algorithm](game, evaluator, clock, params)
    actions = game.legal_actions(state)
    best = None
    depth = 0
    while max_depth is None or depth < max_depth:
        depth += 1
        clock.armed = depth > 1
        searcher.cut = False
        try:
            value, idx = _run_depth(algorithm, searcher, state, depth)
        except BudgetExceeded:
            break
        best = (depth, value, actions[idx] if idx is not None else actions[0])
        if trace is not None:
            trace(f"depth={depth} nodes={clock.used} action={game.format_action(best[2])}")
        if not searcher.cut or clock.exhausted():
            break
    d, value, action = best
    return SearchResult(chosen=action, nodes=clock.used, depth=d, value=value,
                        resolved_root=not searcher.cut and d == depth)
