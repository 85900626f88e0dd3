"""Unbounded (best-first) Max^n with completion, classic and safe decision.

Each iteration descends from the root along the best unresolved actions,
expands the first state not yet in the table (all children evaluated in one
batch), then backs the new values up the descent path. Per (state, action)
the table holds the completion vector c, the partial max^n vector v, the
selection count n and the resolution flag r.
"""

from __future__ import annotations

from typing import NamedTuple

from ..core import Game, TerminalStateError
from ..eval import as_batched
from .common import (
    RootStat,
    SearchBudget,
    SearchResult,
    TranspositionTable,
    argmax,
    best_key,
    safe_key,
)


class Entry:
    """Per-action statistics of one stored state."""

    __slots__ = ("mover", "actions", "children", "c", "v", "n", "r")

    def __init__(self, mover, actions, children, c, v, n, r):
        self.mover = mover
        self.actions = actions
        self.children = children
        self.c = c
        self.v = v
        self.n = n
        self.r = r

    def select(self):
        """Best unresolved action index by (c_p, v_p), or None when every action is resolved."""
        p = self.mover
        best_i, best_k = None, None
        c, v, r = self.c, self.v, self.r
        for i in range(len(r)):
            if r[i]:
                continue
            k = (c[i][p], v[i][p])
            if best_i is None or k > best_k:
                best_i, best_k = i, k
        return best_i

    def best(self) -> int:
        p = self.mover
        return argmax(best_key(self.c[i], self.v[i], self.r[i], p) for i in range(len(self.r)))

    def safest(self) -> int:
        p = self.mover
        return argmax(safe_key(self.c[i], self.v[i], self.n[i], self.r[i], p) for i in range(len(self.r)))

    def resolved(self) -> bool:
        return all(self.r)

    def stats(self) -> list:
        return [RootStat(a, self.c[i], self.v[i], self.n[i], self.r[i]) for i, a in enumerate(self.actions)]


class PathStep(NamedTuple):
    state: object
    action: object
    index: int


def um_expand(game: Game, table: TranspositionTable, state, evaluator, clock=None) -> Entry:
    """Create the table entry of ``state``; reuses an existing entry on a transposition hit."""
    key = game.zobrist_key(state)
    hit = table.get(key)
    if hit is not None:
        return hit
    if game.is_terminal(state):
        raise TerminalStateError("um_expand called on a terminal state")
    actions = game.legal_actions(state)
    nxt = game._next
    children = [nxt(state, a) for a in actions]
    if clock is not None:
        clock.used += len(children)
    P = game.num_players
    zero = (0.0,) * P
    c, v, r = [], [], []
    pending = []
    is_terminal = game.is_terminal
    for i, ch in enumerate(children):
        if is_terminal(ch):
            c.append(game.win_loss_vector(ch))
            v.append(game.terminal_payoff(ch))
            r.append(True)
        else:
            c.append(zero)
            v.append(None)
            r.append(False)
            pending.append(i)
    if pending:
        values = evaluator.evaluate_batch([children[i] for i in pending])
        for i, val in zip(pending, values):
            v[i] = val
    entry = Entry(state.mover, actions, children, c, v, [0] * len(actions), r)
    table.store(key, entry)
    return entry


def um_descend(game: Game, table: TranspositionTable, root) -> tuple[list, object]:
    """Follow best unresolved actions from ``root``.

    Returns (path, frontier): path is a list of PathStep, frontier the state
    where descent stopped (not stored, terminal, or fully resolved).
    """
    path = []
    s = root
    zob = game.zobrist_key
    while True:
        e = table.get(zob(s))
        if e is None or game.is_terminal(s):
            return path, s
        i = e.select()
        if i is None:
            return path, s
        path.append(PathStep(s, e.actions[i], i))
        s = e.children[i]


def um_backup(game: Game, table: TranspositionTable, path) -> None:
    """Propagate child values up ``path`` (deepest first) and update counts and resolution flags."""
    zob = game.zobrist_key
    for s, _a, i in reversed(path):
        e = table.get(zob(s))
        if e is None:
            continue
        child = e.children[i]
        ce = table.get(zob(child))
        if ce is None:
            # child evicted from a bounded table: keep the old values, count the visit
            e.n[i] += 1
            continue
        if e.r[i]:
            raise AssertionError("descent selected a resolved action")
        j = ce.best()
        p = ce.mover
        e.v[i] = ce.v[j]
        e.c[i] = ce.c[j]
        e.n[i] += 1
        e.r[i] = (ce.r[j] and ce.c[j][p] >= 1) or ce.resolved()


def best_action(entries, mover):
    """Argmax of (completion rank, v_p) over RootStat-like records."""
    i = argmax(best_key(e.c, e.v, e.r, mover) for e in entries)
    return entries[i].action


def safe_action(entries, mover):
    """Argmax of (completion rank, n, v_p): the most selected action unless completion decides."""
    i = argmax(safe_key(e.c, e.v, e.n, e.r, mover) for e in entries)
    return entries[i].action


def unbounded_maxn(game: Game, root, evaluator, budget: SearchBudget, decision: str = "best",
                   table: TranspositionTable | None = None, trace=None) -> SearchResult:
    """Run iterations until the budget is spent or every root action is resolved.

    ``decision`` is "best" (classic) or "safe". ``trace`` (callable taking a
    string) receives one line per iteration.
    """
    if decision not in ("best", "safe"):
        raise ValueError(f"decision must be 'best' or 'safe', not {decision!r}")
    if game.is_terminal(root):
        raise TerminalStateError("search root is terminal")
    batched = as_batched(evaluator)
    table = table if table is not None else TranspositionTable()
    root_key = game.zobrist_key(root)
    table.pinned.add(root_key)
    clock = budget.start()
    expansions = iterations = 0
    while True:
        path, frontier = um_descend(game, table, root)
        if not path and root_key in table:
            break  # every root action is resolved
        before = None
        if trace is not None and root_key in table:
            re = table[root_key]
            before = list(zip(re.n, re.r))
        if not game.is_terminal(frontier) and game.zobrist_key(frontier) not in table:
            um_expand(game, table, frontier, batched, clock)
            expansions += 1
        um_backup(game, table, path)
        iterations += 1
        if trace is not None:
            re = table[root_key]
            deltas = [i for i, nr in enumerate(zip(re.n, re.r)) if before is None or nr != before[i]]
            trace(f"iter={iterations} depth={len(path)} key={game.zobrist_key(frontier):016x} root_changed={deltas}")
        if table[root_key].resolved() or clock.exhausted():
            break
    entry = table[root_key]
    stats = entry.stats()
    chosen = entry.actions[entry.safest() if decision == "safe" else entry.best()]
    return SearchResult(
        chosen=chosen,
        root_entries=stats,
        expansions=expansions,
        resolved_root=entry.resolved(),
        nodes=clock.used,
        iterations=iterations,
        value=entry.v[entry.best()],
    )
