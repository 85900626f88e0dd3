"""Multiplayer UCT: plain (random playouts) and heuristic (one evaluator call instead of a playout)."""

from __future__ import annotations

import math
import random

from ..core import GameError, TerminalStateError
from .common import RootStat, SearchBudget, SearchResult, argmax


class ContractViolation(GameError):
    """An evaluator broke its output contract (values must lie in [0, 1])."""


class Node:
    __slots__ = ("state", "mover", "actions", "children", "visits", "total")

    def __init__(self, game, state):
        self.state = state
        terminal = game.is_terminal(state)
        self.mover = None if terminal else state.mover
        self.actions = [] if terminal else game.legal_actions(state)
        self.children = [None] * len(self.actions)
        self.visits = 0
        self.total = [0.0] * game.num_players

    def mean(self, p):
        return self.total[p] / self.visits if self.visits else 0.0


def _terminal_reward(game, state):
    return [(x + 1.0) / 2.0 for x in game.win_loss_vector(state)]


def _uct_child(node, c):
    p = node.mover
    log_n = math.log(node.visits)
    return argmax(ch.total[p] / ch.visits + c * math.sqrt(log_n / ch.visits) for ch in node.children)


def _search(game, root, budget, c, simulate):
    if game.is_terminal(root):
        raise TerminalStateError("search root is terminal")
    if c < 0:
        raise ValueError("exploration constant must be >= 0")
    clock = budget.start()
    tree = Node(game, root)
    iterations = 0
    while True:
        node, path = tree, [tree]
        # selection and expansion: the first unvisited child, in ordinal order, is added
        while node.mover is not None:
            i = next((k for k, ch in enumerate(node.children) if ch is None), None)
            if i is not None:
                child = Node(game, game._next(node.state, node.actions[i]))
                node.children[i] = child
                path.append(child)
                node = child
                break
            node = node.children[_uct_child(node, c)]
            path.append(node)
        if node.mover is None:
            reward = _terminal_reward(game, node.state)
        else:
            reward = simulate(node.state)
        for n in path:
            n.visits += 1
            t = n.total
            for p, x in enumerate(reward):
                t[p] += x
        iterations += 1
        clock.used += 1
        if clock.exhausted():
            break
    p = tree.mover
    visits = [ch.visits if ch is not None else 0 for ch in tree.children]
    best = argmax(visits)
    stats = [
        RootStat(a, None, tuple(ch.total[q] / ch.visits for q in range(game.num_players)) if ch and ch.visits else None,
                 visits[i], False)
        for i, (a, ch) in enumerate(zip(tree.actions, tree.children))
    ]
    chosen_child = tree.children[best]
    return SearchResult(
        chosen=tree.actions[best],
        root_entries=stats,
        expansions=iterations,
        nodes=clock.used,
        iterations=iterations,
        value=tuple(chosen_child.mean(q) for q in range(game.num_players)) if chosen_child else None,
    ), p


def mcts(game, root, budget: SearchBudget, C: float = math.sqrt(2), seed: int = 0) -> SearchResult:
    """UCT with uniform random playouts; rewards are win/loss outcomes mapped to [0, 1]."""
    rng = random.Random(seed)

    def playout(state):
        while not game.is_terminal(state):
            actions = game.legal_actions(state)
            state = game._next(state, actions[rng.randrange(len(actions))])
        return _terminal_reward(game, state)

    return _search(game, root, budget, C, playout)[0]


def mcts_h(game, root, evaluator, budget: SearchBudget, C: float = math.sqrt(2), seed: int = 0) -> SearchResult:
    """UCT where the playout is replaced by one call to a [0, 1]-valued evaluator."""

    def heuristic(state):
        v = evaluator(state)
        if len(v) != game.num_players or any(not (0.0 <= x <= 1.0) for x in v):
            raise ContractViolation(f"evaluator {getattr(evaluator, 'ident', evaluator)!r} returned {tuple(v)} "
                                    f"outside [0, 1] on state {state!r}")
        return list(v)

    return _search(game, root, budget, C, heuristic)[0]
