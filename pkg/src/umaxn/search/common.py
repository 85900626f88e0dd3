"""Budgets, results, transposition storage and the one tie-break rule every search shares."""

from __future__ import annotations

import time
from collections import OrderedDict
from dataclasses import dataclass, field


class BudgetExceeded(Exception):
    """Raised inside depth-limited searches to abandon the current iteration."""


@dataclass(frozen=True)
class SearchBudget:
    """Either a node budget (deterministic) or a wall-clock budget in seconds.

    Nodes are generated states: an expansion of a state with b actions costs
    b; one MCTS iteration costs 1.
    """

    nodes: int | None = None
    seconds: float | None = None

    def __post_init__(self):
        if (self.nodes is None) == (self.seconds is None):
            raise ValueError("give exactly one of nodes= or seconds=")
        if (self.nodes is not None and self.nodes <= 0) or (self.seconds is not None and self.seconds <= 0):
            raise ValueError("budget must be positive")

    def start(self) -> "Clock":
        return Clock(self)

    @classmethod
    def unlimited(cls) -> "SearchBudget":
        return cls(nodes=10**15)


class Clock:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.used = 0
        self.t0 = time.perf_counter()
        self.armed = True

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.t0

    def exhausted(self) -> bool:
        b = self.budget
        if b.nodes is not None:
            return self.used >= b.nodes
        return self.elapsed >= b.seconds

    def charge(self, k: int) -> None:
        """Count ``k`` generated nodes; raise ``BudgetExceeded`` when armed and over budget."""
        self.used += k
        if not self.armed:
            return
        b = self.budget
        if b.nodes is not None:
            if self.used > b.nodes:
                raise BudgetExceeded
        elif self.elapsed > b.seconds:
            raise BudgetExceeded


@dataclass(frozen=True)
class RootStat:
    action: object
    c: tuple
    v: tuple
    n: int
    r: bool


@dataclass
class SearchResult:
    chosen: object
    root_entries: list = field(default_factory=list)
    expansions: int = 0
    resolved_root: bool = False
    nodes: int = 0
    depth: int = 0
    value: object = None
    iterations: int = 0


# -- tie-breaking ----------------------------------------------------------


def argmax(keys) -> int:
    """Index of the largest key; the lowest index wins ties (ordinal tie-break)."""
    best_i, best_k = -1, None
    for i, k in enumerate(keys):
        if best_i < 0 or k > best_k:
            best_i, best_k = i, k
    return best_i


def argmin(keys) -> int:
    best_i, best_k = -1, None
    for i, k in enumerate(keys):
        if best_i < 0 or k < best_k:
            best_i, best_k = i, k
    return best_i


def completion_tier(c_p: float, r: bool) -> float:
    """Rank of a completion value at decision time.

    A resolved win outranks everything and a resolved loss ranks below
    everything; otherwise the completion component itself is the rank.
    """
    if r:
        if c_p >= 1:
            return 2.0
        if c_p <= -1:
            return -2.0
    return c_p


def best_key(c, v, r, p):
    return (completion_tier(c[p], r), v[p])


def safe_key(c, v, n, r, p):
    return (completion_tier(c[p], r), n, v[p])


def select_key(c, v, p):
    return (c[p], v[p])


def value_key(v, p):
    return v[p]


# -- transposition storage ---------------------------------------------------


class TranspositionTable:
    """Zobrist key -> entry map with an optional capacity (oldest unpinned entry evicted first)."""

    def __init__(self, capacity: int | None = None):
        self.capacity = capacity
        self._d: OrderedDict = OrderedDict()
        self.pinned: set = set()
        self.evictions = 0

    def get(self, key):
        return self._d.get(key)

    def __contains__(self, key):
        return key in self._d

    def __len__(self):
        return len(self._d)

    def __getitem__(self, key):
        return self._d[key]

    def items(self):
        return self._d.items()

    def store(self, key, entry):
        d = self._d
        if self.capacity is not None and key not in d:
            while len(d) >= self.capacity:
                victim = next((k for k in d if k not in self.pinned), None)
                if victim is None:
                    break
                del d[victim]
                self.evictions += 1
        d[key] = entry
