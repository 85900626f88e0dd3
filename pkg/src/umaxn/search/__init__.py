"""Search algorithms and the string identifiers used to pick them."""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass

from ..core import ConfigError
from .common import (
    BudgetExceeded,
    Clock,
    RootStat,
    SearchBudget,
    SearchResult,
    TranspositionTable,
    argmax,
    argmin,
    best_key,
    completion_tier,
    safe_key,
)
from .depth import brs, brs_plus, iterative_deepening, kbest_maxn, maxn_depth, paranoid
from .mcts import ContractViolation, mcts, mcts_h
from .unbounded import (
    Entry,
    best_action,
    safe_action,
    um_backup,
    um_descend,
    um_expand,
    unbounded_maxn,
)


@dataclass(frozen=True)
class AlgorithmId:
    family: str
    param: float | int | None = None

    def __str__(self):
        if self.family in ("kbest", "mcts", "mctsh"):
            return f"{self.family}:{self.param:g}"
        return self.family

    @property
    def needs_evaluator(self) -> bool:
        return self.family not in ("mcts", "random")


_PLAIN = {"umaxn", "umaxn-safe", "maxn", "paranoid", "brs", "brs+", "random"}
_C_RE = re.compile(r"^(?:(?P<num>[0-9.eE+-]+)|(?P<sqrt>sqrt2|√2)(?:/(?P<div>[0-9.]+))?)$")


def parse_exploration(text: str) -> float:
    """``1.41``, ``sqrt2`` or ``sqrt2/4`` (``√2/4`` also accepted)."""
    m = _C_RE.match(text.strip())
    if not m:
        raise ConfigError(f"bad exploration constant {text!r}")
    if m.group("num") is not None:
        c = float(m.group("num"))
    else:
        c = math.sqrt(2) / float(m.group("div") or 1)
    if not c >= 0:
        raise ConfigError(f"exploration constant must be >= 0, got {text!r}")
    return c


def parse_algorithm(ident: str) -> AlgorithmId:
    """Parse ``umaxn``, ``umaxn-safe``, ``maxn``, ``kbest:<k>``, ``paranoid``, ``brs``, ``brs+``,
    ``mcts:<C>``, ``mctsh:<C>`` (and ``random``, a uniform baseline)."""
    ident = ident.strip()
    if ident in _PLAIN:
        return AlgorithmId(ident)
    family, _, arg = ident.partition(":")
    if family == "kbest":
        try:
            k = int(arg)
        except ValueError:
            raise ConfigError(f"kbest needs an integer k, got {ident!r}") from None
        if k < 1:
            raise ConfigError("kbest needs k >= 1")
        return AlgorithmId("kbest", k)
    if family in ("mcts", "mctsh"):
        return AlgorithmId(family, parse_exploration(arg) if arg else math.sqrt(2))
    raise ConfigError(f"unknown algorithm {ident!r}")


def run_algorithm(algo, game, state, evaluator, budget: SearchBudget, seed: int = 0, trace=None) -> SearchResult:
    """Pick a move with the algorithm named by ``algo`` (string or AlgorithmId).

    ``mctsh`` expects ``evaluator`` to be normalized to [0, 1] already.
    """
    a = parse_algorithm(algo) if isinstance(algo, str) else algo
    f = a.family
    if f == "umaxn":
        return unbounded_maxn(game, state, evaluator, budget, "best", trace=trace)
    if f == "umaxn-safe":
        return unbounded_maxn(game, state, evaluator, budget, "safe", trace=trace)
    if f == "maxn":
        return iterative_deepening(game, "maxn", state, evaluator, budget, trace=trace)
    if f == "kbest":
        return iterative_deepening(game, "kbest", state, evaluator, budget, trace=trace, k=a.param)
    if f in ("paranoid", "brs", "brs+"):
        return iterative_deepening(game, f, state, evaluator, budget, trace=trace)
    if f == "mcts":
        return mcts(game, state, budget, a.param, seed)
    if f == "mctsh":
        return mcts_h(game, state, evaluator, budget, a.param, seed)
    if f == "random":
        actions = game.legal_actions(state)
        return SearchResult(chosen=actions[random.Random(seed).randrange(len(actions))])
    raise ConfigError(f"unknown algorithm {a}")


__all__ = [
    "AlgorithmId", "parse_algorithm", "parse_exploration", "run_algorithm",
    "BudgetExceeded", "Clock", "RootStat", "SearchBudget", "SearchResult", "TranspositionTable",
    "argmax", "argmin", "best_key", "safe_key", "completion_tier",
    "Entry", "um_descend", "um_expand", "um_backup", "best_action", "safe_action", "unbounded_maxn",
    "maxn_depth", "kbest_maxn", "paranoid", "brs", "brs_plus", "iterative_deepening",
    "mcts", "mcts_h", "ContractViolation",
]
