"""Multiplayer game-tree search: Unbounded Max^n and its baselines, benchmark games, oracle and harness."""

from .core import (
    CapabilityError,
    ConfigError,
    Game,
    GameError,
    IllegalActionError,
    State,
    TerminalStateError,
    UnsupportedGameError,
)
from .games import GAMES, make_game
from .search import SearchBudget, SearchResult, parse_algorithm, run_algorithm, unbounded_maxn

__version__ = "0.1.0"

__all__ = [
    "Game", "State", "GameError", "TerminalStateError", "IllegalActionError", "CapabilityError",
    "ConfigError", "UnsupportedGameError", "GAMES", "make_game", "SearchBudget", "SearchResult",
    "parse_algorithm", "run_algorithm", "unbounded_maxn",
]
