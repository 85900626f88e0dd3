"""Game contract shared by every rule engine and every search algorithm.

States are immutable values. A game object holds the rules and static
geometry; it never mutates a state it is given.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from typing import Any, Hashable, Sequence

Action = Hashable
Payoff = tuple  # tuple[float, ...], one component per player

# Fixed seed for every Zobrist table; changing it changes all stored keys.
ZOBRIST_SEED = 0x5EED_2026_0001
PASS = -1


class GameError(Exception):
    """Base class for rule-engine errors."""


class TerminalStateError(GameError):
    """An operation that needs a non-terminal state got a terminal one (or vice versa)."""


class IllegalActionError(GameError):
    def __init__(self, action, rule: str):
        super().__init__(f"illegal action {action!r}: {rule}")
        self.action = action
        self.rule = rule


class CapabilityError(GameError):
    """The game does not implement an optional capability (out-of-turn moves)."""


class ConfigError(GameError, ValueError):
    pass


class UnsupportedGameError(GameError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unsupported game"


class ZobristTable:
    """Random 64-bit words for (cell, content) pairs plus mover and extra fields."""

    def __init__(self, n_cells: int, n_contents: int, n_players: int, n_extra: int = 0, salt: str = ""):
        rng = random.Random(f"{ZOBRIST_SEED}:{salt}")
        self.cells = [[0] + [rng.getrandbits(64) for _ in range(n_contents - 1)] for _ in range(n_cells)]
        self.mover = [rng.getrandbits(64) for _ in range(n_players)]
        self.extra = [rng.getrandbits(64) for _ in range(n_extra)]

    def hash_board(self, board: Sequence[int]) -> int:
        h = 0
        cells = self.cells
        for i, v in enumerate(board):
            if v:
                h ^= cells[i][v]
        return h


def win_loss_from_scores(scores: Sequence[float]) -> tuple:
    """Binary outcome vector: every player with the maximal score wins.

    An all-way tie is a draw (all zeros). Several, but not all, players tied
    at the top all get +1 and the rest -1.
    """
    top = max(scores)
    winners = [s == top for s in scores]
    if all(winners):
        return tuple(0.0 for _ in scores)
    return tuple(1.0 if w else -1.0 for w in winners)


class State:
    """Base for game states.

    Subclasses set ``mover`` and a ``board`` tuple, and may memoize derived
    values in ``_cache``. Equality and hashing are on ``_ident()``.
    """

    __slots__ = ("_cache",)

    def _ident(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def memo(self, name: str, fn):
        try:
            cache = self._cache
        except AttributeError:
            cache = {}
            object.__setattr__(self, "_cache", cache)
        if name not in cache:
            cache[name] = fn()
        return cache[name]


class Game(ABC):
    """Abstract perfect-information game with P players.

    Concrete games implement the underscore hooks; the public methods add the
    contract checks (terminal-state guards, action legality).
    """

    name: str = "game"
    num_players: int = 3
    supports_out_of_turn: bool = False

    # -- hooks -----------------------------------------------------------
    @abstractmethod
    def initial_state(self) -> State: ...

    @abstractmethod
    def _legal(self, state) -> list: ...

    @abstractmethod
    def _next(self, state, action) -> State: ...

    @abstractmethod
    def _terminal(self, state) -> bool: ...

    @abstractmethod
    def _scores(self, state) -> tuple: ...

    @abstractmethod
    def _zobrist(self, state) -> int: ...

    def _why_illegal(self, state, action) -> str:
        return "not among the legal actions of this state"

    def _win_loss(self, state) -> tuple:
        return win_loss_from_scores(self._scores(state))

    # -- contract --------------------------------------------------------
    def is_terminal(self, state) -> bool:
        return state.memo("terminal", lambda: self._terminal(state))

    def legal_actions(self, state) -> list:
        if self.is_terminal(state):
            raise TerminalStateError("legal_actions called on a terminal state")
        return state.memo("legal", lambda: self._legal(state))

    def current_player(self, state) -> int:
        if self.is_terminal(state):
            raise TerminalStateError("current_player called on a terminal state")
        return state.mover

    def apply(self, state, action, check: bool = True):
        if check:
            if self.is_terminal(state):
                raise TerminalStateError("apply called on a terminal state")
            if action not in self.legal_actions(state):
                raise IllegalActionError(action, self._why_illegal(state, action))
        return self._next(state, action)

    def terminal_payoff(self, state) -> tuple:
        if not self.is_terminal(state):
            raise TerminalStateError("terminal_payoff called on a non-terminal state")
        return state.memo("payoff", lambda: tuple(float(x) for x in self._scores(state)))

    def win_loss_vector(self, state) -> tuple:
        if not self.is_terminal(state):
            raise TerminalStateError("win_loss_vector called on a non-terminal state")
        return state.memo("winloss", lambda: tuple(float(x) for x in self._win_loss(state)))

    def winners(self, state) -> frozenset:
        wl = self.win_loss_vector(state)
        return frozenset(p for p, x in enumerate(wl) if x > 0)

    def zobrist_key(self, state) -> int:
        return state.memo("zobrist", lambda: self._zobrist(state))

    def children(self, state) -> list:
        """(action, successor) pairs in ordinal order."""
        return [(a, self._next(state, a)) for a in self.legal_actions(state)]

    # -- optional BRS capability ------------------------------------------
    def out_of_turn_actions(self, state, player: int) -> list:
        raise CapabilityError(f"{self.name} does not support out-of-turn moves")

    def apply_out_of_turn(self, state, player: int, action):
        raise CapabilityError(f"{self.name} does not support out-of-turn moves")

    def with_mover(self, state, player: int):
        raise CapabilityError(f"{self.name} does not support out-of-turn moves")

    # -- text format -----------------------------------------------------
    def serialize(self, state) -> str:
        raise NotImplementedError

    def parse(self, text: str) -> State:
        raise NotImplementedError

    def format_action(self, action) -> str:
        return repr(action)

    def parse_action(self, text: str) -> Any:
        import ast

        return ast.literal_eval(text)

    def __repr__(self):
        return f"{type(self).__name__}({self.config!r})" if hasattr(self, "config") else type(self).__name__
