"""Benchmark games and oracle-scale toy games behind one constructor."""

from __future__ import annotations

from ..core import ConfigError, Game, UnsupportedGameError
from .heyfish import HeyFish
from .hexfamily import SeparedTeamhex, Threehex, ThreePlayerHex
from .othello import Quadrothello, Triinversion
from .quadamazons import Quadamazons
from .toy import Bandit, TriNim

GAMES = {
    "three_player_hex": ThreePlayerHex,
    "threehex": Threehex,
    "separed_teamhex": SeparedTeamhex,
    "quadamazons": Quadamazons,
    "quadrothello": Quadrothello,
    "triinversion": Triinversion,
    "hey_fish": HeyFish,
    "trinim": TriNim,
    "bandit": Bandit,
}

# config keys accepted per game; upper-case aliases follow the rule texts (N, l)
_ALIASES = {"N": "n", "L": "l"}

# Small boards for desk-scale experiments; the constructors default to the full board sizes.
DESK_CONFIGS = {
    "three_player_hex": {"side": 4},
    "threehex": {"side": 4},
    "separed_teamhex": {"n": 6},
    "quadamazons": {"n": 8, "d": 1},
    "quadrothello": {"n": 6},
    "triinversion": {"l": 3},
    "hey_fish": {"rows": 5, "cols": 5},
    "trinim": {"heaps": [3, 2]},
    "bandit": {},
}


def make_game(name: str, config: dict | None = None, **kwargs) -> Game:
    """Build a game by identifier. ``config`` and keyword arguments are merged."""
    if name not in GAMES:
        if name == "blokus":
            raise UnsupportedGameError("blokus is not implemented (rules live in an external rulebook)")
        raise UnsupportedGameError(f"unknown game {name!r}; known: {', '.join(sorted(GAMES))}")
    params = {_ALIASES.get(k, k): v for k, v in {**(config or {}), **kwargs}.items()}
    try:
        return GAMES[name](**params)
    except TypeError as exc:
        raise ConfigError(f"{name}: invalid config {params}: {exc}") from exc


def connection_check(game: Game, state, player_or_team) -> bool:
    """Does the player (or team, for Separed Teamhex) link its goal sides?"""
    if not hasattr(game, "connection_check"):
        raise UnsupportedGameError(f"{game.name} is not a connection game")
    return game.connection_check(state, player_or_team)


def perft(game: Game, state, depth: int) -> int:
    """Number of action sequences of exactly ``depth`` plies (paths ending early are not counted)."""
    if depth == 0:
        return 1
    if game.is_terminal(state):
        return 0
    if depth == 1:
        return len(game.legal_actions(state))
    return sum(perft(game, game.apply(state, a, check=False), depth - 1) for a in game.legal_actions(state))


__all__ = [
    "GAMES", "DESK_CONFIGS", "make_game", "connection_check", "perft",
    "ThreePlayerHex", "Threehex", "SeparedTeamhex", "Quadamazons", "Quadrothello",
    "Triinversion", "HeyFish", "TriNim", "Bandit",
]
