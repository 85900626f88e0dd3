"""Exhaustive solvers for small games: the ground truth the searches are checked against.

``solve_maxn`` supports two orderings of the children of a state:

* ``"value"``: plain max^n on the terminal payoff f_t.
* ``"completion"``: the mover ranks children by (f_b component, f_t component)
  lexicographically, which is what a fully resolved Unbounded Max^n table
  converges to.

Both break ties by the lowest action ordinal, through the same ``argmax``
the search module uses.
"""

from __future__ import annotations

import ast
import io
import json
import struct
import sys
from dataclasses import dataclass, field

from .core import Game, GameError
from .search.common import argmax, argmin

TIEBREAK_ID = "ordinal-lowest-first"
MAGIC = b"UMXO"
DEFAULT_CAP = 10**6


class OracleCapExceeded(GameError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"state space exceeds the cap: reached {count} states (cap {cap})")
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class Solved:
    """Solved value of one state. ``best`` is None at terminals."""

    value: tuple
    completion: tuple
    best: object
    best_index: int
    mover: int  # -1 at terminals


@dataclass
class SolvedTable:
    game: str
    config: dict
    key: str
    root: int
    entries: dict = field(default_factory=dict)
    tiebreak: str = TIEBREAK_ID

    def __getitem__(self, zkey) -> Solved:
        return self.entries[zkey]

    def __contains__(self, zkey):
        return zkey in self.entries

    def __len__(self):
        return len(self.entries)

    def lookup(self, game: Game, state) -> Solved:
        return self.entries[game.zobrist_key(state)]

    @property
    def root_entry(self) -> Solved:
        return self.entries[self.root]

    def action_values(self, game: Game, state) -> list:
        """(completion, value) of every action of ``state``, in ordinal order."""
        out = []
        for a in game.legal_actions(state):
            e = self.lookup(game, game.apply(state, a, check=False))
            out.append((e.completion, e.value))
        return out

    # -- binary fixture format ----------------------------------------------
    def to_bytes(self) -> bytes:
        """MAGIC, u32 header length, JSON header, then one record per state."""
        players = len(next(iter(self.entries.values())).value) if self.entries else 0
        header = {
            "game": self.game, "config": self.config, "tiebreak": self.tiebreak, "key": self.key,
            "states": len(self.entries), "players": players, "root": self.root,
        }
        hb = json.dumps(header, sort_keys=True).encode()
        buf = io.BytesIO()
        buf.write(MAGIC)
        buf.write(struct.pack("<I", len(hb)))
        buf.write(hb)
        rec = struct.Struct(f"<QbI{2 * players}d")
        for z, e in self.entries.items():
            buf.write(rec.pack(z, e.mover, e.best_index + 1, *e.value, *e.completion))
            text = b"" if e.best is None else repr(e.best).encode()
            buf.write(struct.pack("<H", len(text)))
            buf.write(text)
        return buf.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "SolvedTable":
        if data[:4] != MAGIC:
            raise ValueError("not a solved-table fixture (bad magic)")
        (hlen,) = struct.unpack_from("<I", data, 4)
        header = json.loads(data[8:8 + hlen])
        P = header["players"]
        rec = struct.Struct(f"<QbI{2 * P}d")
        off = 8 + hlen
        entries = {}
        for _ in range(header["states"]):
            fields = rec.unpack_from(data, off)
            off += rec.size
            (tlen,) = struct.unpack_from("<H", data, off)
            off += 2
            text = data[off:off + tlen].decode()
            off += tlen
            z, mover, bi = fields[:3]
            vals = fields[3:]
            best = ast.literal_eval(text) if text else None
            entries[z] = Solved(tuple(vals[:P]), tuple(vals[P:]), best, bi - 1, mover)
        return cls(header["game"], header["config"], header["key"], header["root"], entries, header["tiebreak"])

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "SolvedTable":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def _deep_recursion():
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)


def solve_maxn(game: Game, state=None, cap: int = DEFAULT_CAP, key: str = "value") -> SolvedTable:
    """Memoized exhaustive max^n over every state reachable from ``state``."""
    if key not in ("value", "completion"):
        raise ValueError("key must be 'value' or 'completion'")
    state = game.initial_state() if state is None else state
    _deep_recursion()
    entries: dict = {}
    zob = game.zobrist_key

    def solve(s):
        z = zob(s)
        e = entries.get(z)
        if e is not None:
            return e
        if len(entries) >= cap:
            raise OracleCapExceeded(len(entries) + 1, cap)
        if game.is_terminal(s):
            e = Solved(game.terminal_payoff(s), game.win_loss_vector(s), None, -1, -1)
        else:
            p = s.mover
            actions = game.legal_actions(s)
            kids = [solve(game.apply(s, a, check=False)) for a in actions]
            if key == "value":
                i = argmax(k.value[p] for k in kids)
            else:
                i = argmax((k.completion[p], k.value[p]) for k in kids)
            e = Solved(kids[i].value, kids[i].completion, actions[i], i, p)
        entries[z] = e
        return e

    solve(state)
    return SolvedTable(game.name, dict(getattr(game, "config", {})), key, zob(state), entries)


def solve_paranoid(game: Game, state=None, root_player: int | None = None, cap: int = DEFAULT_CAP):
    """Exhaustive paranoid minimax on the root player's terminal component. Returns (value, action)."""
    state = game.initial_state() if state is None else state
    if game.is_terminal(state):
        root = 0 if root_player is None else root_player
        return game.terminal_payoff(state)[root], None
    root = state.mover if root_player is None else root_player
    _deep_recursion()
    memo: dict = {}
    zob = game.zobrist_key

    def solve(s):
        z = zob(s)
        if z in memo:
            return memo[z]
        if len(memo) >= cap:
            raise OracleCapExceeded(len(memo) + 1, cap)
        if game.is_terminal(s):
            out = (game.terminal_payoff(s)[root], None)
        else:
            actions = game.legal_actions(s)
            vals = [solve(game.apply(s, a, check=False))[0] for a in actions]
            i = argmax(vals) if s.mover == root else argmin(vals)
            out = (vals[i], actions[i])
        memo[z] = out
        return out

    return solve(state)


def count_states(game: Game, state=None, cap: int = DEFAULT_CAP) -> int:
    """Distinct states reachable from ``state`` (terminals included); ``cap + 1`` on overflow."""
    state = game.initial_state() if state is None else state
    seen = {game.zobrist_key(state)}
    stack = [state]
    while stack:
        s = stack.pop()
        if game.is_terminal(s):
            continue
        for a in game.legal_actions(s):
            ch = game.apply(s, a, check=False)
            z = game.zobrist_key(ch)
            if z not in seen:
                seen.add(z)
                if len(seen) > cap:
                    return cap + 1
                stack.append(ch)
    return len(seen)
