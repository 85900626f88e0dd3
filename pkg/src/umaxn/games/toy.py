"""Oracle-scale games whose full trees are small enough to enumerate."""

from __future__ import annotations

from ..core import ConfigError, Game, IllegalActionError, State, ZobristTable, win_loss_from_scores


class NimState(State):
    __slots__ = ("heaps", "mover", "last")

    def __init__(self, heaps, mover, last=-1):
        self.heaps = heaps
        self.mover = mover
        self.last = last

    @property
    def board(self):
        return self.heaps

    def _ident(self):
        return (self.heaps, self.mover, self.last)

    def __repr__(self):
        return f"NimState({self.heaps}, mover={self.mover})"


class TriNim(Game):
    """Three-player take-away race: remove 1 or 2 tokens from one heap; taking the last token wins.

    Action (heap, amount), ordered lexicographically.
    """

    name = "trinim"
    supports_out_of_turn = True

    def __init__(self, heaps=(3,), players: int = 3):
        heaps = tuple(int(h) for h in heaps)
        if not heaps or min(heaps) < 0 or sum(heaps) == 0:
            raise ConfigError("trinim: need at least one non-empty heap")
        if players < 2:
            raise ConfigError("trinim: at least 2 players")
        self.config = {"heaps": list(heaps), "players": players}
        self.num_players = players
        self.heaps = heaps
        self.zob = ZobristTable(len(heaps), max(heaps) + 1, players, n_extra=players + 1, salt=self.name)

    def initial_state(self):
        return NimState(self.heaps, 0)

    def _legal(self, s):
        return [(h, k) for h, size in enumerate(s.heaps) for k in (1, 2) if k <= size]

    def _why_illegal(self, s, a):
        return "must take 1 or 2 tokens from a heap holding at least that many"

    def _next(self, s, a):
        h, k = a
        heaps = list(s.heaps)
        heaps[h] -= k
        return NimState(tuple(heaps), (s.mover + 1) % self.num_players, s.mover)

    def _terminal(self, s):
        return sum(s.heaps) == 0

    def _scores(self, s):
        return tuple(1.0 if p == s.last else -1.0 for p in range(self.num_players))

    def _zobrist(self, s):
        return self.zob.hash_board(s.heaps) ^ self.zob.mover[s.mover] ^ self.zob.extra[s.last + 1]

    # out-of-turn moves for best-reply search: any player may take from any heap
    def out_of_turn_actions(self, s, player):
        return self._legal(s) if not self._terminal(s) else []

    def apply_out_of_turn(self, s, player, action):
        if action not in self.out_of_turn_actions(s, player):
            raise IllegalActionError(action, self._why_illegal(s, action))
        h, k = action
        heaps = list(s.heaps)
        heaps[h] -= k
        return NimState(tuple(heaps), s.mover, player)

    def with_mover(self, s, player):
        return NimState(s.heaps, player, s.last)

    def serialize(self, s):
        return f"{','.join(map(str, s.heaps))}/{s.mover}/{s.last}"

    def parse(self, text):
        heaps, mover, last = text.strip().split("/")
        return NimState(tuple(int(x) for x in heaps.split(",")), int(mover), int(last))


class BanditState(State):
    __slots__ = ("arm", "mover")

    def __init__(self, arm=-1):
        self.arm = arm
        self.mover = 0

    @property
    def board(self):
        return (self.arm + 1,)

    def _ident(self):
        return (self.arm,)

    def __repr__(self):
        return f"BanditState(arm={self.arm})"


DEFAULT_BANDIT = (
    (0.2, 0.5, 0.3),
    (0.6, 0.1, 0.3),
    (0.3, 0.4, 0.3),
    (0.1, 0.3, 0.6),
)


class Bandit(Game):
    """One decision by player 0 among A arms; arm a ends the game with payoff row a.

    The win/loss vector crowns the players with the largest payoff in the row.
    """

    name = "bandit"

    def __init__(self, payoffs=DEFAULT_BANDIT):
        rows = tuple(tuple(float(x) for x in row) for row in payoffs)
        if not rows or len({len(r) for r in rows}) != 1 or len(rows[0]) < 2:
            raise ConfigError("bandit: payoff table must be a non-empty A x P matrix with P >= 2")
        self.config = {"payoffs": [list(r) for r in rows]}
        self.payoffs = rows
        self.num_players = len(rows[0])
        self.zob = ZobristTable(1, len(rows) + 1, self.num_players, salt=self.name)

    def initial_state(self):
        return BanditState()

    def _legal(self, s):
        return list(range(len(self.payoffs)))

    def _next(self, s, a):
        return BanditState(a)

    def _terminal(self, s):
        return s.arm >= 0

    def _scores(self, s):
        return self.payoffs[s.arm]

    def _win_loss(self, s):
        return win_loss_from_scores(self.payoffs[s.arm])

    def _zobrist(self, s):
        return self.zob.hash_board(s.board) ^ self.zob.mover[0]

    def serialize(self, s):
        return str(s.arm)

    def parse(self, text):
        return BanditState(int(text))
