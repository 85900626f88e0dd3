"""Hey, That's My Fish! on a small seeded ice floe."""

from __future__ import annotations

import random

from ..core import ConfigError, Game, State, ZobristTable
from .hexgrid import AXIAL_DIRS


class FishState(State):
    """``tiles``: fish per cell (0 = removed); ``pens``: owner+1 per cell (0 = none)."""

    __slots__ = ("tiles", "pens", "scores", "mover")

    def __init__(self, tiles, pens, scores, mover):
        self.tiles = tiles
        self.pens = pens
        self.scores = scores
        self.mover = mover

    @property
    def board(self):
        return tuple(t + 4 * p for t, p in zip(self.tiles, self.pens))

    def _ident(self):
        return (self.tiles, self.pens, self.scores, self.mover)

    def __repr__(self):
        return f"FishState(mover={self.mover}, scores={self.scores})"


def fish_counts(n_tiles: int) -> list[int]:
    """1/2/3-fish tiles in the 30/20/10 proportion of the full 60-tile set."""
    n1 = round(n_tiles * 30 / 60)
    n2 = round(n_tiles * 20 / 60)
    return [1] * n1 + [2] * n2 + [3] * (n_tiles - n1 - n2)


class HeyFish(Game):
    """Penguins slide in straight hex lines; the tile left behind is collected.

    A penguin that cannot move at the start of its owner's turn leaves the
    board with its tile. Players without penguins are skipped; the game
    ends when no penguin remains. Fish layout and penguin placement (on
    one-fish tiles) come from ``seed``.
    """

    name = "hey_fish"
    supports_out_of_turn = False

    def __init__(self, rows: int = 5, cols: int = 5, players: int = 3, penguins: int = 2, seed: int = 0):
        if rows < 2 or cols < 2:
            raise ConfigError("hey_fish: board must be at least 2x2")
        if not 2 <= players <= 4:
            raise ConfigError("hey_fish: 2 to 4 players")
        if penguins < 1 or players * penguins > rows * cols:
            raise ConfigError("hey_fish: not enough tiles for the penguins")
        self.config = {"rows": rows, "cols": cols, "players": players, "penguins": penguins, "seed": seed}
        self.num_players = players
        self.rows, self.cols = rows, cols
        n = rows * cols
        # odd-r offset layout converted to axial coordinates
        axial = [(c - (r - (r & 1)) // 2, r) for r in range(rows) for c in range(cols)]
        index = {a: i for i, a in enumerate(axial)}
        self.rays = []
        for q, r in axial:
            rays = []
            for dq, dr in AXIAL_DIRS:
                ray, k = [], 1
                while (q + k * dq, r + k * dr) in index:
                    ray.append(index[(q + k * dq, r + k * dr)])
                    k += 1
                if ray:
                    rays.append(ray)
            self.rays.append(rays)
        rng = random.Random(seed)
        fish = fish_counts(n)
        rng.shuffle(fish)
        self.start_tiles = tuple(fish)
        ones = [i for i, f in enumerate(fish) if f == 1]
        pool = ones if len(ones) >= players * penguins else list(range(n))
        spots = rng.sample(pool, players * penguins)
        pens = [0] * n
        for k, i in enumerate(spots):
            pens[i] = k % players + 1
        self.start_pens = tuple(pens)
        self.max_score = sum(fish)
        self.zob = ZobristTable(n, 20, players, n_extra=players * (self.max_score + 1), salt=self.name)

    def initial_state(self):
        return self._start_turn(self.start_tiles, self.start_pens, (0,) * self.num_players, 0)

    def _moves_from(self, tiles, pens, i):
        for ray in self.rays[i]:
            for j in ray:
                if tiles[j] == 0 or pens[j]:
                    break
                yield j

    def _start_turn(self, tiles, pens, scores, player):
        """Hand the turn to ``player`` or the next one with a penguin; strand stuck penguins."""
        tiles, pens, scores = list(tiles), list(pens), list(scores)
        P = self.num_players
        for k in range(P):
            q = (player + k) % P
            for i in range(len(pens)):
                if pens[i] == q + 1 and next(self._moves_from(tiles, pens, i), None) is None:
                    scores[q] += tiles[i]
                    tiles[i] = 0
                    pens[i] = 0
            if q + 1 in pens:
                return FishState(tuple(tiles), tuple(pens), tuple(scores), q)
        return FishState(tuple(tiles), tuple(pens), tuple(scores), player)

    def _legal(self, s):
        out = []
        for i, o in enumerate(s.pens):
            if o == s.mover + 1:
                out.extend((i, j) for j in self._moves_from(s.tiles, s.pens, i))
        out.sort()
        return out

    def _why_illegal(self, s, a):
        if not (isinstance(a, tuple) and len(a) == 2):
            return "expected a penguin move (from, to)"
        i, j = a
        if not (0 <= i < len(s.pens)) or s.pens[i] != s.mover + 1:
            return "no penguin of the mover on the origin tile"
        return "destination is not reachable in a straight line over ice"

    def _next(self, s, a):
        i, j = a
        tiles, pens, scores = list(s.tiles), list(s.pens), list(s.scores)
        scores[s.mover] += tiles[i]
        tiles[i] = 0
        pens[i], pens[j] = 0, s.mover + 1
        return self._start_turn(tiles, pens, scores, (s.mover + 1) % self.num_players)

    def _terminal(self, s):
        return not any(s.pens)

    def _scores(self, s):
        return tuple(float(x) for x in s.scores)

    def _zobrist(self, s):
        z = self.zob
        h = z.hash_board(s.board) ^ z.mover[s.mover]
        for p, sc in enumerate(s.scores):
            h ^= z.extra[p * (self.max_score + 1) + sc]
        return h

    def serialize(self, s):
        cells = "".join("0123"[t] + ".abcd"[p] for t, p in zip(s.tiles, s.pens))
        return f"{cells}/{s.mover}/{','.join(map(str, s.scores))}"

    def parse(self, text):
        try:
            cells, mover, scores = text.strip().split("/")
            tiles = tuple("0123".index(cells[k]) for k in range(0, len(cells), 2))
            pens = tuple(".abcd".index(cells[k]) for k in range(1, len(cells), 2))
        except ValueError as exc:
            raise ConfigError(f"bad hey_fish state text: {text!r}") from exc
        if len(tiles) != self.rows * self.cols:
            raise ConfigError("hey_fish: wrong cell count")
        return FishState(tiles, pens, tuple(int(x) for x in scores.split(",")), int(mover))

    def total_fish(self, s) -> int:
        return sum(s.tiles) + sum(s.scores)
