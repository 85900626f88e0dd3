"""Quadamazons: four-player Amazons with overlapping movement bands.

Each turn has two steps and each step two phases (move an amazon, then
shoot an arrow), so every phase is a separate action of the same player.
"""

from __future__ import annotations

from ..core import ConfigError, Game, State, ZobristTable

EMPTY, ARROW = 0, 1
_DIRS8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


class AmazonsState(State):
    __slots__ = ("board", "mover", "step", "phase", "first_sub", "src", "dst", "elim", "survivor_moves")

    def __init__(self, board, mover, step=0, phase=0, first_sub=-1, src=-1, dst=-1, elim=(), survivor_moves=None):
        self.board = board
        self.mover = mover
        self.step = step
        self.phase = phase
        self.first_sub = first_sub
        self.src = src
        self.dst = dst
        self.elim = elim
        self.survivor_moves = survivor_moves

    def _ident(self):
        return (self.board, self.mover, self.step, self.phase, self.first_sub, self.src, self.dst, self.elim,
                self.survivor_moves)

    def __repr__(self):
        return f"AmazonsState(mover={self.mover}, step={self.step}, phase={self.phase}, elim={self.elim})"


class Quadamazons(Game):
    """Four-player Amazons.

    Player p's amazons move inside a band of (N/2 + d) rows or columns:
    player 0 the top band, 1 the right, 2 the bottom, 3 the left. The band is
    split into two sub-zones across its long side; within one turn the two
    moved amazons must end in different sub-zones. Arrows land in the
    sub-zone of the amazon that shot them, or on the cell it just left.

    Starting amazons sit on each player's outer edge, two per sub-zone, in a
    quarter-turn symmetric layout (reconstructed; the original figure is not
    available).
    """

    name = "quadamazons"
    num_players = 4
    chars = ".x0123"

    def __init__(self, n: int = 14, d: int = 2):
        if n < 6 or n % 2:
            raise ConfigError("quadamazons: N must be even and >= 6")
        if not 0 <= d < n // 2:
            raise ConfigError("quadamazons: need 0 <= d < N/2")
        self.config = {"n": n, "d": d}
        self.n, self.d = n, d
        h = n // 2
        cells = [(i // n, i % n) for i in range(n * n)]
        self.region = [
            [r < h + d for r, c in cells],
            [c >= h - d for r, c in cells],
            [r >= h - d for r, c in cells],
            [c < h + d for r, c in cells],
        ]
        self.subzone = [
            [int(c >= h) for r, c in cells],
            [int(r >= h) for r, c in cells],
            [int(c >= h) for r, c in cells],
            [int(r >= h) for r, c in cells],
        ]
        self.rays = []
        for r, c in cells:
            rays = []
            for dr, dc in _DIRS8:
                ray, rr, cc = [], r + dr, c + dc
                while 0 <= rr < n and 0 <= cc < n:
                    ray.append(rr * n + cc)
                    rr, cc = rr + dr, cc + dc
                if ray:
                    rays.append(ray)
            self.rays.append(rays)
        self.zob = ZobristTable(n * n, 6, 4, n_extra=2 * 2 * 3 + 2 * n * n + 625, salt=self.name)

    # -- geometry ----------------------------------------------------------
    def start_cells(self, player):
        n, h = self.n, self.n // 2
        c1 = max(1, h // 3)
        c2 = max(c1 + 1, h - 1 - c1)
        pos = [(0, c) for c in (c1, c2, n - 1 - c2, n - 1 - c1)]
        for _ in range(player):
            pos = [(c, n - 1 - r) for r, c in pos]
        return sorted(r * n + c for r, c in pos)

    def initial_state(self):
        board = [EMPTY] * (self.n * self.n)
        for p in range(4):
            for i in self.start_cells(p):
                board[i] = 2 + p
        return AmazonsState(tuple(board), 0)

    def _slide(self, board, cell):
        for ray in self.rays[cell]:
            for j in ray:
                if board[j] != EMPTY:
                    break
                yield j

    def amazon_moves(self, board, player, forbidden_sub=-1):
        region, sub = self.region[player], self.subzone[player]
        code = 2 + player
        out = []
        for i, v in enumerate(board):
            if v != code:
                continue
            for j in self._slide(board, i):
                if region[j] and sub[j] != forbidden_sub:
                    out.append((i, j))
        out.sort()
        return out

    def arrow_targets(self, board, player, src, dst):
        region, sub = self.region[player], self.subzone[player]
        want = sub[dst]
        return sorted(j for j in self._slide(board, dst) if j == src or (region[j] and sub[j] == want))

    # -- rules -------------------------------------------------------------
    def _legal(self, s):
        if s.phase == 0:
            return self.amazon_moves(s.board, s.mover, s.first_sub if s.step == 1 else -1)
        return self.arrow_targets(s.board, s.mover, s.src, s.dst)

    def _why_illegal(self, s, a):
        if s.phase == 0:
            if not (isinstance(a, tuple) and len(a) == 2):
                return "expected an amazon move (from, to)"
            i, j = a
            if not (0 <= i < len(s.board) and s.board[i] == 2 + s.mover):
                return "no amazon of the mover on the origin cell"
            if not (0 <= j < len(s.board)) or not self.region[s.mover][j]:
                return "destination is outside the mover's band"
            if s.step == 1 and self.subzone[s.mover][j] == s.first_sub:
                return "second amazon must end in the other sub-zone"
            return "destination is not a clear queen move"
        if not isinstance(a, int) or not 0 <= a < len(s.board):
            return "expected an arrow cell"
        if a != s.src and (not self.region[s.mover][a] or self.subzone[s.mover][a] != self.subzone[s.mover][s.dst]):
            return "arrow must land in the amazon's sub-zone or on the cell it left"
        return "arrow cell is not a clear queen shot"

    def _next(self, s, a):
        p = s.mover
        if s.phase == 0:
            i, j = a
            b = list(s.board)
            b[i], b[j] = EMPTY, 2 + p
            first_sub = self.subzone[p][j] if s.step == 0 else s.first_sub
            return AmazonsState(tuple(b), p, s.step, 1, first_sub, i, j, s.elim)
        b = list(s.board)
        b[a] = ARROW
        board = tuple(b)
        if s.step == 0 and self.amazon_moves(board, p, s.first_sub):
            return AmazonsState(board, p, 1, 0, s.first_sub, -1, -1, s.elim)
        return self._advance(board, p, s.elim)

    def _advance(self, board, p, elim):
        elim = list(elim)
        q = p
        while True:
            alive = [x for x in range(4) if x not in elim]
            if len(alive) <= 1:
                break
            q = next(x for x in ((q + k) % 4 for k in range(1, 5)) if x in alive)
            if self.amazon_moves(board, q):
                return AmazonsState(board, q, 0, 0, -1, -1, -1, tuple(elim))
            elim.append(q)
        survivor_moves = None
        if alive:
            r = alive[0]
            s = len(self.amazon_moves(board, r))
            if s:
                survivor_moves = s
            else:
                elim.append(r)
        return AmazonsState(board, p, 0, 0, -1, -1, -1, tuple(elim), survivor_moves)

    def _terminal(self, s):
        return len(s.elim) >= 3

    def _scores(self, s):
        scores = [0.0] * 4
        e = s.elim
        if len(e) == 4:
            for rank, pl in enumerate(e):
                scores[pl] = float(rank - 2)
        else:
            k = float(s.survivor_moves)
            survivor = next(x for x in range(4) if x not in e)
            scores[survivor] = k
            scores[e[2]], scores[e[1]], scores[e[0]] = 0.0, -k, -2 * k
        return tuple(scores)

    def _zobrist(self, s):
        z = self.zob
        n2 = self.n * self.n
        h = z.hash_board(s.board) ^ z.mover[s.mover] ^ z.extra[s.step * 6 + s.phase * 3 + s.first_sub + 1]
        if s.src >= 0:
            h ^= z.extra[12 + s.src] ^ z.extra[12 + n2 + s.dst]
        code = 0
        for pl in s.elim:
            code = code * 5 + pl + 1
        h ^= z.extra[12 + 2 * n2 + code]
        if s.survivor_moves:
            h ^= s.survivor_moves * 0x9E3779B97F4A7C15 & 0xFFFFFFFFFFFFFFFF
        return h

    # -- text --------------------------------------------------------------
    def serialize(self, s):
        cells = "".join(self.chars[v] for v in s.board)
        elim = "".join(str(x) for x in s.elim)
        sm = "" if s.survivor_moves is None else str(s.survivor_moves)
        return f"{cells}/{s.mover}/{s.step}/{s.phase}/{s.first_sub}/{s.src}/{s.dst}/{elim}/{sm}"

    def parse(self, text):
        try:
            cells, mover, step, phase, fs, src, dst, elim, sm = text.strip().split("/")
            board = tuple(self.chars.index(ch) for ch in cells)
        except ValueError as exc:
            raise ConfigError(f"bad quadamazons state text: {text!r}") from exc
        if len(board) != self.n * self.n:
            raise ConfigError(f"quadamazons: expected {self.n * self.n} cells")
        return AmazonsState(board, int(mover), int(step), int(phase), int(fs), int(src), int(dst),
                            tuple(int(ch) for ch in elim), int(sm) if sm else None)

    def format_action(self, a):
        n = self.n
        if isinstance(a, tuple):
            return f"({a[0] // n},{a[0] % n})->({a[1] // n},{a[1] % n})"
        return f"arrow({a // n},{a % n})"
