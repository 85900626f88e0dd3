"""Othello-family games: Quadrothello (4 players, square) and Triinversion (3 players, hex)."""

from __future__ import annotations

from ..core import PASS, ConfigError, Game, State, ZobristTable
from .hexgrid import AXIAL_DIRS, HexHexBoard


class StoneState(State):
    __slots__ = ("board", "mover", "done")

    def __init__(self, board, mover, done=False):
        self.board = board
        self.mover = mover
        self.done = done

    def _ident(self):
        return (self.board, self.mover, self.done)

    def __repr__(self):
        return f"StoneState(mover={self.mover}, done={self.done})"


class _StoneText:
    def serialize(self, s) -> str:
        return "".join(self.chars[v] for v in s.board) + f"/{s.mover}/{int(s.done)}"

    def parse(self, text):
        try:
            cells, mover, done = text.strip().split("/")
            board = tuple(self.chars.index(ch) for ch in cells)
        except ValueError as exc:
            raise ConfigError(f"bad {self.name} state text: {text!r}") from exc
        if len(board) != self.n_cells:
            raise ConfigError(f"{self.name}: expected {self.n_cells} cells, got {len(board)}")
        return StoneState(board, int(mover), bool(int(done)))


def _flips(board, rays, cell, own_stones, capturable):
    """Cells captured by placing on ``cell``: runs of ``capturable`` codes closed by an ``own_stones`` code."""
    out = []
    for ray in rays[cell]:
        run = []
        for j in ray:
            v = board[j]
            if v in capturable:
                run.append(j)
                continue
            if run and v in own_stones:
                out.extend(run)
            break
    return out


# Local 4x4 centre pattern: owner (0-3) of each cell, row-major. Rotating the
# block a quarter turn clockwise maps player p's stones onto player p+1's,
# and every player has exactly one capturing placement in its zone.
QUADROTHELLO_CENTRE = (
    (0, 0, 0, 1),
    (3, 2, 3, 1),
    (3, 1, 0, 1),
    (3, 2, 2, 2),
)
_DIRS8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


class Quadrothello(_StoneText, Game):
    """Four-player Othello with half-board placement zones.

    Player 0 places in the top half, 1 in the right half, 2 in the bottom
    half, 3 in the left half. Captures run in all eight directions and may
    cross zones; any mix of opponents' stones can be captured in a run.
    A player without a move is skipped.
    """

    name = "quadrothello"
    num_players = 4
    supports_out_of_turn = True
    chars = ".0123"

    def __init__(self, n: int = 14, centre=QUADROTHELLO_CENTRE):
        if n < 6 or n % 2:
            raise ConfigError("quadrothello: N must be even and >= 6")
        self.config = {"n": n}
        self.n = n
        self.n_cells = n * n
        self.centre = centre
        h = n // 2
        rc = [(i // n, i % n) for i in range(n * n)]
        self.zones = [
            [i for i, (r, c) in enumerate(rc) if r < h],
            [i for i, (r, c) in enumerate(rc) if c >= h],
            [i for i, (r, c) in enumerate(rc) if r >= h],
            [i for i, (r, c) in enumerate(rc) if c < h],
        ]
        self.in_zone = [set(z) for z in self.zones]
        self.rays = []
        for r, c in rc:
            rays = []
            for dr, dc in _DIRS8:
                ray = []
                rr, cc = r + dr, c + dc
                while 0 <= rr < n and 0 <= cc < n:
                    ray.append(rr * n + cc)
                    rr, cc = rr + dr, cc + dc
                if len(ray) >= 2:
                    rays.append(ray)
            self.rays.append(rays)
        self.opp = [frozenset(v for v in (1, 2, 3, 4) if v != p + 1) for p in range(4)]
        self.own = [frozenset((p + 1,)) for p in range(4)]
        self.zob = ZobristTable(n * n, 5, 4, n_extra=1, salt=self.name)

    def initial_state(self):
        board = [0] * self.n_cells
        o = self.n // 2 - 2
        for r in range(4):
            for c in range(4):
                board[(o + r) * self.n + o + c] = self.centre[r][c] + 1
        return StoneState(tuple(board), 0)

    def moves_for(self, board, p):
        rays, own, opp = self.rays, self.own[p], self.opp[p]
        return [i for i in self.zones[p] if board[i] == 0 and _flips(board, rays, i, own, opp)]

    def _has_move(self, board, p):
        rays, own, opp = self.rays, self.own[p], self.opp[p]
        return any(board[i] == 0 and _flips(board, rays, i, own, opp) for i in self.zones[p])

    def _legal(self, s):
        return self.moves_for(s.board, s.mover)

    def _why_illegal(self, s, a):
        if not isinstance(a, int) or not 0 <= a < self.n_cells:
            return "no such cell"
        if s.board[a]:
            return "cell is occupied"
        if a not in self.in_zone[s.mover]:
            return f"cell is outside player {s.mover}'s zone"
        return "placement flanks no opponent stones"

    def capture_run(self, board, p, cell):
        """Stones that placing ``p`` on ``cell`` would capture."""
        return _flips(board, self.rays, cell, self.own[p], self.opp[p])

    def _place(self, board, p, cell):
        flips = _flips(board, self.rays, cell, self.own[p], self.opp[p])
        b = list(board)
        b[cell] = p + 1
        for j in flips:
            b[j] = p + 1
        return tuple(b)

    def _next(self, s, a):
        board = self._place(s.board, s.mover, a)
        for k in range(1, 5):
            q = (s.mover + k) % 4
            if self._has_move(board, q):
                return StoneState(board, q)
        return StoneState(board, (s.mover + 1) % 4, True)

    def _terminal(self, s):
        return s.done

    def _scores(self, s):
        return tuple(float(s.board.count(p + 1)) for p in range(4))

    def _zobrist(self, s):
        return self.zob.hash_board(s.board) ^ self.zob.mover[s.mover] ^ (self.zob.extra[0] if s.done else 0)

    def format_action(self, a):
        return f"({a // self.n},{a % self.n})"

    # BRS capability: placement legality ignores whose turn it is.
    def out_of_turn_actions(self, s, player):
        return self.moves_for(s.board, player)

    def apply_out_of_turn(self, s, player, action):
        from ..core import IllegalActionError

        if action not in self.moves_for(s.board, player):
            raise IllegalActionError(action, f"not a capturing placement in player {player}'s zone")
        board = self._place(s.board, player, action)
        done = not any(self._has_move(board, q) for q in range(4))
        return StoneState(board, s.mover, done)

    def with_mover(self, s, player):
        return StoneState(s.board, player, s.done)


DIRECT_OPPONENT = (2, 0, 1)
INDIRECT_OPPONENT = (1, 2, 0)


class Triinversion(_StoneText, Game):
    """Three-player Othello variant on a hexagonal board.

    The centre cell is never playable; the two centre-adjacent cells opposite
    each other count as neighbours, so a line may run through the centre.
    A placement must enclose a line of the mover's direct opponent between
    the new stone and a stone of the mover or of the indirect opponent; the
    enclosed stones become the mover's.
    """

    name = "triinversion"
    num_players = 3
    supports_out_of_turn = True
    chars = ".012#"
    VOID = 4

    def __init__(self, l: int = 6):
        if l < 3:
            raise ConfigError("triinversion: l must be >= 3 (smaller boards have no legal move)")
        self.config = {"l": l}
        self.geom = HexHexBoard(l)
        self.n_cells = len(self.geom)
        g = self.geom
        self.rays = []
        for i in range(self.n_cells):
            rays = []
            for d in range(6):
                ray, j = [], g.step(i, d)
                while j is not None:
                    if j == g.center:
                        j = g.step(j, d)
                        continue
                    ray.append(j)
                    j = g.step(j, d)
                if i != g.center and len(ray) >= 2:
                    rays.append(ray)
            self.rays.append(rays)
        self.capturable = [frozenset((DIRECT_OPPONENT[p] + 1,)) for p in range(3)]
        self.closers = [frozenset((p + 1, INDIRECT_OPPONENT[p] + 1)) for p in range(3)]
        self.zob = ZobristTable(self.n_cells, 5, 3, salt=self.name)

    def initial_state(self):
        g = self.geom
        board = [0] * self.n_cells
        board[g.center] = self.VOID
        for k, d in enumerate(AXIAL_DIRS):
            board[g.index[d]] = k % 3 + 1
        return StoneState(tuple(board), 0)

    def moves_for(self, board, p):
        rays, closers, cap = self.rays, self.closers[p], self.capturable[p]
        return [i for i, v in enumerate(board) if v == 0 and _flips(board, rays, i, closers, cap)]

    def _has_move(self, board, p):
        rays, closers, cap = self.rays, self.closers[p], self.capturable[p]
        return any(v == 0 and _flips(board, rays, i, closers, cap) for i, v in enumerate(board))

    def _legal(self, s):
        return self.moves_for(s.board, s.mover) or [PASS]

    def _why_illegal(self, s, a):
        if a == PASS:
            return "pass is only legal without any placement"
        if not isinstance(a, int) or not 0 <= a < self.n_cells:
            return "no such cell"
        if a == self.geom.center:
            return "the central cell is not playable"
        if s.board[a]:
            return "cell is occupied"
        return f"placement encloses no line of player {DIRECT_OPPONENT[s.mover]}"

    def capture_run(self, board, p, cell):
        """Stones that placing ``p`` on ``cell`` would capture."""
        return _flips(board, self.rays, cell, self.closers[p], self.capturable[p])

    def _place(self, board, p, cell):
        flips = _flips(board, self.rays, cell, self.closers[p], self.capturable[p])
        b = list(board)
        b[cell] = p + 1
        for j in flips:
            b[j] = p + 1
        return tuple(b)

    def _next(self, s, a):
        if a == PASS:
            return StoneState(s.board, (s.mover + 1) % 3)
        return StoneState(self._place(s.board, s.mover, a), (s.mover + 1) % 3)

    def _terminal(self, s):
        # three consecutive forced passes leave the board unchanged, so this is a board property
        return not any(self._has_move(s.board, p) for p in range(3))

    def _scores(self, s):
        counts = [s.board.count(p + 1) for p in range(3)]
        return tuple(float(counts[p] + counts[INDIRECT_OPPONENT[p]]) for p in range(3))

    def _zobrist(self, s):
        return self.zob.hash_board(s.board) ^ self.zob.mover[s.mover]

    def format_action(self, a):
        return "pass" if a == PASS else str(self.geom.coords[a])

    def out_of_turn_actions(self, s, player):
        return self.moves_for(s.board, player)

    def apply_out_of_turn(self, s, player, action):
        from ..core import IllegalActionError

        if action not in self.moves_for(s.board, player):
            raise IllegalActionError(action, f"placement encloses no line of player {DIRECT_OPPONENT[player]}")
        return StoneState(self._place(s.board, player, action), s.mover)

    def with_mover(self, s, player):
        return StoneState(s.board, player)
