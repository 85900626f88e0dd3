"""Connection games: 3-Player Hex, Threehex and Separed Teamhex."""

from __future__ import annotations

from ..core import PASS, ConfigError, Game, IllegalActionError, State, ZobristTable
from .hexgrid import HexHexBoard, RhombusBoard, connects, path_cost


class HexState(State):
    """Board tuple, mover, and an optional step index into a turn cycle.

    ``winner`` holds the decided outcome: None while undecided, otherwise a
    tuple of final scores.
    """

    __slots__ = ("board", "mover", "step", "outcome")

    def __init__(self, board, mover, step=0, outcome=None):
        self.board = board
        self.mover = mover
        self.step = step
        self.outcome = outcome

    def _ident(self):
        return (self.board, self.mover, self.step, self.outcome)

    def __repr__(self):
        return f"HexState(mover={self.mover}, step={self.step}, outcome={self.outcome})"


class _BoardTextMixin:
    chars = ".012"

    def serialize(self, state) -> str:
        cells = "".join(self.chars[v] for v in state.board)
        out = "" if state.outcome is None else ",".join(f"{x:g}" for x in state.outcome)
        return f"{cells}/{state.mover}/{state.step}/{out}"

    def parse(self, text: str):
        try:
            cells, mover, step, out = text.strip().split("/")
            board = tuple(self.chars.index(ch) for ch in cells)
        except ValueError as exc:
            raise ConfigError(f"bad {self.name} state text: {text!r}") from exc
        if len(board) != len(self.geom):
            raise ConfigError(f"{self.name}: expected {len(self.geom)} cells, got {len(board)}")
        outcome = tuple(float(x) for x in out.split(",")) if out else None
        return HexState(board, int(mover), int(step), outcome)

    def format_action(self, action) -> str:
        return "pass" if action == PASS else str(self.geom.coords[action])


class ThreePlayerHex(_BoardTextMixin, Game):
    """Classic three-player Hex on a hexagonal board; the draw-on-blockage variant.

    Player p joins the pair of opposite sides on axis p. The game is a draw
    as soon as no player can still connect through own and empty cells.
    """

    name = "three_player_hex"
    num_players = 3
    supports_out_of_turn = True

    def __init__(self, side: int = 7):
        if side < 2:
            raise ConfigError("three_player_hex: side must be >= 2")
        self.config = {"side": side}
        self.geom = HexHexBoard(side)
        self.zob = ZobristTable(len(self.geom), 4, 3, salt=self.name)

    def initial_state(self):
        return HexState(tuple([0] * len(self.geom)), 0)

    def _legal(self, s):
        return [i for i, v in enumerate(s.board) if v == 0]

    def _why_illegal(self, s, a):
        if not isinstance(a, int) or not 0 <= a < len(s.board):
            return "no such cell"
        return "cell is occupied"

    def _place(self, s, player, cell):
        board = list(s.board)
        board[cell] = player + 1
        board = tuple(board)
        outcome = None
        a, b = self.geom.sides[player]
        if connects(self.geom.neighbors, [v == player + 1 for v in board], a, b):
            outcome = tuple(1.0 if p == player else -1.0 for p in range(3))
        return board, outcome

    def _next(self, s, a):
        board, outcome = self._place(s, s.mover, a)
        return HexState(board, (s.mover + 1) % 3, 0, outcome)

    def _terminal(self, s):
        if s.outcome is not None:
            return True
        for p in range(3):
            a, b = self.geom.sides[p]
            if connects(self.geom.neighbors, [v == 0 or v == p + 1 for v in s.board], a, b):
                return False
        return True

    def _scores(self, s):
        return s.outcome if s.outcome is not None else (0.0, 0.0, 0.0)

    def _zobrist(self, s):
        return self.zob.hash_board(s.board) ^ self.zob.mover[s.mover]

    def connection_check(self, s, player: int) -> bool:
        a, b = self.geom.sides[player]
        return connects(self.geom.neighbors, [v == player + 1 for v in s.board], a, b)

    # BRS capability
    def out_of_turn_actions(self, s, player):
        return [i for i, v in enumerate(s.board) if v == 0]

    def apply_out_of_turn(self, s, player, action):
        if s.outcome is not None:
            raise IllegalActionError(action, "game is already decided")
        if action not in self.out_of_turn_actions(s, player):
            raise IllegalActionError(action, "cell is occupied")
        board, outcome = self._place(s, player, action)
        return HexState(board, s.mover, 0, outcome)

    def with_mover(self, s, player):
        return HexState(s.board, player, 0, s.outcome)


class Threehex(_BoardTextMixin, Game):
    """Three-player Hex where a player may overlay a single stone of its predecessor.

    Cell codes: 0 empty, 1+p single stone of p, 4+q stone of q on top of a
    stone of (q+2) % 3. Covered stones still count for connection.
    """

    name = "threehex"
    num_players = 3
    supports_out_of_turn = True
    chars = ".012abc"

    def __init__(self, side: int = 7):
        if side < 2:
            raise ConfigError("threehex: side must be >= 2")
        self.config = {"side": side}
        self.geom = HexHexBoard(side)
        self.zob = ZobristTable(len(self.geom), 7, 3, salt=self.name)
        # owns[p][v]: does cell code v contain a stone of p
        self.owns = [[v == 1 + p or v == 4 + p or v == 4 + (p + 1) % 3 for v in range(7)] for p in range(3)]
        # playable[p][v]: may p put a stone on a cell with code v
        self.playable = [[v == 0 or v == 1 + (p + 2) % 3 for v in range(7)] for p in range(3)]

    def initial_state(self):
        return HexState(tuple([0] * len(self.geom)), 0)

    def _placements(self, board, player):
        ok = self.playable[player]
        return [i for i, v in enumerate(board) if ok[v]]

    def _legal(self, s):
        return self._placements(s.board, s.mover) or [PASS]

    def _why_illegal(self, s, a):
        if a == PASS:
            return "pass is only legal when no placement exists"
        if not isinstance(a, int) or not 0 <= a < len(s.board):
            return "no such cell"
        v = s.board[a]
        if v >= 4:
            return "cell already holds two stones"
        if v:
            return f"may only overlay a single stone of player {(s.mover + 2) % 3}"
        return "not among the legal actions of this state"

    def _place(self, board, player, cell):
        board = list(board)
        board[cell] = 1 + player if board[cell] == 0 else 4 + player
        board = tuple(board)
        outcome = None
        if self.connection_check_board(board, player):
            outcome = tuple(1.0 if p == player else -1.0 for p in range(3))
        return board, outcome

    def connection_check_board(self, board, player):
        own = self.owns[player]
        a, b = self.geom.sides[player]
        return connects(self.geom.neighbors, [own[v] for v in board], a, b)

    def connection_check(self, s, player: int) -> bool:
        return self.connection_check_board(s.board, player)

    def _next(self, s, a):
        if a == PASS:
            return HexState(s.board, (s.mover + 1) % 3, 0, None)
        board, outcome = self._place(s.board, s.mover, a)
        return HexState(board, (s.mover + 1) % 3, 0, outcome)

    def _terminal(self, s):
        if s.outcome is not None:
            return True
        # passes never change the board, so "everyone passes in a row" is a board property
        return not any(self._placements(s.board, p) for p in range(3))

    def _scores(self, s):
        return s.outcome if s.outcome is not None else (0.0, 0.0, 0.0)

    def _zobrist(self, s):
        return self.zob.hash_board(s.board) ^ self.zob.mover[s.mover]

    def out_of_turn_actions(self, s, player):
        return self._placements(s.board, player)

    def apply_out_of_turn(self, s, player, action):
        if s.outcome is not None:
            raise IllegalActionError(action, "game is already decided")
        if action not in self._placements(s.board, player):
            raise IllegalActionError(action, f"player {player} may not place on cell {action}")
        board, outcome = self._place(s.board, player, action)
        return HexState(board, s.mover, 0, outcome)

    def with_mover(self, s, player):
        return HexState(s.board, player, 0, s.outcome)


ZONE_A, ZONE_B, ZONE_C, ZONE_D = range(4)
# (player, zone) for each step of the repeating turn cycle
TEAMHEX_CYCLE = ((0, ZONE_A), (3, ZONE_A), (1, ZONE_B), (0, ZONE_B), (2, ZONE_C), (1, ZONE_C), (3, ZONE_D), (2, ZONE_D))
TEAMS = ((0, 2), (1, 3))


class SeparedTeamhex(_BoardTextMixin, Game):
    """Four-player team Hex on an N x N rhombus split into quadrant zones.

    Geometry is a reconstruction (the zone figure is not available):
    A top-left, B top-right, C bottom-right, D bottom-left. Each player plays
    in two adjacent quadrants, so its own goal is the pair of half-edges that
    bound its half of the board: player 0 joins left/right across the top
    half, player 2 across the bottom half, player 1 joins top/bottom across
    the right half, player 3 across the left half. Team {0, 2} therefore owns
    the full left and right edges, team {1, 3} the full top and bottom edges.
    """

    name = "separed_teamhex"
    num_players = 4
    supports_out_of_turn = True
    chars = ".0123"

    def __init__(self, n: int = 20):
        if n < 2 or n % 2:
            raise ConfigError("separed_teamhex: N must be even and >= 2")
        self.config = {"n": n}
        self.geom = RhombusBoard(n)
        h = n // 2
        self.zone_of = [(0 if c < h else 1) if r < h else (3 if c < h else 2) for r, c in self.geom.coords]
        self.zone_cells = [[i for i, z in enumerate(self.zone_of) if z == zone] for zone in range(4)]
        idx = self.geom.index
        left = [idx[(r, 0)] for r in range(n)]
        right = [idx[(r, n - 1)] for r in range(n)]
        top = [idx[(0, c)] for c in range(n)]
        bottom = [idx[(n - 1, c)] for c in range(n)]
        self.player_sides = [
            (frozenset(left[:h]), frozenset(right[:h])),
            (frozenset(top[h:]), frozenset(bottom[h:])),
            (frozenset(left[h:]), frozenset(right[h:])),
            (frozenset(top[:h]), frozenset(bottom[:h])),
        ]
        self.team_sides = [(frozenset(left), frozenset(right)), (frozenset(top), frozenset(bottom))]
        self.player_zones = [sorted({z for p, z in TEAMHEX_CYCLE if p == q}) for q in range(4)]
        self.zob = ZobristTable(len(self.geom), 5, 4, n_extra=8, salt=self.name)

    def initial_state(self):
        return HexState(tuple([0] * len(self.geom)), 0, 0)

    def _legal(self, s):
        zone = TEAMHEX_CYCLE[s.step][1]
        board = s.board
        return [i for i in self.zone_cells[zone] if board[i] == 0] or [PASS]

    def _why_illegal(self, s, a):
        if a == PASS:
            return "pass is only legal when the zone is full"
        if not isinstance(a, int) or not 0 <= a < len(s.board):
            return "no such cell"
        if s.board[a]:
            return "cell is occupied"
        return f"cell is outside zone {'ABCD'[TEAMHEX_CYCLE[s.step][1]]} for this step"

    def _outcome(self, board, player):
        nb = self.geom.neighbors
        a, b = self.player_sides[player]
        if connects(nb, [v == player + 1 for v in board], a, b):
            return tuple(2.0 if p == player else -2.0 for p in range(4))
        t = player % 2
        team = TEAMS[t]
        a, b = self.team_sides[t]
        if connects(nb, [v != 0 and (v - 1) in team for v in board], a, b):
            return tuple(1.0 if p in team else -1.0 for p in range(4))
        return None

    def strong_win(self, s, player) -> bool:
        a, b = self.player_sides[player]
        return connects(self.geom.neighbors, [v == player + 1 for v in s.board], a, b)

    def connection_check(self, s, player_or_team) -> bool:
        """Player index (int) or team tuple, e.g. (0, 2)."""
        if isinstance(player_or_team, int):
            return self.strong_win(s, player_or_team)
        team = tuple(sorted(player_or_team))
        t = TEAMS.index(team)
        a, b = self.team_sides[t]
        return connects(self.geom.neighbors, [v != 0 and (v - 1) in team for v in s.board], a, b)

    def _next(self, s, a):
        step = (s.step + 1) % 8
        player = TEAMHEX_CYCLE[s.step][0]
        if a == PASS:
            return HexState(s.board, TEAMHEX_CYCLE[step][0], step, None)
        board = list(s.board)
        board[a] = player + 1
        board = tuple(board)
        return HexState(board, TEAMHEX_CYCLE[step][0], step, self._outcome(board, player))

    def _terminal(self, s):
        return s.outcome is not None or 0 not in s.board

    def _scores(self, s):
        return s.outcome if s.outcome is not None else (0.0,) * 4

    def _zobrist(self, s):
        return self.zob.hash_board(s.board) ^ self.zob.mover[s.mover] ^ self.zob.extra[s.step]

    def out_of_turn_actions(self, s, player):
        board = s.board
        return sorted(i for z in self.player_zones[player] for i in self.zone_cells[z] if board[i] == 0)

    def apply_out_of_turn(self, s, player, action):
        if s.outcome is not None:
            raise IllegalActionError(action, "game is already decided")
        if action not in self.out_of_turn_actions(s, player):
            raise IllegalActionError(action, f"cell is not an empty cell of player {player}'s zones")
        board = list(s.board)
        board[action] = player + 1
        board = tuple(board)
        return HexState(board, s.mover, s.step, self._outcome(board, player))

    def with_mover(self, s, player):
        step = next(i for i, (p, _) in enumerate(TEAMHEX_CYCLE) if p == player)
        return HexState(s.board, player, step, s.outcome)


def hex_distance_costs(game, board, player):
    """Per-cell entry cost for ``player``'s shortest connection (0 own, 1 free, None blocked)."""
    if isinstance(game, Threehex):
        own, ok = game.owns[player], game.playable[player]
        return [0 if own[v] else (1 if ok[v] else None) for v in board]
    mine = player + 1
    return [0 if v == mine else (1 if v == 0 else None) for v in board]


def connection_distance(game, board, player) -> int:
    costs = hex_distance_costs(game, board, player)
    if isinstance(game, SeparedTeamhex):
        a, b = game.player_sides[player]
    else:
        a, b = game.geom.sides[player]
    return path_cost(game.geom.neighbors, costs, a, b)
