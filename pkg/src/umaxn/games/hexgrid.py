"""Hexagonal board geometry: hex-hex (hexagon-shaped) and rhombus boards.

Cells are indexed row-major. Both geometries expose ``neighbors`` (list of
index lists) so connection checks and path distances are shared.
"""

from __future__ import annotations

from collections import deque

AXIAL_DIRS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))
INF = 10**9


class HexHexBoard:
    """Hexagon-shaped board of side ``side`` in axial coordinates (q, r)."""

    def __init__(self, side: int):
        self.side = side
        k = side - 1
        self.coords = [(q, r) for r in range(-k, k + 1) for q in range(-k, k + 1) if abs(q + r) <= k]
        self.index = {c: i for i, c in enumerate(self.coords)}
        self.neighbors = [
            [self.index[(q + dq, r + dr)] for dq, dr in AXIAL_DIRS if (q + dq, r + dr) in self.index]
            for q, r in self.coords
        ]
        # Opposite side pairs: player 0 on q = -k / +k, 1 on r, 2 on s = -q - r.
        self.sides = []
        for axis in range(3):
            lo, hi = [], []
            for i, (q, r) in enumerate(self.coords):
                v = (q, r, -q - r)[axis]
                if v == -k:
                    lo.append(i)
                if v == k:
                    hi.append(i)
            self.sides.append((frozenset(lo), frozenset(hi)))
        self.center = self.index[(0, 0)]

    def __len__(self):
        return len(self.coords)

    def step(self, cell: int, direction: int):
        q, r = self.coords[cell]
        dq, dr = AXIAL_DIRS[direction]
        return self.index.get((q + dq, r + dr))


class RhombusBoard:
    """N x N hex board as in two-player Hex; cell (row, col)."""

    def __init__(self, n: int):
        self.n = n
        self.coords = [(r, c) for r in range(n) for c in range(n)]
        self.index = {rc: i for i, rc in enumerate(self.coords)}
        dirs = ((0, 1), (0, -1), (1, 0), (-1, 0), (-1, 1), (1, -1))
        self.neighbors = [
            [self.index[(r + dr, c + dc)] for dr, dc in dirs if 0 <= r + dr < n and 0 <= c + dc < n]
            for r, c in self.coords
        ]

    def __len__(self):
        return self.n * self.n


def connects(neighbors, member, side_a, side_b) -> bool:
    """Flood fill from ``side_a`` through cells where ``member[i]`` is true."""
    seen = set()
    stack = [i for i in side_a if member[i]]
    seen.update(stack)
    while stack:
        i = stack.pop()
        if i in side_b:
            return True
        for j in neighbors[i]:
            if member[j] and j not in seen:
                seen.add(j)
                stack.append(j)
    return False


def path_cost(neighbors, cost, side_a, side_b) -> int:
    """Cheapest side-to-side path where entering cell i costs ``cost[i]`` (0, 1 or None=blocked).

    0-1 BFS; returns ``INF`` when the sides cannot be joined.
    """
    dist = [INF] * len(cost)
    dq = deque()
    for i in side_a:
        c = cost[i]
        if c is None:
            continue
        if c < dist[i]:
            dist[i] = c
            if c == 0:
                dq.appendleft(i)
            else:
                dq.append(i)
    while dq:
        i = dq.popleft()
        d = dist[i]
        if i in side_b:
            return d
        for j in neighbors[i]:
            c = cost[j]
            if c is None:
                continue
            nd = d + c
            if nd < dist[j]:
                dist[j] = nd
                if c == 0:
                    dq.appendleft(j)
                else:
                    dq.append(j)
    return INF
