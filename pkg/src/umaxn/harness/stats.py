"""Binary-score aggregation with stratified percentile bootstrap confidence intervals."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .match import binary_score


def stratified_bootstrap(strata, resamples: int = 10_000, seed: int = 0, level: float = 0.95):
    """Percentile CI of the overall mean when each stratum is resampled with replacement on its own.

    ``strata`` is a list of score sequences. Resampling a stratum of n values
    is drawn as a multinomial over its distinct values, which has the same
    distribution as drawing n indices and is much cheaper. Returns
    (mean, lower, upper).
    """
    strata = [np.asarray(s, dtype=float) for s in strata if len(s)]
    if not strata:
        raise ValueError("no non-empty stratum")
    N = sum(len(s) for s in strata)
    mean = float(sum(s.sum() for s in strata) / N)
    rng = np.random.default_rng(seed)
    totals = np.zeros(resamples)
    for s in strata:
        vals, counts = np.unique(s, return_counts=True)
        if len(vals) == 1:
            totals += vals[0] * len(s)
            continue
        draws = rng.multinomial(len(s), counts / len(s), size=resamples)
        totals += draws @ vals
    means = totals / N
    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(means, [alpha, 1.0 - alpha])
    # guard against float fuzz so lower <= mean <= upper always holds
    return mean, float(min(lo, mean)), float(max(hi, mean))


@dataclass
class ScoreRow:
    algorithm: str
    game: str  # "ALL" for the per-algorithm summary row
    n: int
    mean: float
    lower: float
    upper: float

    @property
    def radius(self) -> float:
        return (self.upper - self.lower) / 2.0


@dataclass
class ScoreTable:
    rows: list = field(default_factory=list)
    excluded: list = field(default_factory=list)  # strata reported as empty
    resamples: int = 0
    seed: int = 0

    def cell(self, algorithm, game) -> ScoreRow | None:
        return next((r for r in self.rows if r.algorithm == algorithm and r.game == game), None)

    @property
    def algorithms(self) -> list:
        return sorted({r.algorithm for r in self.rows})

    @property
    def games(self) -> list:
        return sorted({r.game for r in self.rows if r.game != "ALL"})


def _stratum_key(rec, parts):
    out = []
    for part in parts:
        if part == "game":
            out.append(rec.game)
        elif part == "seat":
            out.append(rec.evaluated_seat)
        elif part == "pair":
            out.append((rec.i, rec.j))
        elif part == "i":
            out.append(rec.i)
        elif part == "j":
            out.append(rec.j)
    return tuple(out)


def group_strata(records, parts) -> list:
    """Scores grouped by stratum; singleton strata are pooled one level coarser.

    A stratum holding a single match has no within-stratum variance, so with
    one match per (seat, i, j) cell the interval would collapse to a point.
    Such strata are merged with their siblings sharing the coarser key.
    """
    parts = tuple(parts)
    groups = defaultdict(list)
    for rec in records:
        groups[_stratum_key(rec, parts)].append(binary_score(rec, rec.evaluated_seat))
    level = len(parts)
    while level > 0 and any(len(v) < 2 for v in groups.values()):
        level -= 1
        merged = defaultdict(list)
        for k, v in groups.items():
            merged[k[:level] if len(v) < 2 else k].extend(v)
        groups = merged
    return [groups[k] for k in sorted(groups, key=repr)]


def aggregate(records, strata=("game", "seat", "pair"), resamples: int = 10_000, seed: int = 0) -> ScoreTable:
    """Mean binary score of each evaluated algorithm, per game and overall, with 95% CIs."""
    by_algo = defaultdict(list)
    for rec in records:
        if rec.evaluated_seat < 0:
            continue
        by_algo[rec.algorithm].append(rec)
    table = ScoreTable(resamples=resamples, seed=seed)
    for algo in sorted(by_algo):
        recs = sorted(by_algo[algo], key=lambda r: r.key)
        by_game = defaultdict(list)
        for r in recs:
            by_game[r.game].append(r)
        for game in sorted(by_game):
            groups = group_strata(by_game[game], strata)
            mean, lo, hi = stratified_bootstrap(groups, resamples, seed)
            table.rows.append(ScoreRow(algo, game, len(by_game[game]), mean, lo, hi))
        parts = tuple(strata) if "game" in strata else ("game",) + tuple(strata)
        mean, lo, hi = stratified_bootstrap(group_strata(recs, parts), resamples, seed)
        table.rows.append(ScoreRow(algo, "ALL", len(recs), mean, lo, hi))
    return table
