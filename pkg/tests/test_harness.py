"""Tournament protocol: schedule, matches, scoring, bootstrap, persistence, CLI."""

import json
import math
import os
import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from umaxn.cli import main
from umaxn.core import ConfigError
from umaxn.games import make_game
from umaxn.harness import (
    aggregate,
    binary_score,
    config_from_dict,
    play_match,
    read_records,
    replay,
    run_experiment,
    schedule,
    schedule_count,
    stratified_bootstrap,
    write_report,
)
from umaxn.harness.config import AgentSpec, env_output_dir, env_workers
from umaxn.harness.match import STATUS_FORFEIT, MatchRecord, Seat
from umaxn.harness.report import format_table
from umaxn.search import SearchResult

DESK = {
    "name": "desk",
    "games": [{"game": "threehex", "config": {"side": 2}}],
    "evaluated": ["umaxn-safe", "maxn"],
    "benchmark": "maxn",
    "budget": {"nodes": 200},
    "E": 2,
    "seed": 7,
    "resamples": 500,
}


def record(winners, P=3, status="ok", forfeit_seat=None):
    return MatchRecord(key="k", game="g", config={}, seats=["a"] * P, evaluators=["-"] * P, evaluated_seat=0,
                       i=0, j=0, seed=0, winners=list(winners), status=status, forfeit_seat=forfeit_seat)


# -- schedule ------------------------------------------------------------------


def test_schedule_counts():
    assert schedule_count(3, 30) == 2700
    assert schedule_count(4, 30) == 3600
    assert schedule_count(3, 2) == 12


def test_schedule_covers_each_cell_once():
    cfg = config_from_dict({**DESK, "E": 3, "evaluated": ["maxn"]})
    plan = schedule(cfg)
    assert len(plan) == schedule_count(3, 3)
    cells = Counter((a.seat, a.i, a.j) for a in plan)
    assert set(cells.values()) == {1}
    assert len(cells) == 27
    assert len({a.key for a in plan}) == len(plan)


def test_opponent_indices_wrap():
    cfg = config_from_dict({**DESK, "games": [{"game": "quadrothello", "config": {"n": 6}}], "E": 3,
                            "evaluated": ["maxn"]})
    a = next(a for a in schedule(cfg) if a.seat == 1 and a.i == 0 and a.j == 2)
    # evaluated seat 1 uses i; the others, in seat order, use j, j+1, j+2 (mod E)
    assert a.indices == [2, 0, 0, 1]
    assert [s.algorithm for s in a.agents] == ["maxn"] * 4


# -- scoring -------------------------------------------------------------------


def test_binary_score_fixtures():
    sole = record([1])
    assert [binary_score(sole, p) for p in range(3)] == [-1, 1, -1]
    tie = record([0, 2])
    assert [binary_score(tie, p) for p in range(3)] == [1, -1, 1]
    everyone = record([0, 1, 2])
    assert [binary_score(everyone, p) for p in range(3)] == [0, 0, 0]
    draw = record([])
    assert [binary_score(draw, p) for p in range(3)] == [0, 0, 0]
    forfeit = record([], status=STATUS_FORFEIT, forfeit_seat=2)
    assert [binary_score(forfeit, p) for p in range(3)] == [0, 0, -1]
    team = record([0, 2], P=4)
    assert [binary_score(team, p) for p in range(4)] == [1, -1, 1, -1]


@given(P=st.integers(2, 4), data=st.data())
def test_score_conservation(P, data):
    winners = data.draw(st.sets(st.integers(0, P - 1)))
    rec = record(sorted(winners), P)
    scores = [binary_score(rec, p) for p in range(P)]
    assert all(s in (-1, 0, 1) for s in scores)
    assert sum(scores) <= P
    if len(winners) == 1:
        assert sum(scores) == 2 - P


class _Broken(Seat):
    def __init__(self, mode):
        self.spec = AgentSpec("random", 1)
        self.evaluator_id = "-"
        self.mode = mode

    def choose(self, game, state, seed, trace=None):
        if self.mode == "raise":
            raise RuntimeError("boom")
        return SearchResult(chosen=(99, 99))


@pytest.mark.parametrize("mode", ["raise", "illegal"])
def test_forfeit_is_recorded(mode):
    g = make_game("trinim", {"heaps": [3]})
    rnd = AgentSpec("random", 1)
    rec = play_match(g, [rnd, _Broken(mode), rnd], seed=1)
    assert rec.status == STATUS_FORFEIT and rec.forfeit_seat == 1
    assert rec.outcome is None
    assert [binary_score(rec, p) for p in range(3)] == [0, -1, 0]
    assert replay(rec) is None


def test_random_bandit_outcome_frequencies():
    g = make_game("bandit")
    rnd = AgentSpec("random", 1)
    N = 10_000
    counts = Counter(play_match(g, [rnd] * 3, seed=s).moves[0] for s in range(N))
    A = len(g.payoffs)
    p = 1.0 / A
    sigma = math.sqrt(N * p * (1 - p))
    assert len(counts) == A
    for arm in range(A):
        assert abs(counts[repr(arm)] - N * p) <= 3 * sigma


def test_match_replay_and_determinism():
    g = make_game("threehex", {"side": 2})
    agents = [AgentSpec("umaxn-safe", 150), AgentSpec("maxn", 150), AgentSpec("mcts:sqrt2/4", 150)]
    a = play_match(g, agents, seed=3, indices=[0, 1, 0])
    b = play_match(g, agents, seed=3, indices=[0, 1, 0])
    assert a.comparable() == b.comparable()
    assert replay(a) == (a.outcome, a.win_loss)
    rt = MatchRecord.from_json(json.loads(json.dumps(a.to_json())))
    assert rt.comparable() == a.comparable()


def test_wrong_agent_count():
    with pytest.raises(ValueError):
        play_match(make_game("bandit"), [AgentSpec("random", 1)])


# -- bootstrap -------------------------------------------------------------------


def test_bootstrap_identical_scores():
    assert stratified_bootstrap([[1, 1, 1], [1, 1]], 200, seed=0) == (1.0, 1.0, 1.0)
    assert stratified_bootstrap([[-1] * 5], 200, seed=0) == (-1.0, -1.0, -1.0)


def test_bootstrap_deterministic_and_ordered():
    rng = random.Random(0)
    strata = [[rng.choice([-1, 0, 1]) for _ in range(8)] for _ in range(6)]
    a = stratified_bootstrap(strata, 2000, seed=5)
    assert a == stratified_bootstrap(strata, 2000, seed=5)
    mean, lo, hi = a
    assert -1 <= lo <= mean <= hi <= 1
    assert mean == pytest.approx(np.mean(sum(strata, [])))


def test_bootstrap_matches_index_resampling():
    # multinomial draws and index draws give the same distribution
    rng = np.random.default_rng(1)
    strata = [list(rng.choice([-1, 0, 1], size=12)) for _ in range(3)]
    _, lo, hi = stratified_bootstrap(strata, 20_000, seed=2)
    flat = np.concatenate([np.asarray(s, float) for s in strata])
    means = np.zeros(20_000)
    for s in strata:
        s = np.asarray(s, float)
        means += s[rng.integers(0, len(s), size=(20_000, len(s)))].sum(axis=1)
    means /= len(flat)
    lo2, hi2 = np.quantile(means, [0.025, 0.975])
    assert lo == pytest.approx(lo2, abs=0.03) and hi == pytest.approx(hi2, abs=0.03)


def test_bootstrap_empty():
    with pytest.raises(ValueError):
        stratified_bootstrap([[], []])


# -- tournaments -----------------------------------------------------------------


@pytest.fixture(scope="module")
def desk_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("desk")
    return run_experiment(config_from_dict(DESK), output_dir=str(out))


def test_desk_pipeline(desk_run):
    res = desk_run
    assert len(res.records) == 2 * schedule_count(3, 2)
    assert not res.missing
    assert res.table.algorithms == ["maxn", "umaxn-safe"]
    for r in res.table.rows:
        assert -1 <= r.lower <= r.mean <= r.upper <= 1
    for rec in res.records:
        assert replay(rec) == (rec.outcome, rec.win_loss)
    assert "mean" in format_table(res.table)


def test_reproducible_across_runs(desk_run, tmp_path):
    again = run_experiment(config_from_dict(DESK), output_dir=str(tmp_path))
    assert [r.comparable() for r in again.records] == [r.comparable() for r in desk_run.records]
    assert again.table.rows == desk_run.table.rows


def test_resume_equals_uninterrupted(desk_run, tmp_path):
    cfg = config_from_dict(DESK)
    part = run_experiment(cfg, output_dir=str(tmp_path), max_matches=12)
    assert len(part.missing) == 12
    with pytest.raises(FileExistsError):
        run_experiment(cfg, output_dir=str(tmp_path))
    # a torn final line from an interruption is dropped
    with open(tmp_path / "records.jsonl", "a") as fh:
        fh.write('{"key": "torn')
    full = run_experiment(cfg, output_dir=str(tmp_path), resume=True)
    assert full.table.rows == desk_run.table.rows
    assert len(read_records(tmp_path / "records.jsonl")) == 24
    # resuming a finished run is a no-op
    again = run_experiment(cfg, output_dir=str(tmp_path), resume=True)
    assert len(read_records(tmp_path / "records.jsonl")) == 24
    assert again.table.rows == full.table.rows


def test_aggregation_is_order_invariant(desk_run):
    recs = list(desk_run.records)
    random.Random(4).shuffle(recs)
    assert aggregate(recs, resamples=500, seed=7).rows == desk_run.table.rows


def test_report_files(desk_run, tmp_path):
    paths = write_report(desk_run.table, tmp_path)
    assert set(paths) == {"txt", "csv", "png"}
    for p in paths.values():
        assert os.path.getsize(p) > 0
    with open(paths["png"], "rb") as fh:
        assert fh.read(8) == b"\x89PNG\r\n\x1a\n"
    with open(paths["csv"]) as fh:
        lines = fh.read().splitlines()
    assert lines[0].startswith("algorithm,game,n,mean,lower,upper")
    assert len(lines) == 1 + len(desk_run.table.rows)


# -- config ----------------------------------------------------------------------


@pytest.mark.parametrize("patch,field", [
    ({"E": 0}, "E"),
    ({"games": [{"game": "chess"}]}, "games[0].game"),
    ({"games": [{"game": "threehex", "config": {"side": 0}}]}, "games[0].config"),
    ({"evaluated": ["maxn", {"algorithm": "kbest:x"}]}, "evaluated[1]"),
    ({"evaluated": [{"algorithm": "maxn", "budget": {"nodes": -1}}]}, "evaluated[0]"),
    ({"evaluated": []}, "evaluated"),
    ({"colour": "blue"}, "config"),
    ({"resamples": 0}, "resamples"),
])
def test_config_errors_name_the_field(patch, field):
    with pytest.raises(ConfigError, match=field.replace("[", r"\[").replace("]", r"\]")):
        config_from_dict({**DESK, **patch})


def test_short_time_rerun_changes_only_budget():
    a = config_from_dict({**DESK, "budget": {"seconds": 10}})
    b = config_from_dict({**DESK, "budget": {"seconds": 1}})
    assert a.evaluated[0].budget_seconds == 10 and b.evaluated[0].budget_seconds == 1
    da, db = a.to_dict(), b.to_dict()
    for d in (da, db):
        for agent in d["evaluated"] + [d["benchmark"]]:
            agent.pop("budget_seconds")
    assert da == db


def test_env_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("UMAXN_WORKERS", "3")
    assert env_workers(1) == 3
    monkeypatch.setenv("UMAXN_WORKERS", "zero")
    with pytest.raises(ConfigError):
        env_workers(1)
    monkeypatch.delenv("UMAXN_WORKERS")
    assert env_workers(2) == 2
    monkeypatch.setenv("UMAXN_OUTPUT_DIR", str(tmp_path / "env"))
    assert env_output_dir("results") == str(tmp_path / "env")
    cfg = config_from_dict({**DESK, "evaluated": ["random"], "benchmark": "random"})
    res = run_experiment(cfg)
    assert res.output_dir == str(tmp_path / "env")
    assert os.path.exists(tmp_path / "env" / "records.jsonl")


def test_parallel_workers_match_serial(tmp_path):
    cfg = config_from_dict({**DESK, "evaluated": ["maxn"]})
    a = run_experiment(cfg, output_dir=str(tmp_path / "a"), workers=1)
    b = run_experiment(cfg, output_dir=str(tmp_path / "b"), workers=2)
    assert [r.comparable() for r in a.records] == [r.comparable() for r in b.records]


# -- CLI -------------------------------------------------------------------------


def test_cli_solve(capsys, tmp_path):
    path = tmp_path / "nim.bin"
    assert main(["solve", "trinim", "initial", "--config", '{"heaps": [4]}', "--save", str(path)]) == 0
    out = capsys.readouterr().out
    assert "value [-1.0, -1.0, 1.0]" in out
    assert os.path.exists(path)
    assert main(["solve", "trinim", "initial", "--config", '{"heaps": [6, 6]}', "--cap", "10"]) == 2


def test_cli_perft_and_bench(capsys):
    assert main(["perft", "trinim", "2", "--config", '{"heaps": [3]}']) == 0
    out = capsys.readouterr().out
    assert "depth 1 2" in out and "depth 2 3" in out
    assert main(["bench", "threehex", "umaxn-safe", "--config", '{"side": 2}', "--nodes", "100",
                 "--moves", "2"]) == 0
    assert "total nodes" in capsys.readouterr().out


def test_cli_run_and_report(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({**DESK, "evaluated": ["maxn"]}))
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out), "--quiet", "--seed", "3"]) == 0
    assert os.path.exists(out / "scores.png")
    capsys.readouterr()
    assert main(["report", str(out / "records.jsonl"), "--resamples", "200"]) == 0
    assert "maxn" in capsys.readouterr().out
    # a second run into the same directory refuses without --resume
    assert main(["run", str(cfg), "--out", str(out), "--quiet"]) == 2
    assert main(["run", str(cfg), "--out", str(out), "--quiet", "--resume", "--seed", "3"]) == 0


def test_cli_errors(capsys):
    assert main(["perft", "chess", "1"]) == 2
    assert "error" in capsys.readouterr().err


CONFIG_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def test_shipped_configs_load():
    from umaxn.harness import load_config

    for name in ("desk", "directional", "full-10s", "full-1s"):
        load_config(os.path.join(CONFIG_DIR, f"{name}.json"))
    with open(os.path.join(CONFIG_DIR, "full-10s.json")) as fh:
        long = json.load(fh)
    with open(os.path.join(CONFIG_DIR, "full-1s.json")) as fh:
        short = json.load(fh)
    changed = {k for k in long.keys() | short.keys() if long.get(k) != short.get(k)}
    assert changed == {"budget", "name", "output"}
    assert short["budget"] == {"seconds": 1}
