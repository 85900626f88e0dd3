"""Exhaustive solvers: hand fixtures, caps, serialization, traversal independence."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _util import SeqGame, naive_paranoid
from umaxn.eval import ZeroEvaluator
from umaxn.games import make_game
from umaxn.games.toy import NimState
from umaxn.oracle import (
    OracleCapExceeded,
    SolvedTable,
    count_states,
    solve_maxn,
    solve_paranoid,
)

W, L = 1.0, -1.0

# TriNim heaps [4], three players; worked out by hand.
# key: (heap, mover, last) -> (value, best action)
NIM4_TABLE = {
    (4, 0, -1): ((L, L, W), (0, 1)),  # player 0 loses either way; lowest ordinal
    (3, 1, 0): ((L, L, W), (0, 1)),   # player 2 finishes whatever player 1 does
    (2, 1, 0): ((L, W, L), (0, 2)),
    (2, 2, 1): ((L, L, W), (0, 2)),
    (1, 2, 1): ((L, L, W), (0, 1)),
    (1, 0, 2): ((W, L, L), (0, 1)),
}


def test_terminal_base_case():
    g = make_game("trinim", {"heaps": [1]})
    end = g.apply(g.initial_state(), (0, 1))
    t = solve_maxn(g, end)
    e = t.root_entry
    assert e.value == g.terminal_payoff(end) == (W, L, L)
    assert e.best is None and e.mover == -1 and len(t) == 1


def test_one_ply_bandit_picks_best_row():
    g = make_game("bandit")
    e = solve_maxn(g).root_entry
    rows = g.payoffs
    want = max(range(len(rows)), key=lambda a: (rows[a][0], -a))
    assert e.best_index == want
    assert e.value == rows[want] == (0.6, 0.1, 0.3)


def test_trinim4_hand_table():
    g = make_game("trinim", {"heaps": [4]})
    t = solve_maxn(g)
    for (h, mover, last), (value, best) in NIM4_TABLE.items():
        e = t.lookup(g, NimState((h,), mover, last))
        assert (e.value, e.best) == (value, best), (h, mover, last)
    assert t.root_entry.value == (L, L, W)


def test_completion_key_on_win_loss_game():
    g = make_game("trinim", {"heaps": [4]})
    a = solve_maxn(g, key="value").root_entry
    b = solve_maxn(g, key="completion").root_entry
    # payoff equals the win/loss vector in TriNim, so the keys agree
    assert (a.value, a.best) == (b.value, b.best)
    assert b.completion == (L, L, W)


def test_count_states_fixtures():
    assert count_states(make_game("trinim", {"heaps": [3]})) == 6
    assert count_states(make_game("bandit")) == 5
    n = count_states(make_game("threehex", {"side": 2}))
    assert 1 < n <= 10**6


def test_cap_refusal():
    g = make_game("trinim", {"heaps": [5, 5]})
    assert count_states(g, cap=10) == 11
    with pytest.raises(OracleCapExceeded) as exc:
        solve_maxn(g, cap=10)
    assert exc.value.cap == 10 and exc.value.count > 10
    with pytest.raises(OracleCapExceeded):
        solve_paranoid(g, cap=10)


def test_bad_key():
    with pytest.raises(ValueError):
        solve_maxn(make_game("bandit"), key="nope")


def test_serialization_round_trip(tmp_path):
    g = make_game("trinim", {"heaps": [3, 2]})
    t = solve_maxn(g, key="completion")
    again = SolvedTable.from_bytes(t.to_bytes())
    assert again.entries == t.entries
    assert (again.game, again.config, again.key, again.root) == (t.game, t.config, t.key, t.root)
    path = tmp_path / "nim.bin"
    t.save(path)
    assert SolvedTable.load(path).entries == t.entries
    with pytest.raises(ValueError):
        SolvedTable.from_bytes(b"XXXX" + t.to_bytes()[4:])


def test_action_values_match_children():
    g = make_game("trinim", {"heaps": [3, 2]})
    t = solve_maxn(g)
    s = g.initial_state()
    av = t.action_values(g, s)
    p = s.mover
    e = t.root_entry
    assert av[e.best_index][1] == e.value
    assert max(v[p] for _, v in av) == e.value[p]


@pytest.mark.parametrize("name,config,plies", [
    ("trinim", {"heaps": [3, 3]}, 0),
    ("threehex", {"side": 2}, 0),
    ("quadrothello", {"n": 6}, 12),
])
def test_traversal_order_invariance(name, config, plies):
    # a subtree solved alone agrees with the same subtree inside the full solve
    g = make_game(name, config)
    rng = random.Random(2)
    base = g.initial_state()
    for _ in range(plies):
        base = g.apply(base, rng.choice(g.legal_actions(base)))
    assert not g.is_terminal(base)
    full = solve_maxn(g, base)
    for _ in range(10):
        s = base
        for _ in range(3):
            if g.is_terminal(s):
                break
            s = g.apply(s, rng.choice(g.legal_actions(s)))
        sub = solve_maxn(g, s)
        for z, e in sub.entries.items():
            assert full[z] == e


@given(heaps=st.lists(st.integers(1, 4), min_size=1, max_size=3), players=st.integers(2, 4))
def test_paranoid_matches_naive(heaps, players):
    g = make_game("trinim", {"heaps": heaps, "players": players})
    s = g.initial_state()
    v, a = solve_paranoid(g, s)
    depth = sum(heaps) + 1
    assert (v, a) == naive_paranoid(g, ZeroEvaluator(g), s, depth, s.mover)
    # the chosen action really achieves the value
    assert solve_paranoid(g, g.apply(s, a), root_player=s.mover)[0] == v


def test_paranoid_bandit_and_terminal():
    g = make_game("bandit")
    assert solve_paranoid(g) == (0.6, 1)
    end = g.apply(g.initial_state(), 3)
    assert solve_paranoid(g, end, root_player=2) == (0.6, None)


@given(seed=st.integers(0, 10**6))
def test_solver_values_are_terminal_payoffs(seed):
    g = SeqGame(players=3, branching=2, length=4, seed=seed)
    t = solve_maxn(g)
    terminals = {e.value for e in t.entries.values() if e.mover == -1}
    assert all(e.value in terminals for e in t.entries.values())
