"""Generating sets and metric balls, with an independent BFS oracle."""

import pytest

from conformist.balls import BallSizeError, ball, generating_set
from conformist.elements import identity_elem, inverse, multiply, role_models, t_power


def test_lamp_t_genset(z3):
    gens = generating_set(z3, "lamp-t")
    assert len(gens) == 6
    assert identity_elem(z3) not in gens
    assert t_power(z3, 1) in gens and t_power(z3, -1) in gens
    assert {inverse(g) for g in gens} == set(gens)
    assert all(g.shift in (-1, 1) for g in gens)


def test_symmetric_genset(z3):
    gens = generating_set(z3, "symmetric")
    assert len(gens) == 4
    assert {inverse(g) for g in gens} == set(gens)
    shifts = sorted(g.shift for g in gens)
    assert shifts == [-1, 0, 0, 1]


def test_unknown_convention(z3):
    with pytest.raises(ValueError):
        generating_set(z3, "starburst")


def test_small_balls(z3):
    assert ball(z3, 0) == [identity_elem(z3)]
    b1 = ball(z3, 1)
    assert len(b1) == 2 * 3 + 1
    assert identity_elem(z3) in b1
    assert b1 == sorted(b1)
    b1s = ball(z3, 1, gens=generating_set(z3, "symmetric"))
    assert len(b1s) == 5


def _bfs_oracle(table, radius):
    """Independent ball count: dict lamps, generator action applied directly.

    Right multiplication by [v]_0 t sends (mu, k) to (mu * [v]_k, k + 1) and
    by its inverse to (mu * [v^-1]_{k-1}, k - 1); no library multiply involved.
    """
    def bump(lamps, pos, val):
        out = dict(lamps)
        v = table.mul(out.get(pos, 0), val)
        if v:
            out[pos] = v
        else:
            out.pop(pos, None)
        return tuple(sorted(out.items()))

    start = ((), 0)
    seen = {start}
    frontier = [start]
    for _ in range(radius):
        nxt = []
        for lamps, k in frontier:
            steps = [(bump(dict(lamps), k, v), k + 1) for v in range(table.order)]
            steps += [
                (bump(dict(lamps), k - 1, table.inv[v]), k - 1)
                for v in range(table.order)
            ]
            for st in steps:
                if st not in seen:
                    seen.add(st)
                    nxt.append(st)
        frontier = nxt
    return seen


def test_ball_matches_bfs_oracle(z3):
    for radius in (0, 1, 2, 3):
        got = ball(z3, radius)
        oracle = _bfs_oracle(z3, radius)
        assert len(got) == len(oracle)
        assert {(g.lamp, g.shift) for g in got} == oracle


def test_ball_closure_under_role_models(z3):
    # one role-model step costs one lamp-t generator
    b2 = set(ball(z3, 2))
    b3 = set(ball(z3, 3))
    for g in b2:
        for h in role_models(g):
            assert h in b3


def test_ball_is_symmetric(z3):
    b = ball(z3, 3)
    s = set(b)
    assert all(inverse(g) in s for g in b)


def test_ball_cap(z3):
    with pytest.raises(BallSizeError):
        ball(z3, 4, cap=20)


def test_negative_radius(z3):
    with pytest.raises(ValueError):
        ball(z3, -1)
