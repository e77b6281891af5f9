"""The exact linear algebra kernel behind every membership solve."""

from __future__ import annotations

import random

from carnot.linalg import Subspace, dot, nullspace, rref, solve, solve_full
from carnot.scalars import rat


def _rand_matrix(rng, rows, cols):
    return [[rat(rng.randint(-4, 4)) for _ in range(cols)] for _ in range(rows)]


def test_rref_pivots_are_unit_columns():
    m = [[rat(2), rat(4), rat(0)], [rat(1), rat(2), rat(1)]]
    red, pivots = rref(m)
    assert pivots == [0, 2]
    for r, p in enumerate(pivots):
        col = [row[p] for row in red]
        assert col == [rat(1) if i == r else rat(0) for i in range(len(red))]


def test_solve_and_nullspace_consistency():
    rng = random.Random(3)
    for _ in range(25):
        a = _rand_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        x = [rat(rng.randint(-3, 3)) for _ in range(len(a[0]))]
        b = [dot(row, x) for row in a]
        sol, null = solve_full(a, b)
        assert sol is not None
        assert [dot(row, sol) for row in a] == b
        for v in null:
            assert all(dot(row, v) == 0 for row in a)
        # rank-nullity
        _, pivots = rref(a)
        assert len(pivots) + len(null) == len(a[0])


def test_inconsistent_system_detected():
    a = [[rat(1), rat(1)], [rat(1), rat(1)]]
    assert solve(a, [rat(0), rat(1)]) is None


def test_subspace_membership_and_equality():
    v1 = [rat(1), rat(0), rat(1)]
    v2 = [rat(0), rat(1), rat(1)]
    s = Subspace(3, [v1, v2])
    assert s.contains([rat(1), rat(1), rat(2)])
    assert not s.contains([rat(0), rat(0), rat(1)])
    same = Subspace(3, [[a + b for a, b in zip(v1, v2)], v2])
    assert s == same


def test_complement_and_intersection():
    s = Subspace(3, [[rat(1), rat(0), rat(0)], [rat(0), rat(1), rat(0)]])
    c = s.complement()
    assert c.dim == 1
    assert c.contains([rat(0), rat(0), rat(5)])
    t = Subspace(3, [[rat(0), rat(1), rat(0)], [rat(0), rat(0), rat(1)]])
    meet = s.intersect(t)
    assert meet.dim == 1
    assert meet.contains([rat(0), rat(3), rat(0)])


def test_projection_is_orthogonal():
    rng = random.Random(11)
    for _ in range(15):
        basis = _rand_matrix(rng, 2, 4)
        s = Subspace(4, basis)
        v = [rat(rng.randint(-5, 5)) for _ in range(4)]
        p = s.project(v)
        assert s.contains(p)
        residue = [a - b for a, b in zip(v, p)]
        assert all(dot(row, residue) == 0 for row in s.basis)
