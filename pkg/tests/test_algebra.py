"""Stratified algebras: validation, dilations, the group law, frames, homs."""

from __future__ import annotations

import random

import pytest

from carnot.algebra import (
    GradedHom,
    StratifiedAlgebra,
    bch_product,
    dilation_apply,
    frame_apply,
    group_product,
    hom_check,
    left_invariant_frame,
    validate_algebra,
)
from carnot.groups import abelian, engel, h1_x_r, heisenberg, nonstratifiable_5d
from carnot.poly import Poly
from carnot.scalars import rat


def test_heisenberg_is_carnot_with_q4():
    report = validate_algebra(heisenberg())
    assert report.stratified
    assert report.homogeneous_dimension == 4
    assert report.summary() == "valid Carnot algebra, Q=4"


def test_h1xr_is_carnot_with_q5():
    report = validate_algebra(h1_x_r())
    assert report.stratified
    assert report.homogeneous_dimension == 5


def test_grading_violation_reported():
    bad = StratifiedAlgebra(weights=(1, 1, 1), brackets=[(1, 2, [(3, 1)])])
    report = validate_algebra(bad)
    assert not report.graded_ok
    assert (1, 2, 3) in report.grading_failures


def test_jacobi_violation_reported():
    # [X1,[X2,X3]] + [X2,[X3,X1]] + [X3,[X1,X2]] = X3 for this table
    bad = StratifiedAlgebra(
        weights=(1, 1, 1),
        brackets=[(1, 2, [(3, 1)]), (2, 3, [(1, 1)]), (1, 3, [(1, 1)])],
    )
    report = validate_algebra(bad)
    assert report.jacobi_failures
    assert not validate_algebra(engel()).jacobi_failures


def test_nonstratifiable_grading_accepted_with_flag():
    report = validate_algebra(nonstratifiable_5d())
    assert report.graded_ok
    assert not report.stratified
    assert not report.layer_one_generates


def test_dilations_scale_by_layer_weight():
    h1 = heisenberg()
    lam = dilation_apply(h1, [1, 0, 0])
    assert str(lam[0]) == "lam"
    lam_t = dilation_apply(h1, [0, 0, 1])
    assert str(lam_t[2]) == "lam^2"
    assert all(p.is_zero() for p in dilation_apply(h1, [0, 0, 0]))


def test_dilation_is_automorphism():
    # delta_lambda [u, v] = [delta_lambda u, delta_lambda v] as a polynomial identity
    for algebra in (heisenberg(), h1_x_r(), engel(), nonstratifiable_5d()):
        rng = random.Random(5)
        u = [rat(rng.randint(-3, 3)) for _ in range(algebra.dim)]
        v = [rat(rng.randint(-3, 3)) for _ in range(algebra.dim)]
        lhs = dilation_apply(algebra, algebra.bracket(u, v))
        rhs = algebra.bracket(dilation_apply(algebra, u), dilation_apply(algebra, v))
        assert lhs == rhs


def test_bch_identity_element():
    h1 = heisenberg()
    law = bch_product(h1)
    ring = h1.double_ring()
    x = [ring.variable(j) for j in range(3)]
    zero = [ring.zero()] * 3
    at_zero = group_product(h1, x, zero)
    assert list(at_zero) == x


def test_bch_heisenberg_third_coordinate():
    h1 = heisenberg()
    law = bch_product(h1)
    ring = h1.double_ring()
    x = [ring.variable(j) for j in range(3)]
    y = [ring.variable(3 + j) for j in range(3)]
    expected = x[2] + y[2] + (x[0] * y[1] - x[1] * y[0]) * rat(1, 2)
    assert law[2] == expected


def test_bch_inverse():
    for algebra in (heisenberg(), engel()):
        rng = random.Random(9)
        pt = [rat(rng.randint(-4, 4)) for _ in range(algebra.dim)]
        inv = [-c for c in pt]
        assert group_product(algebra, pt, inv) == [0] * algebra.dim


def test_bch_associativity_symbolic():
    # (x*y)*z = x*(y*z) as polynomial identities, via substitution
    for algebra in (heisenberg(), h1_x_r(), engel(), nonstratifiable_5d()):
        n = algebra.dim
        names = [f"a{i}" for i in range(n)] + [f"b{i}" for i in range(n)] + [f"c{i}" for i in range(n)]
        from carnot.poly import PolyRing

        ring = PolyRing(names, algebra.weights * 3)
        a = [ring.variable(i) for i in range(n)]
        b = [ring.variable(n + i) for i in range(n)]
        c = [ring.variable(2 * n + i) for i in range(n)]
        left = group_product(algebra, group_product(algebra, a, b), c)
        right = group_product(algebra, a, group_product(algebra, b, c))
        assert left == right


def test_frame_heisenberg_explicit():
    h1 = heisenberg()
    frame = left_invariant_frame(h1)
    ring = h1.ring()
    x1, x2, _ = ring.gens()
    assert list(frame[0]) == [ring.one(), ring.zero(), x2 * rat(-1, 2)]
    assert list(frame[1]) == [ring.zero(), ring.one(), x1 * rat(1, 2)]
    assert list(frame[2]) == [ring.zero(), ring.zero(), ring.one()]


def test_frame_abelian_is_coordinate_frame():
    r3 = abelian(3)
    frame = left_invariant_frame(r3)
    ring = r3.ring()
    for j in range(3):
        expected = [ring.one() if k == j else ring.zero() for k in range(3)]
        assert list(frame[j]) == expected


def test_frame_central_direction_h1xr():
    frame = left_invariant_frame(h1_x_r())
    ring = h1_x_r().ring()
    assert list(frame[2]) == [ring.zero(), ring.zero(), ring.one(), ring.zero()]


def test_frame_represents_brackets_as_derivations():
    # [X_i, X_j] f = sum_k c^k_ij X_k f on a generating family of polynomials
    for algebra in (heisenberg(), h1_x_r(), engel(), nonstratifiable_5d()):
        ring = algebra.ring()
        probes = [ring.monomial(e) for e in ring.monomials_up_to(3) if any(e)]
        for i in range(1, algebra.dim + 1):
            for j in range(i + 1, algebra.dim + 1):
                table = algebra.bracket_basis(i, j)
                for f in probes:
                    commutator = frame_apply(algebra, i, frame_apply(algebra, j, f)) - frame_apply(
                        algebra, j, frame_apply(algebra, i, f)
                    )
                    expected = ring.zero()
                    for k, c in table.items():
                        expected = expected + frame_apply(algebra, k, f) * c
                    assert commutator == expected


def test_frame_coefficients_weight_homogeneous():
    for algebra in (heisenberg(), h1_x_r(), engel(), nonstratifiable_5d()):
        frame = left_invariant_frame(algebra)
        for j in range(algebra.dim):
            for k in range(algebra.dim):
                coeff = frame[j][k]
                if coeff.is_zero():
                    continue
                target = algebra.weights[k] - algebra.weights[j]
                comps = coeff.weight_components()
                assert list(comps) == [target]


def test_hom_check_identity_and_swap():
    h1 = heisenberg()
    eye = [[rat(int(i == j)) for j in range(3)] for i in range(3)]
    assert hom_check(GradedHom(h1, h1, eye)).ok
    swap = [[rat(0), rat(1), rat(0)], [rat(1), rat(0), rat(0)], [rat(0), rat(0), rat(1)]]
    report = hom_check(GradedHom(h1, h1, swap))
    assert not report.ok
    assert report.bracket_failure == (1, 2)


def test_hom_check_paper_shear_matrix():
    h4 = h1_x_r()
    matrix = [
        [rat(1), rat(0), rat(0), rat(0)],
        [rat(0), rat(1), rat(0), rat(0)],
        [rat(0), rat(1), rat(1), rat(0)],
        [rat(0), rat(0), rat(0), rat(1)],
    ]
    assert hom_check(GradedHom(h4, h4, matrix)).ok


def test_antisymmetry_issue_reported():
    bad = StratifiedAlgebra(
        weights=(1, 1, 2),
        brackets=[(1, 2, [(3, 1)]), (2, 1, [(3, 1)])],
    )
    report = validate_algebra(bad)
    assert report.antisymmetry_issues
