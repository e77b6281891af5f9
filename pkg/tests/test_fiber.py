"""The invariant exterior algebra: wedge, d0, delta0, box0, star, projections."""

from __future__ import annotations

import random

import pytest

from carnot.fiber import (
    FiberForm,
    box0,
    d0,
    d0_pinv,
    delta0,
    form_weights,
    hodge_decompose,
    hodge_star,
    index_weight,
    indices,
    indices_by_weight,
    pi0,
    volume_form,
)
from carnot.groups import abelian, engel, h1_x_r, heisenberg, nonstratifiable_5d
from carnot.linalg import Subspace, dot
from carnot.scalars import rat

GROUPS = (heisenberg(), h1_x_r(), nonstratifiable_5d())


def _random_form(rng, algebra, degree):
    coeffs = {}
    for I in indices(algebra, degree):
        c = rng.randint(-3, 3)
        if c:
            coeffs[I] = rat(c)
    return FiberForm(algebra, degree, coeffs)


def test_wedge_repeated_factor_vanishes():
    h1 = heisenberg()
    th1 = FiberForm.monomial(h1, (1,))
    th2 = FiberForm.monomial(h1, (2,))
    assert th1.wedge(th2).wedge(th1).is_zero()


def test_wedge_antisymmetry_and_weight():
    h1 = heisenberg()
    th1 = FiberForm.monomial(h1, (1,))
    th2 = FiberForm.monomial(h1, (2,))
    tau = FiberForm.monomial(h1, (3,))
    assert th2.wedge(th1) == -th1.wedge(th2)
    assert th1.wedge(tau).weight() == 3


def test_d0_on_heisenberg():
    h1 = heisenberg()
    assert d0(FiberForm.monomial(h1, (3,))) == -FiberForm.monomial(h1, (1, 2))
    assert d0(FiberForm.monomial(h1, (1,))).is_zero()


def test_d0_squared_zero_random():
    rng = random.Random(2)
    for algebra in GROUPS:
        for degree in range(algebra.dim):
            form = _random_form(rng, algebra, degree)
            assert d0(d0(form)).is_zero()


def test_d0_preserves_weight():
    for algebra in GROUPS:
        for degree in range(algebra.dim):
            for I in indices(algebra, degree):
                image = d0(FiberForm.monomial(algebra, I))
                if not image.is_zero():
                    assert image.weight() == index_weight(algebra, I)


def test_delta0_examples():
    h1 = heisenberg()
    assert delta0(FiberForm.monomial(h1, (1, 2))) == -FiberForm.monomial(h1, (3,))
    assert delta0(FiberForm.monomial(h1, (1,))).is_zero()


def test_delta0_is_adjoint_of_d0():
    rng = random.Random(4)
    for algebra in GROUPS:
        for degree in range(algebra.dim):
            alpha = _random_form(rng, algebra, degree)
            beta = _random_form(rng, algebra, degree + 1)
            cell = indices(algebra, degree + 1)
            lhs = sum(
                (d0(alpha).coeffs.get(I, rat(0)) * beta.coeffs.get(I, rat(0)) for I in cell),
                start=rat(0),
            )
            cell2 = indices(algebra, degree)
            rhs = sum(
                (alpha.coeffs.get(I, rat(0)) * delta0(beta).coeffs.get(I, rat(0)) for I in cell2),
                start=rat(0),
            )
            assert lhs == rhs


def test_box0_examples():
    h1 = heisenberg()
    assert box0(FiberForm.monomial(h1, (1, 3))).is_zero()
    t12 = FiberForm.monomial(h1, (1, 2))
    assert box0(t12) == t12
    assert box0(FiberForm.monomial(h1, ())).is_zero()


def test_hodge_decompose_heisenberg_cells():
    h1 = heisenberg()
    split = hodge_decompose(h1, 2, 2)
    assert [str(f) for f in split.image_d0] == ["θ1∧θ2"]
    assert not split.harmonic and not split.image_delta0
    split3 = hodge_decompose(h1, 2, 3)
    assert {str(f) for f in split3.harmonic} == {"θ1∧θ3", "θ2∧θ3"}


def test_hodge_decompose_h1xr_degree1():
    h4 = h1_x_r()
    split = hodge_decompose(h4, 1, 1)
    assert {str(f) for f in split.harmonic} == {"θ1", "θ2", "θ3"}


def test_d0_pinv_examples():
    h1 = heisenberg()
    t12 = FiberForm.monomial(h1, (1, 2))
    assert d0_pinv(t12) == -FiberForm.monomial(h1, (3,))
    assert d0_pinv(FiberForm.monomial(h1, (1, 3))).is_zero()


def test_d0_pinv_squared_zero():
    rng = random.Random(6)
    for algebra in GROUPS:
        for degree in range(2, algebra.dim + 1):
            form = _random_form(rng, algebra, degree)
            assert d0_pinv(d0_pinv(form)).is_zero()


def test_pi0_examples_and_idempotence():
    h1 = heisenberg()
    assert pi0(FiberForm.monomial(h1, (1, 2))).is_zero()
    t13 = FiberForm.monomial(h1, (1, 3))
    assert pi0(t13) == t13
    rng = random.Random(8)
    for algebra in GROUPS:
        for degree in range(algebra.dim + 1):
            form = _random_form(rng, algebra, degree)
            assert pi0(pi0(form)) == pi0(form)


def test_hodge_star_examples():
    h1 = heisenberg()
    one = FiberForm.monomial(h1, ())
    assert hodge_star(one) == volume_form(h1)
    assert volume_form(h1).weight() == h1.homogeneous_dimension
    th1 = FiberForm.monomial(h1, (1,))
    assert hodge_star(th1) == FiberForm.monomial(h1, (2, 3))
    assert hodge_star(hodge_star(th1)) == th1


def test_double_star_sign():
    rng = random.Random(10)
    for algebra in GROUPS:
        n = algebra.dim
        for k in range(n + 1):
            form = _random_form(rng, algebra, k)
            sign = (-1) ** (k * (n - k))
            assert hodge_star(hodge_star(form)) == form * sign


def test_star_weight_complementary():
    for algebra in GROUPS:
        Q = algebra.homogeneous_dimension
        for k in range(algebra.dim + 1):
            for I in indices(algebra, k):
                image = hodge_star(FiberForm.monomial(algebra, I))
                assert image.weight() == Q - index_weight(algebra, I)


def test_delta0_equals_signed_star_d0_star():
    # delta_0 = (-1)^{n(k-1)+1} star d_0 star on k-forms, exactly
    for algebra in GROUPS:
        n = algebra.dim
        for k in range(1, n + 1):
            sign = (-1) ** (n * (k - 1) + 1)
            for I in indices(algebra, k):
                form = FiberForm.monomial(algebra, I)
                assert delta0(form) == hodge_star(d0(hodge_star(form))) * sign


def test_star_permutes_hodge_summands():
    # star ker box = ker box, star Im d0 = Im delta0, star Im delta0 = Im d0
    for algebra in GROUPS:
        n = algebra.dim
        Q = algebra.homogeneous_dimension
        for k in range(n + 1):
            for p in form_weights(algebra, k):
                split = hodge_decompose(algebra, k, p)
                dual = hodge_decompose(algebra, n - k, Q - p)
                cell = indices_by_weight(algebra, n - k, Q - p)

                def span(forms):
                    return Subspace(
                        len(cell), [[f.coeffs.get(I, rat(0)) for I in cell] for f in forms]
                    )

                starred = lambda forms: span([hodge_star(f) for f in forms])
                assert starred(split.harmonic) == span(dual.harmonic)
                assert starred(split.image_d0) == span(dual.image_delta0)
                assert starred(split.image_delta0) == span(dual.image_d0)


def test_projection_matrix_identities():
    # d0 d0^{-1} = pr_{Im d0} and d0^{-1} d0 = pr_{Im delta0} on every bidegree
    rng = random.Random(12)
    for algebra in GROUPS:
        for k in range(algebra.dim + 1):
            for p in form_weights(algebra, k):
                split = hodge_decompose(algebra, k, p)
                cell = indices_by_weight(algebra, k, p)
                im = Subspace(len(cell), [[f.coeffs.get(I, rat(0)) for I in cell] for f in split.image_d0])
                de = Subspace(len(cell), [[f.coeffs.get(I, rat(0)) for I in cell] for f in split.image_delta0])
                for _ in range(3):
                    coeffs = {I: rat(rng.randint(-3, 3)) for I in cell}
                    form = FiberForm(algebra, k, coeffs)
                    vec = [form.coeffs.get(I, rat(0)) for I in cell]
                    lower = d0(d0_pinv(form)) if k > 0 else FiberForm.zero(algebra, 0)
                    upper = d0_pinv(d0(form))
                    assert [lower.coeffs.get(I, rat(0)) for I in cell] == im.project(vec)
                    assert [upper.coeffs.get(I, rat(0)) for I in cell] == de.project(vec)


def test_distinct_weight_components_independent():
    # concatenated bases of different-weight cells stay linearly independent
    for algebra in GROUPS:
        for k in range(algebra.dim + 1):
            rows = []
            cell = indices(algebra, k)
            for p in form_weights(algebra, k):
                for I in indices_by_weight(algebra, k, p):
                    rows.append([rat(int(I == J)) for J in cell])
            assert Subspace(len(cell), rows).dim == len(rows)


def test_hodge_summands_orthogonal_and_spanning():
    for algebra in GROUPS:
        for k in range(algebra.dim + 1):
            for p in form_weights(algebra, k):
                split = hodge_decompose(algebra, k, p)
                cell = indices_by_weight(algebra, k, p)
                vec = lambda f: [f.coeffs.get(I, rat(0)) for I in cell]
                groups = [split.image_d0, split.harmonic, split.image_delta0]
                total = sum(len(g) for g in groups)
                assert total == len(cell)
                for a in range(3):
                    for b in range(a + 1, 3):
                        for f in groups[a]:
                            for g in groups[b]:
                                assert dot(vec(f), vec(g)) == 0
