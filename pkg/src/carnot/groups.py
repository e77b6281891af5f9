"""Ready-made graded algebras used across tests, scenarios and docs."""

from __future__ import annotations

from .algebra import StratifiedAlgebra


def abelian(n: int) -> StratifiedAlgebra:
    """R^n with trivial brackets, all directions in layer 1."""
    return StratifiedAlgebra(
        weights=[1] * n,
        brackets=[],
        name=f"R^{n}",
    )


def heisenberg() -> StratifiedAlgebra:
    """The first Heisenberg algebra h^1: [X1, X2] = T, layers (1,1 | 2)."""
    return StratifiedAlgebra(
        weights=(1, 1, 2),
        brackets=[(1, 2, [(3, 1)])],
        labels=("X1", "X2", "T"),
        coordinates=("x1", "x2", "x3"),
        name="h1",
    )


def h1_x_r() -> StratifiedAlgebra:
    """h^1 x R: [X1, X2] = T with an extra central layer-1 direction X3."""
    return StratifiedAlgebra(
        weights=(1, 1, 1, 2),
        brackets=[(1, 2, [(4, 1)])],
        labels=("X1", "X2", "X3", "T"),
        coordinates=("x1", "x2", "x3", "t"),
        name="h1xR",
    )


def engel() -> StratifiedAlgebra:
    """The Engel algebra: [X1,X2] = X3, [X1,X3] = X4; step 3."""
    return StratifiedAlgebra(
        weights=(1, 1, 2, 3),
        brackets=[(1, 2, [(3, 1)]), (1, 3, [(4, 1)])],
        labels=("X1", "X2", "X3", "X4"),
        coordinates=("x1", "x2", "x3", "x4"),
        name="engel",
    )


def nonstratifiable_5d() -> StratifiedAlgebra:
    """The 5-dimensional extension of h^1 x R by theta2^theta3 + theta1^tau.

    Brackets [X1,X2] = T, [X1,T] = W, [X2,X3] = W.  It carries the homogeneous
    grading (1,1,2,2,3) but no stratification: layer 1 generates T yet never
    reaches X3.
    """
    return StratifiedAlgebra(
        weights=(1, 1, 2, 2, 3),
        brackets=[(1, 2, [(4, 1)]), (1, 4, [(5, 1)]), (2, 3, [(5, 1)])],
        labels=("X1", "X2", "X3", "T", "W"),
        coordinates=("x1", "x2", "x3", "t", "w"),
        name="nonstrat5",
    )
