"""Dense exact linear algebra over the rationals.

Everything downstream (Hodge decompositions, witness solves, membership
certificates) reduces to row reduction of modest matrices with Rational
entries, so a plain fraction-free-enough Gaussian elimination is all we need.
Subspaces are stored as reduced row echelon bases, which makes subspace
equality a representation equality.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalars import ONE, ZERO, Rational

Vector = list
Matrix = list


def zeros(n: int) -> Vector:
    return [ZERO] * n


def vec_add(u: Sequence, v: Sequence) -> Vector:
    return [a + b for a, b in zip(u, v)]

def vec_sub(u: Sequence, v: Sequence) -> Vector:
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, u: Sequence) -> Vector:
    return [c * a for a in u]


def dot(u: Sequence, v: Sequence) -> Rational:
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def mat_vec(rows: Sequence[Sequence], v: Sequence) -> Vector:
    return [dot(row, v) for row in rows]


def rref(rows: Iterable[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(row) for row in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = ONE / work[r][c]
        if inv != 1:
            work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                row_i, row_r = work[i], work[r]
                for j in range(c, ncols):
                    if row_r[j]:
                        row_i[j] -= f * row_r[j]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """One particular solution of A x = b with free variables set to zero."""
    particular, _ = solve_full(rows, rhs, want_nullspace=False)
    return particular


def solve_full(
    rows: Sequence[Sequence], rhs: Sequence, want_nullspace: bool = True
) -> tuple[Vector | None, Matrix]:
    """Particular solution and nullspace basis of A x = b."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else len(rhs) and 0
    if nrows == 0:
        return [], []
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        particular = None
    else:
        particular = zeros(ncols)
        for row, p in zip(red, pivots):
            particular[p] = row[ncols]
    null = nullspace([row[:ncols] for row in red]) if want_nullspace else []
    return particular, null


def nullspace(rows: Sequence[Sequence]) -> Matrix:
    """Basis of the kernel of the row matrix, one vector per free column."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    basis: Matrix = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = zeros(ncols)
        v[free] = ONE
        for row, p in zip(red, pivots):
            if row[free]:
                v[p] = -row[free]
        basis.append(v)
    return basis


class Subspace:
    """A linear subspace of Q^n held as a reduced row echelon basis."""

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, spanning: Iterable[Sequence] = ()):
        self.ambient = ambient
        self.basis, self.pivots = rref(spanning)

    @classmethod
    def from_echelon(cls, ambient: int, basis: Matrix, pivots: list[int]) -> "Subspace":
        sub = cls.__new__(cls)
        sub.ambient = ambient
        sub.basis = basis
        sub.pivots = pivots
        return sub

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v: Sequence) -> Vector | None:
        """Coefficients of v over the echelon basis, or None if outside."""
        residue = list(v)
        coords = []
        for row, p in zip(self.basis, self.pivots):
            c = residue[p]
            coords.append(c)
            if c != 0:
                for j in range(self.ambient):
                    if row[j]:
                        residue[j] -= c * row[j]
        if any(x != 0 for x in residue):
            return None
        return coords

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient, list(self.basis) + list(other.basis))

    def complement(self) -> "Subspace":
        """Orthogonal complement for the standard inner product."""
        if not self.basis:
            sub = Subspace(self.ambient)
            eye = [[ONE if i == j else ZERO for j in range(self.ambient)] for i in range(self.ambient)]
            sub.basis, sub.pivots = rref(eye)
            return sub
        return Subspace(self.ambient, nullspace(self.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        return (self.complement() + other.complement()).complement()

    def project(self, v: Sequence) -> Vector:
        """Orthogonal projection of v onto this subspace, exactly."""
        if not self.basis:
            return zeros(self.ambient)
        gram = [[dot(r1, r2) for r2 in self.basis] for r1 in self.basis]
        rhs = [dot(r, v) for r in self.basis]
        coeffs = solve(gram, rhs)
        out = zeros(self.ambient)
        for c, row in zip(coeffs, self.basis):
            if c != 0:
                out = vec_add(out, vec_scale(c, row))
        return out

    def is_orthogonal_to(self, other: "Subspace") -> bool:
        return all(dot(u, v) == 0 for u in self.basis for v in other.basis)
