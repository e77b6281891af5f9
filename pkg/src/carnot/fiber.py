"""The left-invariant exterior algebra of a graded Lie algebra.

A k-covector is stored on the basis theta_{i_1} ^ ... ^ theta_{i_k} indexed by
strictly increasing tuples; its weight is the sum of the weights of the
factors.  The adapted basis is declared orthonormal, which fixes the inner
product, the Hodge star (orientation theta_1 ^ ... ^ theta_n) and hence the
adjoint delta_0 of the Chevalley-Eilenberg differential d_0, the algebraic
Laplacian box_0, the partial inverse d_0^{-1} and the projection Pi_0 onto the
harmonic (Rumin) forms.  Everything here is finite exact linear algebra done
weight-by-weight, degree-by-degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .algebra import StratifiedAlgebra
from .linalg import Subspace, rref, solve, zeros
from .scalars import ONE, ZERO, Rational, rat

Index = tuple[int, ...]


def index_weight(algebra: StratifiedAlgebra, index: Index) -> int:
    return sum(algebra.weight_of(i) for i in index)


@lru_cache(maxsize=None)
def indices(algebra: StratifiedAlgebra, degree: int) -> tuple[Index, ...]:
    """All degree-k covector indices, ordered by (weight, lex)."""
    if degree < 0 or degree > algebra.dim:
        return ()
    combos = list(combinations(range(1, algebra.dim + 1), degree))
    combos.sort(key=lambda I: (index_weight(algebra, I), I))
    return tuple(combos)


@lru_cache(maxsize=None)
def indices_by_weight(algebra: StratifiedAlgebra, degree: int, weight: int) -> tuple[Index, ...]:
    return tuple(I for I in indices(algebra, degree) if index_weight(algebra, I) == weight)


def form_weights(algebra: StratifiedAlgebra, degree: int) -> tuple[int, ...]:
    """The weights that actually occur among degree-k covectors."""
    seen = sorted({index_weight(algebra, I) for I in indices(algebra, degree)})
    return tuple(seen)


def wedge_indices(left: Index, right: Index) -> tuple[int, Index] | None:
    """Merge two increasing index tuples; returns (sign, merged) or None."""
    if set(left) & set(right):
        return None
    merged = left + right
    sign = 1
    # insertion sort, counting transpositions
    items = list(merged)
    for a in range(1, len(items)):
        b = a
        while b > 0 and items[b - 1] > items[b]:
            items[b - 1], items[b] = items[b], items[b - 1]
            sign = -sign
            b -= 1
    return sign, tuple(items)


class FiberForm:
    """A left-invariant form: rational coefficients on increasing indices."""

    __slots__ = ("algebra", "degree", "coeffs")

    def __init__(self, algebra: StratifiedAlgebra, degree: int, coeffs=None):
        self.algebra = algebra
        self.degree = degree
        clean: dict[Index, Rational] = {}
        for I, c in (coeffs or {}).items():
            q = rat(c)
            if q == 0:
                continue
            if len(I) != degree:
                raise ValueError("index degree mismatch")
            clean[tuple(I)] = q
        self.coeffs = clean

    @classmethod
    def monomial(cls, algebra: StratifiedAlgebra, index: Index, coeff=ONE) -> "FiberForm":
        return cls(algebra, len(index), {tuple(index): rat(coeff)})

    @classmethod
    def zero(cls, algebra: StratifiedAlgebra, degree: int) -> "FiberForm":
        return cls(algebra, degree, {})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "FiberForm") -> "FiberForm":
        if self.degree != other.degree or self.algebra != other.algebra:
            raise ValueError("cannot add forms of different type")
        coeffs = dict(self.coeffs)
        for I, c in other.coeffs.items():
            s = coeffs.get(I, ZERO) + c
            if s == 0:
                coeffs.pop(I, None)
            else:
                coeffs[I] = s
        return FiberForm(self.algebra, self.degree, coeffs)

    def __neg__(self) -> "FiberForm":
        return FiberForm(self.algebra, self.degree, {I: -c for I, c in self.coeffs.items()})

    def __sub__(self, other: "FiberForm") -> "FiberForm":
        return self + (-other)

    def __mul__(self, scalar) -> "FiberForm":
        q = rat(scalar)
        if q == 0:
            return FiberForm.zero(self.algebra, self.degree)
        return FiberForm(self.algebra, self.degree, {I: c * q for I, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiberForm)
            and self.algebra == other.algebra
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.algebra, self.degree, frozenset(self.coeffs.items())))

    def wedge(self, other: "FiberForm") -> "FiberForm":
        if self.algebra != other.algebra:
            raise ValueError("forms live on different algebras")
        out: dict[Index, Rational] = {}
        for I, a in self.coeffs.items():
            for J, b in other.coeffs.items():
                merged = wedge_indices(I, J)
                if merged is None:
                    continue
                sign, K = merged
                s = out.get(K, ZERO) + sign * a * b
                if s == 0:
                    out.pop(K, None)
                else:
                    out[K] = s
        return FiberForm(self.algebra, self.degree + other.degree, out)

    def weight_components(self) -> dict[int, "FiberForm"]:
        parts: dict[int, dict] = {}
        for I, c in self.coeffs.items():
            parts.setdefault(index_weight(self.algebra, I), {})[I] = c
        return {
            p: FiberForm(self.algebra, self.degree, coeffs)
            for p, coeffs in sorted(parts.items())
        }

    def weight(self) -> int | None:
        """Weight of a homogeneous form (None for 0; error if mixed)."""
        comps = self.weight_components()
        if not comps:
            return None
        if len(comps) > 1:
            raise ValueError("form is not weight homogeneous")
        return next(iter(comps))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        bits = []
        ordered = sorted(
            self.coeffs.items(), key=lambda kv: (index_weight(self.algebra, kv[0]), kv[0])
        )
        for I, c in ordered:
            body = "∧".join(f"θ{i}" for i in I) if I else "1"
            if c == 1:
                term = body
            elif c == -1:
                term = f"-{body}"
            else:
                term = f"{c}·{body}"
            bits.append(term)
        return " + ".join(bits).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"FiberForm({self})"


# -- the Chevalley-Eilenberg differential and its relatives -------------------


@lru_cache(maxsize=None)
def _d0_on_index(algebra: StratifiedAlgebra, index: Index) -> FiberForm:
    """d_0 extended from d_0 theta_m = -sum_{i<j} c^m_ij theta_i ^ theta_j."""
    if not index:
        return FiberForm.zero(algebra, 1)
    out = FiberForm.zero(algebra, len(index) + 1)
    for pos, m in enumerate(index):
        rest = index[:pos] + index[pos + 1 :]
        sign = (-1) ** pos
        dtheta: dict[Index, Rational] = {}
        for (i, j), terms in algebra._table.items():
            c = dict(terms).get(m)
            if c:
                dtheta[(i, j)] = -c
        if not dtheta:
            continue
        piece = FiberForm(algebra, 2, dtheta).wedge(FiberForm.monomial(algebra, rest))
        out = out + piece * sign
    return out


def d0(form: FiberForm) -> FiberForm:
    out = FiberForm.zero(form.algebra, form.degree + 1)
    for I, c in form.coeffs.items():
        out = out + _d0_on_index(form.algebra, I) * c
    return out


def hodge_star(form: FiberForm) -> FiberForm:
    """alpha ^ star(beta) = <alpha,beta> vol with vol = theta_1 ^ .. ^ theta_n."""
    algebra = form.algebra
    full = tuple(range(1, algebra.dim + 1))
    out: dict[Index, Rational] = {}
    for I, c in form.coeffs.items():
        comp = tuple(i for i in full if i not in I)
        sign, merged = wedge_indices(I, comp)
        assert merged == full
        out[comp] = out.get(comp, ZERO) + sign * c
    return FiberForm(algebra, algebra.dim - form.degree, out)


def _cell(algebra: StratifiedAlgebra, degree: int, weight: int) -> tuple[Index, ...]:
    return indices_by_weight(algebra, degree, weight)


def _vector(form: FiberForm, cell: tuple[Index, ...]) -> list[Rational]:
    return [form.coeffs.get(I, ZERO) for I in cell]


def _form(algebra: StratifiedAlgebra, degree: int, cell, vec) -> FiberForm:
    return FiberForm(algebra, degree, {I: c for I, c in zip(cell, vec) if c != 0})


@lru_cache(maxsize=None)
def _d0_matrix(algebra: StratifiedAlgebra, degree: int, weight: int):
    """Columns of d_0 : (degree,weight) cell -> (degree+1,weight) cell."""
    src = _cell(algebra, degree, weight)
    dst = _cell(algebra, degree + 1, weight)
    cols = []
    for I in src:
        image = _d0_on_index(algebra, I)
        cols.append(_vector(image, dst))
    return src, dst, cols


def delta0(form: FiberForm) -> FiberForm:
    """The adjoint of d_0 for the monomial-orthonormal product."""
    out = FiberForm.zero(form.algebra, form.degree - 1)
    if form.degree == 0:
        raise ValueError("delta_0 undefined on forms of negative target degree")
    for p, comp in form.weight_components().items():
        src, dst, cols = _d0_matrix(form.algebra, form.degree - 1, p)
        v = _vector(comp, dst)
        image = [sum((c * x for c, x in zip(col, v)), start=ZERO) for col in cols]
        out = out + _form(form.algebra, form.degree - 1, src, image)
    return out


def box0(form: FiberForm) -> FiberForm:
    upper = delta0(d0(form))
    if form.degree == 0:
        return upper
    return d0(delta0(form)) + upper


@dataclass(frozen=True)
class HodgeSplit:
    """Orthogonal bases of Im d_0, ker box_0 and Im delta_0 at one bidegree."""

    image_d0: tuple[FiberForm, ...]
    harmonic: tuple[FiberForm, ...]
    image_delta0: tuple[FiberForm, ...]


@lru_cache(maxsize=None)
def hodge_decompose(algebra: StratifiedAlgebra, degree: int, weight: int) -> HodgeSplit:
    cell = _cell(algebra, degree, weight)
    if not cell:
        return HodgeSplit((), (), ())
    dim = len(cell)
    _, _, cols_in = _d0_matrix(algebra, degree - 1, weight)
    image_rows, _ = rref(cols_in)
    src, dst, cols_out = _d0_matrix(algebra, degree, weight)
    # Im delta_0 at (degree, weight) is spanned by delta_0 of the next cell,
    # i.e. by the rows of the outgoing d_0 matrix.
    delta_rows, _ = rref([[col[t] for col in cols_out] for t in range(len(dst))])
    im = Subspace(dim, image_rows)
    de = Subspace(dim, delta_rows)
    harm = (im + de).complement()
    make = lambda rows: tuple(_form(algebra, degree, cell, v) for v in rows)
    return HodgeSplit(make(im.basis), make(harm.basis), make(de.basis))


@lru_cache(maxsize=None)
def _pinv_matrix(algebra: StratifiedAlgebra, degree: int, weight: int):
    """Columns of d_0^{-1} : (degree,weight) -> (degree-1,weight)."""
    src, dst, cols = _d0_matrix(algebra, degree - 1, weight)
    ncols, nrows = len(src), len(dst)
    if ncols == 0 or nrows == 0:
        return [[ZERO] * ncols for _ in range(nrows)]
    matrix_rows = [[cols[j][i] for j in range(ncols)] for i in range(nrows)]
    row_space = Subspace(ncols, matrix_rows)
    col_space = Subspace(nrows, [list(c) for c in cols])
    pinv_cols = []
    for t in range(nrows):
        e = zeros(nrows)
        e[t] = ONE
        target = col_space.project(e)
        sol = solve(matrix_rows, target)
        pinv_cols.append(row_space.project(sol))
    return pinv_cols


def d0_pinv(form: FiberForm) -> FiberForm:
    """The unique eta in Im delta_0 with d_0 eta = pr_{Im d_0} form."""
    if form.degree == 0:
        raise ValueError("d_0^{-1} undefined on 0-forms")
    out = FiberForm.zero(form.algebra, form.degree - 1)
    for p, comp in form.weight_components().items():
        src, dst, _ = _d0_matrix(form.algebra, form.degree - 1, p)
        pinv_cols = _pinv_matrix(form.algebra, form.degree, p)
        v = _vector(comp, dst)
        image = zeros(len(src))
        for c, col in zip(v, pinv_cols):
            if c != 0:
                for t in range(len(src)):
                    image[t] += c * col[t]
        out = out + _form(form.algebra, form.degree - 1, src, image)
    return out


def pi0(form: FiberForm) -> FiberForm:
    """Orthogonal projection onto ker box_0 (the Rumin forms)."""
    lower = d0(d0_pinv(form)) if form.degree > 0 else FiberForm.zero(form.algebra, 0)
    upper = d0_pinv(d0(form))
    return form - lower - upper


def volume_form(algebra: StratifiedAlgebra) -> FiberForm:
    return FiberForm.monomial(algebra, tuple(range(1, algebra.dim + 1)))
