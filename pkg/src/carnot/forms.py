"""Differential forms with polynomial coefficients and the graded splitting of d.

On a graded group the exterior derivative of f . xi splits as

    d(f xi) = sum_l (X_l f) theta_l ^ xi  +  f d_0 xi

over the left-invariant frame, and grouping the first sum by the layer weight
of theta_l gives the decomposition d = d_0 + d_{w_1} + ... + d_{w_s} by weight
increase.  Coefficients are polynomials in the exponential coordinates, so all
of this is exact.  The quantity (form weight + coefficient weighted degree) is
preserved by every d_i, which is what makes the finite truncations used by the
spectral engine closed under the calculus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import StratifiedAlgebra, frame_apply, left_invariant_frame
from .fiber import (
    FiberForm,
    Index,
    _d0_on_index,
    index_weight,
    indices,
    indices_by_weight,
    wedge_indices,
)
from .poly import Poly, PolyRing
from .scalars import ZERO, rat


class PolyForm:
    """A differential form sum_I f_I theta_I with polynomial coefficients."""

    __slots__ = ("algebra", "degree", "coeffs")

    def __init__(self, algebra: StratifiedAlgebra, degree: int, coeffs=None):
        self.algebra = algebra
        self.degree = degree
        clean: dict[Index, Poly] = {}
        for I, f in (coeffs or {}).items():
            if isinstance(f, (int, str)) or not isinstance(f, Poly):
                f = algebra.ring().constant(rat(f))
            if f.is_zero():
                continue
            if len(I) != degree:
                raise ValueError("index degree mismatch")
            clean[tuple(I)] = f
        self.coeffs = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, algebra: StratifiedAlgebra, degree: int) -> "PolyForm":
        return cls(algebra, degree, {})

    @classmethod
    def monomial(cls, algebra: StratifiedAlgebra, index: Index, coeff=1) -> "PolyForm":
        return cls(algebra, len(index), {tuple(index): coeff})

    @classmethod
    def from_fiber(cls, form: FiberForm) -> "PolyForm":
        ring = form.algebra.ring()
        return cls(
            form.algebra,
            form.degree,
            {I: ring.constant(c) for I, c in form.coeffs.items()},
        )

    @classmethod
    def from_function(cls, algebra: StratifiedAlgebra, f: Poly) -> "PolyForm":
        return cls(algebra, 0, {(): f})

    def constant_part(self) -> FiberForm:
        """The left-invariant part (constant coefficients)."""
        return FiberForm(
            self.algebra,
            self.degree,
            {I: f.constant_value() for I, f in self.coeffs.items()},
        )

    def as_fiber(self) -> FiberForm:
        """Convert an invariant form; error if any coefficient is non-constant."""
        for f in self.coeffs.values():
            if not f.is_constant():
                raise ValueError("form has non-constant coefficients")
        return self.constant_part()

    def is_invariant(self) -> bool:
        return all(f.is_constant() for f in self.coeffs.values())

    # -- linear structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "PolyForm") -> "PolyForm":
        if self.degree != other.degree or self.algebra != other.algebra:
            raise ValueError("cannot add forms of different type")
        coeffs = dict(self.coeffs)
        for I, f in other.coeffs.items():
            s = coeffs.get(I)
            s = f if s is None else s + f
            if s.is_zero():
                coeffs.pop(I, None)
            else:
                coeffs[I] = s
        return PolyForm(self.algebra, self.degree, coeffs)

    def __neg__(self) -> "PolyForm":
        return PolyForm(self.algebra, self.degree, {I: -f for I, f in self.coeffs.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def __mul__(self, scalar) -> "PolyForm":
        return PolyForm(self.algebra, self.degree, {I: f * scalar for I, f in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyForm)
            and self.algebra == other.algebra
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.algebra, self.degree, frozenset(self.coeffs.items())))

    def wedge(self, other: "PolyForm") -> "PolyForm":
        if self.algebra != other.algebra:
            raise ValueError("forms live on different algebras")
        out: dict[Index, Poly] = {}
        for I, f in self.coeffs.items():
            for J, g in other.coeffs.items():
                merged = wedge_indices(I, J)
                if merged is None:
                    continue
                sign, K = merged
                piece = f * g * sign
                s = out.get(K)
                s = piece if s is None else s + piece
                if s.is_zero():
                    out.pop(K, None)
                else:
                    out[K] = s
        return PolyForm(self.algebra, self.degree + other.degree, out)

    # -- gradings --------------------------------------------------------------

    def weight_components(self) -> dict[int, "PolyForm"]:
        """Split by form weight (weight of the covector part)."""
        parts: dict[int, dict] = {}
        for I, f in self.coeffs.items():
            parts.setdefault(index_weight(self.algebra, I), {})[I] = f
        return {
            p: PolyForm(self.algebra, self.degree, coeffs)
            for p, coeffs in sorted(parts.items())
        }

    def weight(self) -> int | None:
        comps = self.weight_components()
        if not comps:
            return None
        if len(comps) > 1:
            raise ValueError("form is not weight homogeneous")
        return next(iter(comps))

    def coefficient_degree(self) -> int | None:
        """Max weighted degree among the polynomial coefficients."""
        degs = [f.weighted_degree() for f in self.coeffs.values()]
        return max(degs) if degs else None

    def grade_components(self) -> dict[int, "PolyForm"]:
        """Split by total grade = form weight + coefficient weighted degree.

        Every d_i preserves the total grade, so these slices are the exact
        finite-dimensional arenas for witness and certificate solves.
        """
        out: dict[int, PolyForm] = {}
        for I, f in self.coeffs.items():
            p = index_weight(self.algebra, I)
            for m, part in f.weight_components().items():
                key = p + m
                piece = PolyForm(self.algebra, self.degree, {I: part})
                out[key] = out.get(key, PolyForm.zero(self.algebra, self.degree)) + piece
        return dict(sorted(out.items()))

    def evaluate(self, point) -> FiberForm:
        return FiberForm(
            self.algebra,
            self.degree,
            {I: f.evaluate(point) for I, f in self.coeffs.items()},
        )

    def apply_fiberwise(self, operator, degree_shift: int) -> "PolyForm":
        """Apply a C^infty-linear fiber operator coefficient-by-coefficient."""
        out = PolyForm.zero(self.algebra, self.degree + degree_shift)
        for I, f in self.coeffs.items():
            image = operator(FiberForm.monomial(self.algebra, I))
            for J, c in image.coeffs.items():
                out = out + PolyForm(self.algebra, out.degree, {J: f * c})
        return out

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        ordered = sorted(
            self.coeffs.items(), key=lambda kv: (index_weight(self.algebra, kv[0]), kv[0])
        )
        bits = []
        for I, f in ordered:
            body = "∧".join(f"θ{i}" for i in I) if I else ""
            text = str(f)
            if " " in text or "+" in text or "-" in text[1:]:
                text = f"({text})"
            bits.append(f"{text}·{body}" if body else text)
        return " + ".join(bits)

    def __repr__(self) -> str:
        return f"PolyForm({self})"


# -- the exterior derivative and its weight decomposition ---------------------


def exterior_derivative(form: PolyForm) -> PolyForm:
    total = PolyForm.zero(form.algebra, form.degree + 1)
    for part in d_components(form).values():
        total = total + part
    return total


def d_components(form: PolyForm) -> dict[int, PolyForm]:
    """The pieces d_i(form) keyed by weight increase i (0 and layer weights).

    Only nonzero pieces are returned; components recombine to the full d.
    """
    algebra = form.algebra
    out: dict[int, PolyForm] = {}

    def accumulate(key: int, piece: PolyForm):
        if piece.is_zero():
            return
        out[key] = out.get(key, PolyForm.zero(algebra, form.degree + 1)) + piece

    for I, f in form.coeffs.items():
        # invariant part: f d_0 theta_I
        image = _d0_on_index(algebra, I)
        if not image.is_zero():
            accumulate(0, PolyForm(algebra, form.degree + 1, {J: f * c for J, c in image.coeffs.items()}))
        # frame part: (X_l f) theta_l ^ theta_I, weight jump w(theta_l)
        for l in range(1, algebra.dim + 1):
            df = frame_apply(algebra, l, f)
            if df.is_zero():
                continue
            merged = wedge_indices((l,), I)
            if merged is None:
                continue
            sign, K = merged
            accumulate(
                algebra.weight_of(l),
                PolyForm(algebra, form.degree + 1, {K: df * sign}),
            )
    return {i: piece for i, piece in sorted(out.items()) if not piece.is_zero()}


def d_component(form: PolyForm, jump: int) -> PolyForm:
    return d_components(form).get(jump, PolyForm.zero(form.algebra, form.degree + 1))


def weight_split_d(form: PolyForm) -> dict[int, PolyForm]:
    """d(form) split by weight increase; requires a weight-homogeneous input."""
    form.weight()  # raises on mixed weights
    return d_components(form)


# -- finite truncations -------------------------------------------------------


@dataclass(frozen=True)
class TruncationSpace:
    """Monomial basis of forms of fixed degree with coefficient wdeg <= bound."""

    algebra: StratifiedAlgebra
    degree: int
    weight: int | None
    bound: int
    basis: tuple[tuple[tuple[int, ...], Index], ...]

    def forms(self) -> list[PolyForm]:
        ring = self.algebra.ring()
        return [
            PolyForm(self.algebra, self.degree, {I: ring.monomial(exps)})
            for exps, I in self.basis
        ]

    @property
    def dim(self) -> int:
        return len(self.basis)


@lru_cache(maxsize=None)
def enumerate_truncation(
    algebra: StratifiedAlgebra, degree: int, weight: int | None, bound: int
) -> TruncationSpace:
    ring = algebra.ring()
    cov = (
        indices(algebra, degree)
        if weight is None
        else indices_by_weight(algebra, degree, weight)
    )
    basis = tuple(
        (exps, I) for I in cov for exps in ring.monomials_up_to(bound)
    )
    return TruncationSpace(algebra, degree, weight, bound, basis)


# -- multicomplex verification -------------------------------------------------


@dataclass
class MulticomplexReport:
    algebra: StratifiedAlgebra
    max_degree: int
    bound: int
    checked: int = 0
    violation: tuple[int, int, str] | None = None  # (n, degree, basis form)

    @property
    def ok(self) -> bool:
        return self.violation is None

    def summary(self) -> str:
        if self.ok:
            return (
                f"truncated multicomplex axioms hold: sum_(i+j=n) d_i d_j = 0 "
                f"on {self.checked} basis forms (degrees <= {self.max_degree}, "
                f"coefficient degree <= {self.bound})"
            )
        n, k, name = self.violation
        return f"violated identity sum_(i+j={n}) d_i d_j = 0 on degree-{k} form {name}"


def multicomplex_check(
    algebra: StratifiedAlgebra, max_degree: int | None = None, bound: int = 3
) -> MulticomplexReport:
    """Verify sum_{i+j=n} d_i d_j = 0 for all n on spanning monomial forms."""
    if max_degree is None:
        max_degree = algebra.dim
    report = MulticomplexReport(algebra, max_degree, bound)
    for k in range(0, max_degree + 1):
        space = enumerate_truncation(algebra, k, None, bound)
        for form in space.forms():
            first = d_components(form)
            buckets: dict[int, PolyForm] = {}
            for i, alpha_i in first.items():
                for j, beta in d_components(alpha_i).items():
                    n = i + j
                    buckets[n] = buckets.get(n, PolyForm.zero(algebra, k + 2)) + beta
            report.checked += 1
            for n, total in sorted(buckets.items()):
                if not total.is_zero():
                    report.violation = (n, k, str(form))
                    return report
    return report
