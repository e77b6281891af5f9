"""The spectral machinery of the weight-graded de Rham multicomplex.

The bigraded modules Z_r / B_r are defined through triangular systems of
witness equations

    alpha in Z_r  <=>  d_0 alpha = 0 and d_n alpha = sum_{i<n} d_i z_{p+n-i},
    alpha in B_r  <=>  alpha = sum_j d_j c_{p-j} with the lower-order sums zero,

and the page-r differential is Delta_r[alpha] = [d_r alpha - sum d_i z_{p+r-i}].

Witness and certificate solves happen over exact finite slices: every d_i
preserves the total grade (form weight + coefficient weighted degree), so a
polynomial form decomposes into independent slices, each a finite-dimensional
rational linear system.  No truncation error is possible; the bound reported
is the grade actually used.

The Rumin differential is realised by the standard homotopy construction
d_c = Pi_0 d A with A = sum_m (-d_0^{-1} (d - d_0))^m, which terminates
because each step strictly raises the weight; its output is validated against
the explicit formulas of the worked examples elsewhere in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import StratifiedAlgebra
from .fiber import (
    FiberForm,
    Index,
    d0 as fiber_d0,
    d0_pinv as fiber_d0_pinv,
    hodge_star,
    indices_by_weight,
    pi0 as fiber_pi0,
)
from .forms import PolyForm, d_component, d_components, exterior_derivative
from .linalg import Subspace, nullspace, rref, solve
from .poly import PolyRing
from .scalars import ZERO, Rational


class TruncationError(RuntimeError):
    """A caller-imposed degree cap clipped the witness space of a solve."""


SliceKey = tuple[int, int, int]  # (degree, weight, coefficient wdeg)


@lru_cache(maxsize=None)
def _slice_cell(
    algebra: StratifiedAlgebra, degree: int, weight: int, wdeg: int
) -> tuple[tuple[tuple[int, ...], Index], ...]:
    """Ordered monomial basis of the (degree, weight, wdeg) slice."""
    if wdeg < 0:
        return ()
    ring = algebra.ring()
    return tuple(
        (exps, I)
        for I in indices_by_weight(algebra, degree, weight)
        for exps in ring.monomials_of_wdeg(wdeg)
    )


@lru_cache(maxsize=None)
def _d_matrix_columns(
    algebra: StratifiedAlgebra, jump: int, degree: int, weight: int, wdeg: int
) -> tuple[tuple[Rational, ...], ...]:
    """Columns of d_jump from the given slice to its image slice."""
    src = _slice_cell(algebra, degree, weight, wdeg)
    dst = _slice_cell(algebra, degree + 1, weight + jump, wdeg - jump)
    ring = algebra.ring()
    pos = {key: t for t, key in enumerate(dst)}
    cols = []
    for exps, I in src:
        form = PolyForm(algebra, degree, {I: ring.monomial(exps)})
        image = d_component(form, jump)
        col = [ZERO] * len(dst)
        for J, f in image.coeffs.items():
            for e, c in f.terms.items():
                col[pos[(e, J)]] = c
        cols.append(tuple(col))
    return tuple(cols)


def _to_vector(algebra: StratifiedAlgebra, form: PolyForm, key: SliceKey):
    cell = _slice_cell(algebra, *key)
    pos = {ck: t for t, ck in enumerate(cell)}
    vec = [ZERO] * len(cell)
    for I, f in form.coeffs.items():
        for e, c in f.terms.items():
            vec[pos[(e, I)]] = c
    return vec


def _from_vector(algebra: StratifiedAlgebra, key: SliceKey, vec) -> PolyForm:
    cell = _slice_cell(algebra, *key)
    ring = algebra.ring()
    form = PolyForm.zero(algebra, key[0])
    coeffs: dict[Index, dict] = {}
    for (exps, I), c in zip(cell, vec):
        if c != 0:
            coeffs.setdefault(I, {})[exps] = c
    from .poly import Poly

    return PolyForm(algebra, key[0], {I: Poly(ring, t) for I, t in coeffs.items()})


@dataclass
class WitnessChain:
    """alpha in Z_r together with the witnesses z_{p+1} .. z_{p+r-1}."""

    alpha: PolyForm
    order: int
    weight: int
    witnesses: dict[int, PolyForm] = field(default_factory=dict)  # j -> z_{p+j}

    def witness(self, j: int) -> PolyForm:
        z = self.witnesses.get(j)
        if z is None:
            return PolyForm.zero(self.alpha.algebra, self.alpha.degree)
        return z

    def check(self) -> bool:
        """Re-verify the defining equations of Definition Z_r."""
        alpha = self.alpha
        if not d_component(alpha, 0).is_zero():
            return False
        for n in range(1, self.order):
            lhs = d_component(alpha, n)
            for i in range(0, n):
                lhs = lhs - d_component(self.witness(n - i), i)
            if not lhs.is_zero():
                return False
        return True


@dataclass(eq=False)
class CosetForm:
    """A representative of a class modulo B_order at its bidegree."""

    rep: PolyForm
    order: int
    engine: "SpectralEngine"

    def is_zero(self) -> bool:
        return self.engine.b_membership(self.rep, self.order) is not None

    def same_class(self, other: "CosetForm") -> bool:
        if self.order != other.order:
            raise ValueError("cosets taken modulo different moduli")
        return self.engine.b_membership(self.rep - other.rep, self.order) is not None

    __eq__ = same_class

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return f"[{self.rep}] mod B_{self.order}"


class SpectralEngine:
    """Exact solver for Z_r / B_r membership, Delta_r and the Rumin complex."""

    def __init__(self, algebra: StratifiedAlgebra, max_grade: int | None = None):
        self.algebra = algebra
        self.max_grade = max_grade

    # -- slicing helpers ----------------------------------------------------

    def _check_grade(self, grade: int):
        if self.max_grade is not None and grade > self.max_grade:
            raise TruncationError(
                f"solve needs total grade {grade}, above the configured cap "
                f"{self.max_grade}; raise CARNOT_MAX_DEGREE"
            )

    def _homogeneous_data(self, alpha: PolyForm) -> tuple[int, int]:
        p = alpha.weight()
        if p is None:
            raise ValueError("zero form has no bidegree; handle separately")
        return p, alpha.degree

    # -- Z_r ------------------------------------------------------------------

    def z_membership(self, alpha: PolyForm, order: int) -> WitnessChain | None:
        """A witness chain certifying alpha in Z_order, or None.

        The input must be weight homogeneous.  The solve is exact: witnesses
        are sought slice by slice in total grade, where they must live.
        """
        if alpha.is_zero():
            return WitnessChain(alpha, order, 0)
        p, k = self._homogeneous_data(alpha)
        if not d_component(alpha, 0).is_zero():
            return None
        witnesses: dict[int, PolyForm] = {}
        for grade, piece in alpha.grade_components().items():
            self._check_grade(grade)
            slice_witnesses = self._z_slice_solve(piece, order, p, k, grade)
            if slice_witnesses is None:
                return None
            for j, z in slice_witnesses.items():
                if j in witnesses:
                    witnesses[j] = witnesses[j] + z
                else:
                    witnesses[j] = z
        witnesses = {j: z for j, z in witnesses.items() if not z.is_zero()}
        return WitnessChain(alpha, order, p, witnesses)

    def _z_slice_solve(
        self, piece: PolyForm, order: int, p: int, k: int, grade: int
    ) -> dict[int, PolyForm] | None:
        algebra = self.algebra
        unknown_keys = {j: (k, p + j, grade - p - j) for j in range(1, order)}
        offsets: dict[int, int] = {}
        total = 0
        for j in range(1, order):
            offsets[j] = total
            total += len(_slice_cell(algebra, *unknown_keys[j]))
        rows: list[list] = []
        rhs: list = []
        for n in range(1, order):
            eq_key = (k + 1, p + n, grade - p - n)
            eq_cell = _slice_cell(algebra, *eq_key)
            target = _to_vector(algebra, d_component(piece, n), eq_key)
            if not eq_cell:
                continue
            block = [[ZERO] * total for _ in eq_cell]
            for j in range(1, n + 1):
                jump = n - j
                src_key = unknown_keys[j]
                cols = _d_matrix_columns(algebra, jump, *src_key)
                for u, col in enumerate(cols):
                    cidx = offsets[j] + u
                    for e, value in enumerate(col):
                        if value != 0:
                            block[e][cidx] = value
            rows.extend(block)
            rhs.extend(target)
        if total == 0:
            if any(x != 0 for x in rhs):
                return None
            return {}
        if not rows:
            return {}
        sol = solve(rows, rhs)
        if sol is None:
            return None
        out = {}
        for j in range(1, order):
            key = unknown_keys[j]
            size = len(_slice_cell(algebra, *key))
            chunk = sol[offsets[j] : offsets[j] + size]
            out[j] = _from_vector(algebra, key, chunk)
        return out

    def z_space(self, order: int, p: int, k: int, grade: int) -> Subspace:
        """The slice of Z_order at bidegree (p, k-p) and total grade."""
        algebra = self.algebra
        alpha_key = (k, p, grade - p)
        alpha_cell = _slice_cell(algebra, *alpha_key)
        na = len(alpha_cell)
        if na == 0:
            return Subspace(0)
        unknown_keys = {j: (k, p + j, grade - p - j) for j in range(1, order)}
        offsets = {}
        total = na
        for j in range(1, order):
            offsets[j] = total
            total += len(_slice_cell(algebra, *unknown_keys[j]))
        rows: list[list] = []
        # d_0 alpha = 0
        d0_cols = _d_matrix_columns(algebra, 0, *alpha_key)
        n_eq0 = len(_slice_cell(algebra, k + 1, p, grade - p))
        for e in range(n_eq0):
            row = [ZERO] * total
            nonzero = False
            for u in range(na):
                v = d0_cols[u][e]
                if v != 0:
                    row[u] = v
                    nonzero = True
            if nonzero:
                rows.append(row)
        # d_n alpha - sum d_i z = 0
        for n in range(1, order):
            eq_key = (k + 1, p + n, grade - p - n)
            eq_cell = _slice_cell(algebra, *eq_key)
            if not eq_cell:
                continue
            dn_cols = _d_matrix_columns(algebra, n, *alpha_key)
            block = [[ZERO] * total for _ in eq_cell]
            for u in range(na):
                for e, v in enumerate(dn_cols[u]):
                    if v != 0:
                        block[e][u] = v
            for j in range(1, n + 1):
                cols = _d_matrix_columns(algebra, n - j, *unknown_keys[j])
                for u, col in enumerate(cols):
                    cidx = offsets[j] + u
                    for e, v in enumerate(col):
                        if v != 0:
                            block[e][cidx] = -v
            rows.extend(block)
        if not rows:
            eye = [[ZERO] * na for _ in range(na)]
            for t in range(na):
                eye[t][t] = Rational(1)
            return Subspace(na, eye)
        kernel = nullspace(rows)
        projected = [vec[:na] for vec in kernel]
        return Subspace(na, projected)

    # -- B_r ------------------------------------------------------------------

    def b_membership(self, alpha: PolyForm, order: int) -> dict[int, PolyForm] | None:
        """Certificate {j: c_{p-j}} with alpha = sum_j d_j c_{p-j}, or None."""
        if alpha.is_zero():
            return {}
        p, k = self._homogeneous_data(alpha)
        certificate: dict[int, PolyForm] = {}
        for grade, piece in alpha.grade_components().items():
            self._check_grade(grade)
            got = self._b_slice_solve(piece, order, p, k, grade)
            if got is None:
                return None
            for j, c in got.items():
                if j in certificate:
                    certificate[j] = certificate[j] + c
                else:
                    certificate[j] = c
        return {j: c for j, c in certificate.items() if not c.is_zero()}

    def _b_keys(self, order: int, p: int, k: int, grade: int) -> dict[int, SliceKey]:
        return {j: (k - 1, p - j, grade - p + j) for j in range(0, order)}

    def _b_slice_solve(
        self, piece: PolyForm, order: int, p: int, k: int, grade: int
    ) -> dict[int, PolyForm] | None:
        algebra = self.algebra
        unknown_keys = self._b_keys(order, p, k, grade)
        offsets = {}
        total = 0
        for j in range(order):
            offsets[j] = total
            total += len(_slice_cell(algebra, *unknown_keys[j]))
        if total == 0:
            return None if not piece.is_zero() else {}
        rows, rhs = self._b_system(unknown_keys, offsets, total, order, p, k, grade)
        main_key = (k, p, grade - p)
        target = _to_vector(algebra, piece, main_key)
        rhs = target + rhs
        sol = solve(rows, rhs)
        if sol is None:
            return None
        out = {}
        for j in range(order):
            key = unknown_keys[j]
            size = len(_slice_cell(algebra, *key))
            out[j] = _from_vector(algebra, key, sol[offsets[j] : offsets[j] + size])
        return out

    def _b_system(self, unknown_keys, offsets, total, order, p, k, grade):
        """Rows: main equation block first, then the lower-order side blocks."""
        algebra = self.algebra
        rows: list[list] = []
        main_cell = _slice_cell(algebra, k, p, grade - p)
        block = [[ZERO] * total for _ in main_cell]
        for j in range(order):
            cols = _d_matrix_columns(algebra, j, *unknown_keys[j])
            for u, col in enumerate(cols):
                cidx = offsets[j] + u
                for e, v in enumerate(col):
                    if v != 0:
                        block[e][cidx] = v
        rows.extend(block)
        side_rhs: list = []
        for l in range(1, order):
            eq_cell = _slice_cell(algebra, k, p - l, grade - p + l)
            if not eq_cell:
                continue
            block = [[ZERO] * total for _ in eq_cell]
            for j in range(l, order):
                cols = _d_matrix_columns(algebra, j - l, *unknown_keys[j])
                for u, col in enumerate(cols):
                    cidx = offsets[j] + u
                    for e, v in enumerate(col):
                        if v != 0:
                            block[e][cidx] = v
            rows.extend(block)
            side_rhs.extend([ZERO] * len(eq_cell))
        return rows, side_rhs

    def b_space(self, order: int, p: int, k: int, grade: int) -> Subspace:
        """The slice of B_order at bidegree (p, k-p) and total grade."""
        algebra = self.algebra
        main_key = (k, p, grade - p)
        na = len(_slice_cell(algebra, *main_key))
        if na == 0:
            return Subspace(0)
        unknown_keys = self._b_keys(order, p, k, grade)
        offsets = {}
        total = 0
        for j in range(order):
            offsets[j] = total
            total += len(_slice_cell(algebra, *unknown_keys[j]))
        if total == 0:
            return Subspace(na)
        rows, _ = self._b_system(unknown_keys, offsets, total, order, p, k, grade)
        main_rows = rows[:na]
        side_rows = rows[na:]
        candidates = nullspace(side_rows) if side_rows else None
        if candidates is None:
            candidates = []
            for t in range(total):
                v = [ZERO] * total
                v[t] = Rational(1)
                candidates.append(v)
        images = []
        for cand in candidates:
            img = [ZERO] * na
            for e in range(na):
                row = main_rows[e]
                img[e] = sum((row[t] * cand[t] for t in range(total) if cand[t] != 0), start=ZERO)
            images.append(img)
        return Subspace(na, images)

    # -- the page differentials -------------------------------------------------

    def delta_r(self, chain: WitnessChain, order: int | None = None) -> CosetForm:
        """Delta_r[alpha] = [d_r alpha - sum_{i=1}^{r-1} d_i z_{p+r-i}]."""
        r = chain.order if order is None else order
        if not chain.check():
            raise ValueError("invalid witness chain")
        rep = d_component(chain.alpha, r)
        for i in range(1, r):
            rep = rep - d_component(chain.witness(r - i), i)
        return CosetForm(rep, r, self)

    def e_space_basis(
        self, z_order: int, b_order: int, p: int, k: int, bound: int = 0
    ) -> list[PolyForm]:
        """Basis of E_{z_order,b_order}^{p,k-p} = Z ∩ B^perp within wdeg <= bound."""
        out: list[PolyForm] = []
        for wdeg in range(0, bound + 1):
            grade = p + wdeg
            key = (k, p, wdeg)
            zs = self.z_space(z_order, p, k, grade)
            bs = self.b_space(b_order, p, k, grade)
            space = zs.intersect(bs.complement())
            out.extend(_from_vector(self.algebra, key, v) for v in space.basis)
        return out

    # -- the Rumin complex --------------------------------------------------------

    def pi0(self, form: PolyForm) -> PolyForm:
        return form.apply_fiberwise(fiber_pi0, 0)

    def d0(self, form: PolyForm) -> PolyForm:
        return d_component(form, 0)

    def d0_pinv(self, form: PolyForm) -> PolyForm:
        if form.degree == 0:
            return PolyForm.zero(self.algebra, 0)
        return form.apply_fiberwise(fiber_d0_pinv, -1)

    def is_rumin(self, form: PolyForm) -> bool:
        return self.pi0(form) == form

    def rumin_dc(self, form: PolyForm) -> PolyForm:
        """The Rumin differential via the terminating homotopy series."""
        if not self.is_rumin(form):
            raise ValueError("rumin_dc needs a Rumin form (Pi_0 alpha = alpha)")
        bar = form
        term = form
        for _ in range(self.algebra.homogeneous_dimension + 1):
            nonzero_jump = exterior_derivative(term) - self.d0(term)
            term = -self.d0_pinv(nonzero_jump)
            if term.is_zero():
                break
            bar = bar + term
        return self.pi0(exterior_derivative(bar))

    def dc_weight_split(self, form: PolyForm) -> dict[int, PolyForm]:
        """Components d_c^j increasing the weight by exactly j."""
        p = form.weight()
        if p is None:
            return {}
        image = self.rumin_dc(form)
        return {q - p: comp for q, comp in image.weight_components().items()}

    def dc_component(self, form: PolyForm, jump: int) -> PolyForm:
        return self.dc_weight_split(form).get(
            jump, PolyForm.zero(self.algebra, form.degree + 1)
        )

    # -- Hodge-star closedness on the invariant slice ------------------------------

    def star_duality_check(self, r1: int, r2: int, p: int, k: int) -> bool:
        """Star-closedness of Z_{r1} ∩ B_{r2}^perp on left-invariant forms.

        Restricted to the invariant slice the multicomplex has d_i = 0 for
        i >= 1, so Z_r = ker d_0 and B_r = Im d_0 there for every r, and the
        duality reduces to star-invariance of the harmonic space at dual
        bidegrees.  That statement is checked exactly; the full smooth-module
        statement needs the L^2 pairing and is out of exact reach.
        """
        algebra = self.algebra
        Q = algebra.homogeneous_dimension
        n = algebra.dim
        lhs = self._invariant_e_cell(p, k)
        rhs = self._invariant_e_cell(Q - p, n - k)
        starred = []
        rhs_cell = _slice_cell(algebra, n - k, Q - p, 0)
        for vec in lhs.basis:
            form = _from_vector(algebra, (k, p, 0), vec)
            image = hodge_star(form.as_fiber())
            starred.append(
                _to_vector(algebra, PolyForm.from_fiber(image), (n - k, Q - p, 0))
            )
        return Subspace(len(rhs_cell), starred) == rhs

    def _invariant_e_cell(self, p: int, k: int) -> Subspace:
        zs = self.z_space(1, p, k, p)
        key = (k, p, 0)
        cell = _slice_cell(self.algebra, *key)
        cols = _d_matrix_columns(self.algebra, 0, k - 1, p, 0) if k > 0 else ()
        bs = Subspace(len(cell), [list(col) for col in cols])
        return zs.intersect(bs.complement())
