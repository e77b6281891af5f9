"""One-dimensional central extensions and homomorphism lifting.

A closed invariant 2-form omega twists the bracket of g on the extended space
g + RW by [(u,X),(v,Y)] = (omega(X,Y), [X,Y]); Jacobi for the new bracket is
exactly the cocycle condition d_0 omega = 0, and exact cocycles give trivial
extensions.  A homomorphism phi: g1 -> g2 lifts to the extensions if and only
if the source cocycle and the pullback of the target one differ by a
coboundary, the lift being (u, X) |-> (u + eta(X), phi(X)).

The Pansu workflow follows the lifting recipe for a Pansu derivative field:
split omega by weight, find Rumin 1-form primitives under the matching d_c
component, pull them back, and ask the recombined 2-form to be left-invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import GradedHom, StratifiedAlgebra, ValidationReport, hom_check, validate_algebra
from .fiber import (
    FiberForm,
    Index,
    _d0_matrix,
    d0 as fiber_d0,
    d0_pinv as fiber_d0_pinv,
)
from .forms import PolyForm
from .linalg import solve
from .poly import Poly
from .scalars import ONE, ZERO, Rational, rat
from .spectral import SpectralEngine


def cocycle_check(algebra: StratifiedAlgebra, omega: FiberForm) -> bool:
    """A 2-form defines a Lie algebra cocycle iff d_0 omega = 0."""
    if omega.degree != 2:
        raise ValueError("cocycles here are 2-forms")
    return fiber_d0(omega).is_zero()


def coboundary_solve(algebra: StratifiedAlgebra, omega: FiberForm) -> FiberForm | None:
    """eta with d_0 eta = omega, or None when the class is non-trivial."""
    out = FiberForm.zero(algebra, 1)
    for p, comp in omega.weight_components().items():
        src, dst, cols = _d0_matrix(algebra, 1, p)
        if not src:
            return None
        rows = [[cols[u][e] for u in range(len(src))] for e in range(len(dst))]
        rhs = [comp.coeffs.get(I, ZERO) for I in dst]
        sol = solve(rows, rhs)
        if sol is None:
            return None
        out = out + FiberForm(algebra, 1, {I: c for I, c in zip(src, sol)})
    return out


@dataclass
class CentralExtension:
    """Base algebra, cocycle, and the extended algebra with a center W."""

    base: StratifiedAlgebra
    cocycle: FiberForm
    extended: StratifiedAlgebra
    homogeneous: bool
    center_weight: int
    validation: ValidationReport
    trivial_primitive: FiberForm | None = None

    @property
    def stratifiable(self) -> bool:
        return self.homogeneous and self.validation.stratified

    @property
    def trivial(self) -> bool:
        return self.trivial_primitive is not None

    def with_grading(self, weights) -> StratifiedAlgebra:
        """Re-grade the extended algebra with user-supplied weights."""
        ext = self.extended
        return StratifiedAlgebra(
            weights=weights,
            brackets=[
                (i, j, list(terms))
                for (i, j), terms in ext._table.items()
            ],
            labels=ext.labels,
            coordinates=ext.coordinates,
            name=ext.name + "-regraded",
        )

    def verdict(self) -> str:
        if not self.homogeneous:
            return "non-homogeneous cocycle: extension flagged non-stratifiable"
        if self.stratifiable:
            return f"stratifiable extension, w(W) = {self.center_weight}"
        return f"graded extension with w(W) = {self.center_weight}, not stratifiable"


def central_extend(
    algebra: StratifiedAlgebra,
    omega: FiberForm,
    center_label: str = "W",
    force: bool = False,
) -> CentralExtension:
    """Build the extension of the algebra by a cocycle 2-form.

    With force=True a non-cocycle is accepted; the Jacobi failure then shows
    up in the validation report, at triples predicted by the cocycle defect.
    """
    if omega.algebra != algebra:
        raise ValueError("cocycle must live on the base algebra")
    if not force and not cocycle_check(algebra, omega):
        raise ValueError("2-form is not a cocycle (d_0 omega != 0)")

    comps = omega.weight_components()
    homogeneous = len(comps) <= 1
    if comps:
        center_weight = max(comps) if not homogeneous else next(iter(comps))
    else:
        center_weight = 1  # extension by the zero cocycle: direct sum with R

    n = algebra.dim
    brackets = [(i, j, list(terms)) for (i, j), terms in algebra._table.items()]
    for (i, j), c in sorted(omega.coeffs.items()):
        brackets.append((i, j, [(n + 1, c)]))
    label = center_label
    while label in algebra.labels:
        label += "_"
    coord = label.lower()
    while coord in algebra.coordinates:
        coord += "_"
    extended = StratifiedAlgebra(
        weights=algebra.weights + (center_weight,),
        brackets=brackets,
        labels=algebra.labels + (label,),
        coordinates=algebra.coordinates + (coord,),
        name=(algebra.name or "g") + f"+{label}",
    )
    report = validate_algebra(extended)
    primitive = coboundary_solve(algebra, omega)
    return CentralExtension(
        base=algebra,
        cocycle=omega,
        extended=extended,
        homogeneous=homogeneous,
        center_weight=center_weight,
        validation=report,
        trivial_primitive=primitive,
    )


# -- lifting a homomorphism ----------------------------------------------------


def _pullback_2form(hom: GradedHom, zeta: FiberForm) -> PolyForm:
    """(hom^* zeta)(X_i, X_j) = zeta(M e_i, M e_j) as a form on the source."""
    src = hom.source
    ring = src.ring()
    out = PolyForm.zero(src, 2)
    matrix = [
        [e if isinstance(e, Poly) else ring.constant(e) for e in row]
        for row in hom.matrix
    ]
    for (a, b), c in zeta.coeffs.items():
        for i in range(1, src.dim + 1):
            for j in range(i + 1, src.dim + 1):
                minor = (
                    matrix[a - 1][i - 1] * matrix[b - 1][j - 1]
                    - matrix[a - 1][j - 1] * matrix[b - 1][i - 1]
                )
                if not minor.is_zero():
                    out = out + PolyForm(src, 2, {(i, j): minor * c})
    return out


def _fiberwise_d0_solve(algebra: StratifiedAlgebra, beta: PolyForm):
    """eta (PolyForm, degree 1) with d_0 eta = beta, solved monomial by monomial."""
    ring = algebra.ring()
    out = PolyForm.zero(algebra, 1)
    for p, comp in beta.weight_components().items():
        src, dst, cols = _d0_matrix(algebra, 1, p)
        rows = [[cols[u][e] for u in range(len(src))] for e in range(len(dst))]
        by_monomial: dict[tuple, list] = {}
        for I, f in comp.coeffs.items():
            t = dst.index(I)
            for exps, c in f.terms.items():
                vec = by_monomial.setdefault(exps, [ZERO] * len(dst))
                vec[t] = c
        for exps, rhs in sorted(by_monomial.items()):
            if not src:
                return None
            sol = solve(rows, rhs)
            if sol is None:
                return None
            piece = PolyForm(
                algebra, 1, {J: ring.monomial(exps, c) for J, c in zip(src, sol) if c != 0}
            )
            out = out + piece
    return out


def _off_image_part(algebra: StratifiedAlgebra, beta: PolyForm) -> PolyForm:
    """The component of beta orthogonal to Im d_0, fiberwise (the obstruction)."""
    return beta - beta.apply_fiberwise(
        lambda xi: fiber_d0(fiber_d0_pinv(xi)), 0
    )


@dataclass
class LiftedHom:
    """The lift (u, X) -> (scale u + eta(X), M X) between central extensions."""

    source_extension: CentralExtension
    target_extension: CentralExtension
    base: GradedHom
    eta: PolyForm
    scale: Poly | Rational

    def matrix(self):
        """(n2+1) x (n1+1) block matrix [[M, 0], [eta row, scale]]."""
        src, dst = self.base.source, self.base.target
        ring = src.ring()
        rows = []
        for i in range(dst.dim):
            row = [self.base.matrix[i][j] for j in range(src.dim)]
            row.append(ring.zero())
            rows.append(row)
        last = []
        for j in range(1, src.dim + 1):
            entry = self.eta.coeffs.get((j,), ring.zero())
            last.append(entry)
        last.append(self.scale if isinstance(self.scale, Poly) else ring.constant(self.scale))
        rows.append(last)
        return rows

    def as_hom(self) -> GradedHom:
        return GradedHom(
            self.source_extension.extended, self.target_extension.extended, self.matrix()
        )

    def verify(self) -> bool:
        """Bracket preservation of the lifted matrix, as polynomial identities."""
        return hom_check(self.as_hom(), require_graded=False).ok


@dataclass
class LiftResult:
    lifted: LiftedHom | None
    obstruction: PolyForm | None
    mode: str  # "strict", "scaled" or "obstructed"

    @property
    def ok(self) -> bool:
        return self.lifted is not None


def lift_homomorphism(
    hom: GradedHom,
    omega1: FiberForm,
    zeta: FiberForm,
    allow_scaling: bool = False,
) -> LiftResult:
    """Lift hom across the extensions by omega1 (source) and zeta (target).

    Strict mode solves omega1 - hom^* zeta = d_0 eta, giving the classical
    lift with a unit center entry.  With allow_scaling, a center rescaling
    lambda with lambda omega1 - hom^* zeta = d_0 eta is also attempted, which
    recovers e.g. the det(D phi) corner entry for area-cocycle lifts.
    """
    src = hom.source
    ring = src.ring()
    ext1 = central_extend(src, omega1)
    ext2 = central_extend(hom.target, zeta)
    pulled = _pullback_2form(hom, zeta)
    omega1_poly = PolyForm.from_fiber(omega1)

    eta = _fiberwise_d0_solve(src, omega1_poly - pulled)
    if eta is not None:
        lifted = LiftedHom(ext1, ext2, hom, eta, ONE)
        return LiftResult(lifted, None, "strict")

    if allow_scaling:
        scaled = _solve_scaled_lift(src, omega1, pulled)
        if scaled is not None:
            scale, eta = scaled
            lifted = LiftedHom(ext1, ext2, hom, eta, scale)
            return LiftResult(lifted, None, "scaled")

    return LiftResult(None, _off_image_part(src, omega1_poly - pulled), "obstructed")


def _solve_scaled_lift(algebra: StratifiedAlgebra, omega1: FiberForm, pulled: PolyForm):
    """Solve lambda omega1 - pulled = d_0 eta with a polynomial scalar lambda.

    One scalar unknown lambda_m per monomial, shared across all the weight
    components of omega1, so the solve is joint over the weights.
    """
    ring = algebra.ring()
    weights = sorted(
        set(omega1.weight_components()) | set(pulled.weight_components())
    )
    blocks = {p: _d0_matrix(algebra, 1, p) for p in weights}
    monomials = sorted({exps for f in pulled.coeffs.values() for exps in f.terms})
    scale_terms: dict = {}
    eta = PolyForm.zero(algebra, 1)
    for exps in monomials:
        rows: list[list] = []
        rhs: list = []
        eta_slots: list[tuple[int, Index]] = []
        for p in weights:
            src, dst, cols = blocks[p]
            offset = len(eta_slots)
            eta_slots.extend((p, J) for J in src)
            om_vec = [omega1.coeffs.get(I, ZERO) for I in dst]
            for e, I in enumerate(dst):
                f = pulled.coeffs.get(I)
                target = f.terms.get(exps, ZERO) if f is not None else ZERO
                row = [om_vec[e]] + [ZERO] * len(eta_slots)
                for u in range(len(src)):
                    row[1 + offset + u] = cols[u][e]
                rows.append(row)
                rhs.append(target)
        width = 1 + len(eta_slots)
        rows = [row + [ZERO] * (width - len(row)) for row in rows]
        sol = solve(rows, rhs)
        if sol is None:
            return None
        lam = sol[0]
        if lam != 0:
            scale_terms[exps] = lam
        for (p, J), c in zip(eta_slots, sol[1:]):
            if c != 0:
                eta = eta + PolyForm(algebra, 1, {J: ring.monomial(exps, -c)})
    scale = Poly(ring, dict(scale_terms))
    return scale, eta


# -- the Pansu lifting workflow ---------------------------------------------------


@dataclass
class PansuLiftReport:
    omega: FiberForm
    primitives: dict[int, PolyForm] = field(default_factory=dict)  # s -> alpha_{s-1}
    pulled_dc: dict[int, PolyForm] = field(default_factory=dict)  # s -> d_c^{s-1} phi* alpha
    invariant: bool = False
    source_cocycle: FiberForm | None = None
    residual: PolyForm | None = None
    source_extension: CentralExtension | None = None
    target_extension: CentralExtension | None = None
    lift: LiftedHom | None = None
    trivial: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.invariant

    def summary(self) -> str:
        if not self.invariant:
            return "lift obstructed: pulled-back cocycle is not left-invariant"
        if self.trivial:
            return "pullback cocycle vanishes: trivial extension on the source"
        return "lift built: " + (self.source_extension.verdict() if self.source_extension else "")


def lift_pansu_workflow(pmap, omega: FiberForm) -> PansuLiftReport:
    """Lift a Pansu derivative across the extensions by omega and its pullback.

    Splits omega by weight, finds Rumin 1-form primitives alpha_{s-1} with
    d_c^{s-1} alpha_{s-1} = omega_s, pulls them back and tests whether
    sum_s d_c^{s-1} phi_P^* alpha_{s-1} is left-invariant; when it is, that
    invariant form is the source cocycle and the lift follows.
    """
    from .pansu import PolyMap, pansu_derivative, pansu_pullback  # local: avoid cycle

    target = pmap.target
    source = pmap.source
    engine2 = SpectralEngine(target)
    engine1 = SpectralEngine(source)
    field_ = pansu_derivative(pmap)
    report = PansuLiftReport(omega=omega)

    if not cocycle_check(target, omega):
        raise ValueError("omega must be d_0-closed")
    omega_poly = PolyForm.from_fiber(omega)
    if not engine2.is_rumin(omega_poly):
        raise ValueError("omega must be a harmonic (Rumin) 2-form; shift by a coboundary first")

    total = PolyForm.zero(source, 2)
    for s, comp in omega.weight_components().items():
        alpha = _dc_primitive(engine2, comp, s)
        if alpha is None:
            report.notes.append(f"no Rumin primitive found for the weight-{s} part")
            return report
        report.primitives[s] = alpha
        pulled = engine1.pi0(pansu_pullback(field_, alpha))
        beta = engine1.dc_component(pulled, s - 1) if not pulled.is_zero() else PolyForm.zero(source, 2)
        report.pulled_dc[s] = beta
        total = total + beta

    if not total.is_invariant():
        report.residual = total - PolyForm.from_fiber(total.constant_part())
        return report

    report.invariant = True
    zeta_inv = total.constant_part()
    report.source_cocycle = zeta_inv
    ext2 = central_extend(target, omega)
    ext1 = central_extend(source, zeta_inv)
    report.target_extension = ext2
    report.source_extension = ext1
    if zeta_inv.is_zero():
        report.trivial = True

    pulled_omega = pansu_pullback(field_, omega_poly)
    eta = _fiberwise_d0_solve(source, PolyForm.from_fiber(zeta_inv) - pulled_omega)
    if eta is None:
        report.notes.append(
            "source cocycle and pointwise pullback are not cohomologous fiberwise"
        )
        report.invariant = False
        return report
    base = GradedHom(source, target, field_.matrix)
    report.lift = LiftedHom(ext1, ext2, base, eta, ONE)
    return report


def _dc_primitive(engine: SpectralEngine, omega_s: FiberForm, s: int) -> PolyForm | None:
    """alpha in E_{s-1,1}^{1,0} with d_c^{s-1} alpha = omega_s (exact solve).

    Weight-1 Rumin 1-forms with coefficient degree s-1 form the exact slice
    where a primitive must live; the conditions d_c^i alpha = 0 for i < s-1
    select Z_{s-1}.
    """
    algebra = engine.algebra
    from .spectral import _slice_cell, _from_vector, _to_vector

    key = (1, 1, s - 1)
    cell = _slice_cell(algebra, *key)
    if not cell:
        return None
    columns = []
    basis_forms = []
    for t, (exps, I) in enumerate(cell):
        form = _from_vector(algebra, key, [ONE if u == t else ZERO for u in range(len(cell))])
        basis_forms.append(form)
        columns.append(engine.dc_weight_split(form))
    rows: list[list] = []
    rhs: list = []
    # d_c^{s-1} alpha = omega_s on the invariant slice of weight s
    target_key = (2, s, 0)
    target_cell = _slice_cell(algebra, *target_key)
    omega_vec = _to_vector(algebra, PolyForm.from_fiber(omega_s), target_key)
    for e in range(len(target_cell)):
        rows.append([
            _to_vector(algebra, col.get(s - 1, PolyForm.zero(algebra, 2)), target_key)[e]
            for col in columns
        ])
        rhs.append(omega_vec[e])
    # d_c^i alpha = 0 for i < s-1
    for i in range(1, s - 1):
        ikey = (2, 1 + i, s - 1 - i)
        icell = _slice_cell(algebra, *ikey)
        for e in range(len(icell)):
            rows.append([
                _to_vector(algebra, col.get(i, PolyForm.zero(algebra, 2)), ikey)[e]
                for col in columns
            ])
            rhs.append(ZERO)
    sol = solve(rows, rhs)
    if sol is None:
        return None
    out = PolyForm.zero(algebra, 1)
    for c, form in zip(sol, basis_forms):
        if c != 0:
            out = out + form * c
    return out
