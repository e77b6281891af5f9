"""Polynomial group maps, contact equations, Pansu derivatives and pullbacks.

A map between graded groups is stored through its components in exponential
coordinates.  Its differential in the left-invariant frames ("adapted
Jacobian") has entries

    a_ij = Pi_i( sum_m (-1)^m/(m+1)! ad(phi(x))^m ( sum_k (X_j phi_k) X_k ) ),

a finite sum by nilpotency.  Entries pairing a lower source layer with a
higher target layer must vanish for the map to be Pansu differentiable; those
polynomials are the contact equations.  When they vanish, the Pansu derivative
keeps the same-layer blocks and zeroes every cross-layer entry, and the Pansu
pullback transports forms through minors of that matrix field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    GradedHom,
    StratifiedAlgebra,
    frame_apply,
    hom_check,
)
from .fiber import index_weight, indices
from .forms import PolyForm, d_component, exterior_derivative
from .poly import Poly, PolyRing
from .scalars import ONE, ZERO, Rational, rat
from .spectral import SpectralEngine, WitnessChain, _from_vector


class ContactViolation(ValueError):
    """Raised when an operation requires contact equations that fail."""

    def __init__(self, violations):
        self.violations = violations
        first = violations[0]
        super().__init__(
            f"contact equation fails at entry {first[0]}: {first[1]} != 0"
        )


class PolyMap:
    """A polynomial map in exponential coordinates."""

    def __init__(self, source: StratifiedAlgebra, target: StratifiedAlgebra, components):
        self.source = source
        self.target = target
        ring = source.ring()
        comps = []
        for comp in components:
            if isinstance(comp, str):
                comp = ring.from_string(comp)
            elif not isinstance(comp, Poly):
                comp = ring.constant(rat(comp))
            if comp.ring != ring:
                raise ValueError("components must live in the source coordinate ring")
            comps.append(comp)
        if len(comps) != target.dim:
            raise ValueError("one component per target coordinate required")
        self.components = tuple(comps)

    @classmethod
    def identity(cls, algebra: StratifiedAlgebra) -> "PolyMap":
        ring = algebra.ring()
        return cls(algebra, algebra, ring.gens())

    def __call__(self, point: Sequence) -> list[Rational]:
        return [c.evaluate(point) for c in self.components]

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """self o inner (inner first)."""
        if inner.target != self.source:
            raise ValueError("composition type mismatch")
        images = list(inner.components)
        return PolyMap(
            inner.source, self.target, [c.substitute(images) for c in self.components]
        )

    def compose_scalar(self, f: Poly) -> Poly:
        """f o self for a polynomial on the target."""
        return f.substitute(list(self.components))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


# -- the adapted Jacobian ----------------------------------------------------


def adapted_jacobian(pmap: PolyMap) -> list[list[Poly]]:
    """Classical differential in left-invariant frames at source and image."""
    src, dst = pmap.source, pmap.target
    ring = src.ring()
    columns = []
    for j in range(1, src.dim + 1):
        vec = [frame_apply(src, j, comp) for comp in pmap.components]
        total = list(vec)
        power = vec
        sign = -1
        for m in range(1, dst.step):
            power = dst.bracket(list(pmap.components), power)
            coeff = rat(sign, math.factorial(m + 1))
            total = [t + p * coeff for t, p in zip(total, power)]
            sign = -sign
        columns.append(total)
    return [[columns[j][i] for j in range(src.dim)] for i in range(dst.dim)]


@dataclass
class ContactReport:
    satisfied: bool
    violations: list[tuple[tuple[int, int], Poly]]
    layer_one_violations: list[tuple[tuple[int, int], Poly]]

    def summary(self) -> str:
        if self.satisfied:
            return "contact equations satisfied"
        lines = [f"a[{i},{j}] = {p}" for (i, j), p in self.violations]
        return "contact equations violated: " + "; ".join(lines)


def contact_check(pmap: PolyMap, jacobian: list[list[Poly]] | None = None) -> ContactReport:
    """Emit the polynomials a_ij with w(X_j^source) < w(X_i^target).

    The map is contact iff all of them are the zero polynomial; the subsystem
    with X_j in the first layer is equivalent and reported separately.
    """
    jac = jacobian if jacobian is not None else adapted_jacobian(pmap)
    violations = []
    layer_one = []
    for i in range(1, pmap.target.dim + 1):
        for j in range(1, pmap.source.dim + 1):
            if pmap.source.weight_of(j) < pmap.target.weight_of(i):
                entry = jac[i - 1][j - 1]
                if not entry.is_zero():
                    violations.append(((i, j), entry))
                    if pmap.source.weight_of(j) == 1:
                        layer_one.append(((i, j), entry))
    return ContactReport(not violations, violations, layer_one)


def contact_equations(pmap: PolyMap) -> dict[tuple[int, int], Poly]:
    """All sub-diagonal entries of the adapted Jacobian (zero or not)."""
    jac = adapted_jacobian(pmap)
    out = {}
    for i in range(1, pmap.target.dim + 1):
        for j in range(1, pmap.source.dim + 1):
            if pmap.source.weight_of(j) < pmap.target.weight_of(i):
                out[(i, j)] = jac[i - 1][j - 1]
    return out


# -- the Pansu derivative ------------------------------------------------------


@dataclass
class PansuDerivativeField:
    """Strata-preserving matrix field: same-layer blocks of the adapted Jacobian."""

    map: PolyMap
    matrix: list[list[Poly]]  # target dim x source dim, entries in source ring

    @property
    def source(self) -> StratifiedAlgebra:
        return self.map.source

    @property
    def target(self) -> StratifiedAlgebra:
        return self.map.target

    def at_point(self, point: Sequence) -> GradedHom:
        values = [[entry.evaluate(point) for entry in row] for row in self.matrix]
        return GradedHom(self.source, self.target, values)

    def as_graded_hom(self) -> GradedHom:
        return GradedHom(self.source, self.target, self.matrix)


def pansu_derivative(pmap: PolyMap) -> PansuDerivativeField:
    """Diagonal blocks of the adapted Jacobian; contact failure aborts."""
    jac = adapted_jacobian(pmap)
    report = contact_check(pmap, jac)
    if not report.satisfied:
        raise ContactViolation(report.violations)
    ring = pmap.source.ring()
    zero = ring.zero()
    matrix = []
    for i in range(1, pmap.target.dim + 1):
        row = []
        for j in range(1, pmap.source.dim + 1):
            if pmap.source.weight_of(j) == pmap.target.weight_of(i):
                row.append(jac[i - 1][j - 1])
            else:
                row.append(zero)
        matrix.append(row)
    return PansuDerivativeField(pmap, matrix)


@dataclass
class FieldHomReport:
    ok: bool
    mode: str  # "symbolic" or "sampled"
    failure: tuple | None = None


def pansu_hom_check(field: PansuDerivativeField, symbolic_degree_cap: int = 6,
                    samples: int = 25, seed: int = 7) -> FieldHomReport:
    """Check the matrix field is a Lie algebra homomorphism.

    As a polynomial identity when entry degrees stay small, otherwise at
    random rational points; the mode used is reported.
    """
    degs = [f.weighted_degree() or 0 for row in field.matrix for f in row]
    if max(degs, default=0) <= symbolic_degree_cap:
        report = hom_check(field.as_graded_hom())
        return FieldHomReport(report.ok, "symbolic", report.bracket_failure)
    import random

    rng = random.Random(seed)
    for _ in range(samples):
        point = [rat(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(field.source.dim)]
        report = hom_check(field.at_point(point))
        if not report.ok:
            return FieldHomReport(False, "sampled", (tuple(point), report.bracket_failure))
    return FieldHomReport(True, "sampled")


# -- the Pansu pullback ---------------------------------------------------------


def _minor(matrix, rows: tuple[int, ...], cols: tuple[int, ...], ring: PolyRing) -> Poly:
    """Determinant of the submatrix (rows x cols), cofactor expansion."""
    k = len(rows)
    if k == 0:
        return ring.one()
    if k == 1:
        return matrix[rows[0]][cols[0]]
    total = ring.zero()
    sign = 1
    for t, r in enumerate(rows):
        entry = matrix[r][cols[0]]
        if not entry.is_zero():
            sub = _minor(matrix, rows[:t] + rows[t + 1 :], cols[1:], ring)
            if not sub.is_zero():
                total = total + entry * sub * sign
        sign = -sign
    return total


def pansu_pullback(field: PansuDerivativeField | PolyMap, alpha: PolyForm) -> PolyForm:
    """(phi_P^* alpha) = sum (f_I o phi) . theta_I(D_P phi ., ..., D_P phi .)."""
    if isinstance(field, PolyMap):
        field = pansu_derivative(field)
    pmap = field.map
    if alpha.algebra != pmap.target:
        raise ValueError("form must live on the target group")
    src_ring = pmap.source.ring()
    out = PolyForm.zero(pmap.source, alpha.degree)
    matrix = field.matrix
    source_indices = indices(pmap.source, alpha.degree)
    for I, f in alpha.coeffs.items():
        pulled_coeff = pmap.compose_scalar(f)
        if pulled_coeff.is_zero():
            continue
        wI = index_weight(pmap.target, I)
        rows = tuple(i - 1 for i in I)
        for J in source_indices:
            if index_weight(pmap.source, J) != wI:
                continue  # strata preservation kills cross-weight minors
            det = _minor(matrix, rows, tuple(j - 1 for j in J), src_ring)
            if det.is_zero():
                continue
            out = out + PolyForm(pmap.source, alpha.degree, {J: pulled_coeff * det})
    return out


# -- commutator witnesses --------------------------------------------------------


@dataclass
class PullbackCommutators:
    """Both sides of d/d_c against the Pansu pullback, with their mismatches."""

    d_of_pullback: PolyForm
    pullback_of_d: PolyForm
    d_discrepancy: PolyForm
    dc_of_pullback: PolyForm | None = None
    pullback_of_dc: PolyForm | None = None
    dc_discrepancy: PolyForm | None = None
    dc_discrepancy_mod_rumin: PolyForm | None = None


def pullback_commutators(pmap: PolyMap, alpha: PolyForm) -> PullbackCommutators:
    """The exact discrepancies d phi* - phi* d and d_c phi* - phi* d_c on alpha."""
    field = pansu_derivative(pmap)
    pulled = pansu_pullback(field, alpha)
    d_pull = exterior_derivative(pulled)
    pull_d = pansu_pullback(field, exterior_derivative(alpha))
    result = PullbackCommutators(
        d_of_pullback=d_pull,
        pullback_of_d=pull_d,
        d_discrepancy=d_pull - pull_d,
    )
    engine2 = SpectralEngine(pmap.target)
    if engine2.is_rumin(alpha):
        engine1 = SpectralEngine(pmap.source)
        dc_alpha = engine2.rumin_dc(alpha)
        pulled_rumin = engine1.pi0(pulled)
        dc_pull = engine1.rumin_dc(pulled_rumin)
        pull_dc = pansu_pullback(field, dc_alpha)
        result.dc_of_pullback = dc_pull
        result.pullback_of_dc = pull_dc
        result.dc_discrepancy = dc_pull - pull_dc
        result.dc_discrepancy_mod_rumin = dc_pull - engine1.pi0(pull_dc)
    return result


# -- the commutativity theorem as an executable check -----------------------------


@dataclass
class CommutativityReport:
    page: int
    alpha: PolyForm
    target_chain: WitnessChain
    source_chain: WitnessChain | None
    delta_target: PolyForm
    pulled_delta: PolyForm
    delta_source: PolyForm | None
    difference: PolyForm | None
    certificate: dict[int, PolyForm] | None
    z_inclusion_ok: bool
    b_inclusion_checked: int = 0
    b_inclusion_ok: bool = True
    grades: tuple[int, ...] = ()

    @property
    def passed(self) -> bool:
        return self.z_inclusion_ok and self.certificate is not None and self.b_inclusion_ok

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} page {self.page}: pullback of Delta_{self.page} matches "
            f"mod B_{self.page} (grades {list(self.grades)})"
        )


def commutativity_check(
    pmap: PolyMap,
    alpha: PolyForm | WitnessChain,
    page: int,
    check_b_inclusion: bool = True,
) -> CommutativityReport:
    """Verify phi_P^* Delta_i(alpha) = Delta_i(phi_P^* alpha) mod B_i(source).

    Also certifies phi_P^* Z_i(G2) and phi_P^* B_i(G2) land in Z_i(G1) and
    B_i(G1) for the data in play, with explicit certificates.
    """
    engine2 = SpectralEngine(pmap.target)
    engine1 = SpectralEngine(pmap.source)
    field = pansu_derivative(pmap)

    if isinstance(alpha, WitnessChain):
        chain2 = alpha
        if chain2.order != page or not chain2.check():
            raise ValueError("invalid witness chain for the requested page")
        alpha_form = chain2.alpha
    else:
        alpha_form = alpha
        chain2 = engine2.z_membership(alpha_form, page)
        if chain2 is None:
            raise ValueError(f"form is not in Z_{page} of the target group")

    delta2 = engine2.delta_r(chain2, page).rep
    pulled_delta = pansu_pullback(field, delta2)

    pulled_alpha = pansu_pullback(field, alpha_form)
    chain1 = engine1.z_membership(pulled_alpha, page)
    z_ok = chain1 is not None

    delta1 = None
    difference = None
    certificate = None
    if z_ok:
        delta1 = engine1.delta_r(chain1, page).rep
        difference = pulled_delta - delta1
        certificate = engine1.b_membership(difference, page)

    grades = tuple(alpha_form.grade_components().keys())
    report = CommutativityReport(
        page=page,
        alpha=alpha_form,
        target_chain=chain2,
        source_chain=chain1,
        delta_target=delta2,
        pulled_delta=pulled_delta,
        delta_source=delta1,
        difference=difference,
        certificate=certificate,
        z_inclusion_ok=z_ok,
        grades=grades,
    )
    if check_b_inclusion and not alpha_form.is_zero():
        p = alpha_form.weight()
        k = alpha_form.degree
        checked = 0
        ok = True
        for grade in grades:
            space = engine2.b_space(page, p, k, grade)
            for vec in space.basis:
                beta = _from_vector(pmap.target, (k, p, grade - p), vec)
                pulled = pansu_pullback(field, beta)
                checked += 1
                if engine1.b_membership(pulled, page) is None:
                    ok = False
                    break
            if not ok:
                break
        report.b_inclusion_checked = checked
        report.b_inclusion_ok = ok
    return report


# -- stock contact maps ------------------------------------------------------------


def potential(P: Poly, Q: Poly) -> Poly:
    """Primitive h of a closed planar 1-form P dx1 + Q dx2 (radial integration).

    P and Q must involve only the first two ring variables.  Exact for
    polynomials: a degree-d monomial of x1 P + x2 Q contributes itself
    divided by d.
    """
    ring = P.ring
    x1, x2 = ring.variable(0), ring.variable(1)
    combined = x1 * P + x2 * Q
    terms = {}
    for exps, c in combined.terms.items():
        if any(e for e in exps[2:]):
            raise ValueError("planar potential needs coefficients in x1, x2 only")
        d = exps[0] + exps[1]
        terms[exps] = c / d
    return Poly(ring, terms)


def heisenberg_lift(algebra: StratifiedAlgebra, phi1: Poly, phi2: Poly) -> PolyMap:
    """Lift a constant-Jacobian planar polynomial map to a contact self-map.

    For phi = (phi1(x1,x2), phi2(x1,x2)) with det D phi = c constant, the map
    (phi1, phi2, c x3 + h) with the right potential h satisfies the contact
    equations of the Heisenberg group.
    """
    ring = algebra.ring()
    if algebra.dim != 3 or algebra.weights != (1, 1, 2):
        raise ValueError("heisenberg_lift expects the first Heisenberg group")
    d11, d12 = phi1.partial(0), phi1.partial(1)
    d21, d22 = phi2.partial(0), phi2.partial(1)
    det = d11 * d22 - d12 * d21
    if not det.is_constant():
        raise ValueError("planar map must have constant Jacobian determinant")
    c = det.constant_value()
    x1, x2 = ring.variable(0), ring.variable(1)
    half = rat(1, 2)
    P = (phi1 * d21 - phi2 * d11) * half + x2 * (c * half)
    Q = (phi1 * d22 - phi2 * d12) * half - x1 * (c * half)
    h = potential(P, Q) if not (P.is_zero() and Q.is_zero()) else ring.zero()
    phi3 = ring.variable(2) * c + h
    return PolyMap(algebra, algebra, [phi1, phi2, phi3])
