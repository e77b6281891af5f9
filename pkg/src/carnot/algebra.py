"""Stratified (and more generally positively graded) Lie algebras.

An algebra is given by an adapted basis X_1..X_n, one positive integer weight
per basis vector, and rational structure constants [X_i, X_j] = sum c^k_ij X_k.
Elements are plain coefficient lists (rationals, or polynomials when the
coefficients depend on a point).  The group sits behind the scenes through
exponential coordinates of the first kind: the polynomial group law is the
truncated Baker-Campbell-Hausdorff series, and differentiating it at the
identity yields the left-invariant frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .linalg import Subspace
from .poly import Poly, PolyRing
from .scalars import ONE, ZERO, Rational, rat


def _scale(c, x):
    """c * x for x either Rational or Poly (keeps Poly on the left)."""
    if isinstance(x, Poly):
        return x * c
    return c * x


class StratifiedAlgebra:
    """Immutable graded Lie algebra presented by structure constants."""

    __slots__ = (
        "name",
        "labels",
        "weights",
        "coordinates",
        "_table",
        "_antisymmetry_issues",
        "_hash",
    )

    def __init__(
        self,
        weights: Sequence[int],
        brackets: Sequence[tuple[int, int, Sequence[tuple[int, object]]]],
        labels: Sequence[str] | None = None,
        coordinates: Sequence[str] | None = None,
        name: str = "",
    ):
        """brackets entries are (i, j, [(k, c), ...]) meaning [X_i,X_j] = sum c X_k.

        Indices are 1-based, matching the adapted-basis notation.  Pairs may be
        given in either order; inconsistent duplicates are kept as validation
        issues rather than raised, so that validation can report them.
        """
        n = len(weights)
        self.name = name
        self.weights = tuple(int(w) for w in weights)
        if any(w <= 0 for w in self.weights):
            raise ValueError("basis weights must be positive integers")
        self.labels = tuple(labels) if labels else tuple(f"X{i}" for i in range(1, n + 1))
        self.coordinates = (
            tuple(coordinates) if coordinates else tuple(f"x{i}" for i in range(1, n + 1))
        )
        if len(self.labels) != n or len(self.coordinates) != n:
            raise ValueError("labels/coordinates must match the dimension")

        table: dict[tuple[int, int], dict[int, Rational]] = {}
        issues: list[str] = []
        for i, j, terms in brackets:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"bracket indices ({i},{j}) out of range")
            entry = {}
            for k, c in terms:
                if not 1 <= k <= n:
                    raise ValueError(f"bracket target index {k} out of range")
                q = rat(c)
                if q != 0:
                    entry[k] = entry.get(k, ZERO) + q
            entry = {k: c for k, c in entry.items() if c != 0}
            if i == j:
                if entry:
                    issues.append(f"[{self.labels[i-1]},{self.labels[i-1]}] must vanish")
                continue
            key, sign = ((i, j), 1) if i < j else ((j, i), -1)
            signed = {k: sign * c for k, c in entry.items()}
            if key in table and table[key] != signed:
                issues.append(
                    f"inconsistent values given for [{self.labels[key[0]-1]},{self.labels[key[1]-1]}]"
                )
            else:
                table[key] = signed
        self._table = {k: tuple(sorted(v.items())) for k, v in sorted(table.items()) if v}
        self._antisymmetry_issues = tuple(issues)
        self._hash = None

    # -- basic structure ---------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def step(self) -> int:
        return max(self.weights)

    @property
    def layer_weights(self) -> tuple[int, ...]:
        """The distinct weights, ascending."""
        return tuple(sorted(set(self.weights)))

    def layer(self, w: int) -> list[int]:
        """1-based indices of basis vectors of weight w."""
        return [j + 1 for j, wj in enumerate(self.weights) if wj == w]

    def weight_of(self, index: int) -> int:
        """Weight of the basis vector X_index (1-based)."""
        return self.weights[index - 1]

    @property
    def homogeneous_dimension(self) -> int:
        return sum(self.weights)

    def structure_constant(self, i: int, j: int, k: int) -> Rational:
        if i == j:
            return ZERO
        sign = 1 if i < j else -1
        entry = dict(self._table.get((min(i, j), max(i, j)), ()))
        return sign * entry.get(k, ZERO)

    def bracket_basis(self, i: int, j: int) -> dict[int, Rational]:
        """[X_i, X_j] as a sparse map index -> coefficient."""
        if i == j:
            return {}
        sign = 1 if i < j else -1
        return {k: sign * c for k, c in self._table.get((min(i, j), max(i, j)), ())}

    def bracket(self, u: Sequence, v: Sequence) -> list:
        """Bilinear bracket of coefficient vectors (Rational or Poly entries)."""
        out: dict[int, object] = {}
        for (i, j), terms in self._table.items():
            ui, uj, vi, vj = u[i - 1], u[j - 1], v[i - 1], v[j - 1]
            coeff = ui * vj - uj * vi
            if isinstance(coeff, Poly):
                if coeff.is_zero():
                    continue
            elif coeff == 0:
                continue
            for k, c in terms:
                prev = out.get(k)
                piece = _scale(c, coeff)
                out[k] = piece if prev is None else prev + piece
        zero: object = ZERO
        if any(isinstance(x, Poly) for x in list(u) + list(v)):
            ring = next(x.ring for x in list(u) + list(v) if isinstance(x, Poly))
            zero = ring.zero()
        return [out.get(k, zero) for k in range(1, self.dim + 1)]

    def basis_vector(self, index: int) -> list[Rational]:
        v = [ZERO] * self.dim
        v[index - 1] = ONE
        return v

    # -- identity ----------------------------------------------------------

    def _key(self):
        return (self.weights, tuple(sorted(self._table.items())), self.labels, self.coordinates)

    def __eq__(self, other) -> bool:
        return isinstance(other, StratifiedAlgebra) and self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return f"StratifiedAlgebra({self.name or self.labels}, weights={self.weights})"

    # -- attached rings ----------------------------------------------------

    def ring(self) -> PolyRing:
        """Polynomial coefficient ring in the exponential coordinates."""
        return _coordinate_ring(self)

    def double_ring(self) -> PolyRing:
        """Ring in two copies of the coordinates, for group-law polynomials."""
        return _double_ring(self)


@lru_cache(maxsize=None)
def _coordinate_ring(algebra: StratifiedAlgebra) -> PolyRing:
    return PolyRing(algebra.coordinates, algebra.weights)


@lru_cache(maxsize=None)
def _double_ring(algebra: StratifiedAlgebra) -> PolyRing:
    names = [f"{c}@1" for c in algebra.coordinates] + [f"{c}@2" for c in algebra.coordinates]
    return PolyRing(names, algebra.weights + algebra.weights)


# -- validation --------------------------------------------------------------


@dataclass
class ValidationReport:
    algebra: StratifiedAlgebra
    antisymmetry_issues: tuple[str, ...]
    jacobi_failures: list[tuple[int, int, int]]
    grading_failures: list[tuple[int, int, int]]
    weight_one_present: bool
    layer_one_generates: bool
    homogeneous_dimension: int = 0

    @property
    def graded_ok(self) -> bool:
        return (
            not self.antisymmetry_issues
            and not self.jacobi_failures
            and not self.grading_failures
        )

    @property
    def stratified(self) -> bool:
        return self.graded_ok and self.weight_one_present and self.layer_one_generates

    def ok(self, strict_stratified: bool = True) -> bool:
        return self.stratified if strict_stratified else self.graded_ok

    def summary(self) -> str:
        if self.stratified:
            return f"valid Carnot algebra, Q={self.homogeneous_dimension}"
        if self.graded_ok:
            return (
                "valid homogeneous (graded) Lie algebra, not stratifiable, "
                f"Q={self.homogeneous_dimension}"
            )
        return "invalid: " + "; ".join(self.failure_lines())

    def failure_lines(self) -> list[str]:
        lines = list(self.antisymmetry_issues)
        lines += [
            f"Jacobi identity fails on (X{i},X{j},X{k})" for i, j, k in self.jacobi_failures
        ]
        lines += [
            f"grading violated: [X{i},X{j}] has a component on X{k}"
            for i, j, k in self.grading_failures
        ]
        if not self.weight_one_present:
            lines.append("no layer of weight 1")
        elif not self.layer_one_generates:
            lines.append("layer 1 does not generate the algebra")
        return lines


def validate_algebra(algebra: StratifiedAlgebra) -> ValidationReport:
    """Check antisymmetry, Jacobi, grading compatibility and stratification."""
    n = algebra.dim
    jacobi_failures = []
    for i in range(1, n + 1):
        ei = algebra.basis_vector(i)
        for j in range(i + 1, n + 1):
            ej = algebra.basis_vector(j)
            bij = algebra.bracket(ei, ej)
            for k in range(j + 1, n + 1):
                ek = algebra.basis_vector(k)
                total = algebra.bracket(ei, algebra.bracket(ej, ek))
                total = [a + b for a, b in zip(total, algebra.bracket(ej, algebra.bracket(ek, ei)))]
                total = [a + b for a, b in zip(total, algebra.bracket(ek, bij))]
                if any(c != 0 for c in total):
                    jacobi_failures.append((i, j, k))

    grading_failures = []
    for (i, j), terms in algebra._table.items():
        for k, _ in terms:
            if algebra.weight_of(k) != algebra.weight_of(i) + algebra.weight_of(j):
                grading_failures.append((i, j, k))

    weight_one = algebra.layer(1)
    generates = bool(weight_one)
    if generates:
        # g_{m+1} = [g_1, g_m] must exhaust every layer.
        current = [algebra.basis_vector(i) for i in weight_one]
        reached = Subspace(n, current)
        for w in range(2, algebra.step + 1):
            nxt = []
            for i in weight_one:
                ei = algebra.basis_vector(i)
                for v in current:
                    nxt.append(algebra.bracket(ei, v))
            layer_span = Subspace(n, [algebra.basis_vector(i) for i in algebra.layer(w)])
            got = Subspace(n, nxt)
            if not (got.contains_subspace(layer_span) and layer_span.contains_subspace(got)):
                generates = False
                break
            current = got.basis
            reached = reached + got
        if generates and reached.dim != n:
            generates = False

    return ValidationReport(
        algebra=algebra,
        antisymmetry_issues=algebra._antisymmetry_issues,
        jacobi_failures=jacobi_failures,
        grading_failures=grading_failures,
        weight_one_present=bool(weight_one),
        layer_one_generates=generates,
        homogeneous_dimension=algebra.homogeneous_dimension,
    )


# -- dilations ---------------------------------------------------------------

_LAMBDA_RING = PolyRing(("lam",), (1,))


def dilation_apply(algebra: StratifiedAlgebra, v: Sequence) -> list[Poly]:
    """delta_lambda v with lambda kept formal: entry j becomes v_j * lam^w_j."""
    lam = _LAMBDA_RING.variable(0)
    out = []
    for coeff, w in zip(v, algebra.weights):
        out.append(lam**w * coeff if coeff != 0 else _LAMBDA_RING.zero())
    return out


# -- the group law via the Dynkin series -------------------------------------


@lru_cache(maxsize=None)
def _dynkin_words(step: int) -> tuple[tuple[Rational, tuple[int, ...]], ...]:
    """Coefficients of the BCH series as nested-bracket words over {0,1}.

    A word (a_1..a_m) stands for [Z_{a_1},[Z_{a_2},[...,Z_{a_m}]]] with Z_0 = X
    and Z_1 = Y; only words of length <= step survive in a step-nilpotent
    algebra.
    """
    acc: dict[tuple[int, ...], Rational] = {}

    def blocks(remaining: int, nblocks: int, prefix: list[tuple[int, int]]):
        if nblocks == 0:
            if prefix and remaining < sum(r + s for r, s in prefix) + 1:
                pass
            yield list(prefix)
            return
        for r in range(remaining + 1):
            for s in range(remaining - r + 1):
                if r + s == 0:
                    continue
                prefix.append((r, s))
                yield from blocks(remaining - r - s, nblocks - 1, prefix)
                prefix.pop()

    for n in range(1, step + 1):
        for combo in blocks(step, n, []):
            if len(combo) != n:
                continue
            m = sum(r + s for r, s in combo)
            if m == 0 or m > step:
                continue
            word = []
            fact = 1
            for r, s in combo:
                word += [0] * r + [1] * s
                fact *= math.factorial(r) * math.factorial(s)
            if len(word) >= 2 and word[-1] == word[-2]:
                continue  # nested bracket ends in [Z,Z] = 0
            coeff = rat((-1) ** (n - 1), n * m * fact)
            key = tuple(word)
            acc[key] = acc.get(key, ZERO) + coeff
    pruned = tuple((c, w) for w, c in sorted(acc.items()) if c != 0)
    return pruned


@lru_cache(maxsize=None)
def bch_product(algebra: StratifiedAlgebra) -> tuple[Poly, ...]:
    """Coordinates of log(exp x * exp y) as polynomials in (x, y)."""
    ring = algebra.double_ring()
    n = algebra.dim
    x = [ring.variable(j) for j in range(n)]
    y = [ring.variable(n + j) for j in range(n)]
    letters = (x, y)
    total = [ring.zero() for _ in range(n)]
    for coeff, word in _dynkin_words(algebra.step):
        value = list(letters[word[-1]])
        for a in reversed(word[:-1]):
            value = algebra.bracket(letters[a], value)
            if all(p.is_zero() for p in value):
                break
        else:
            total = [t + v * coeff for t, v in zip(total, value)]
    return tuple(total)


def group_product(algebra: StratifiedAlgebra, a: Sequence, b: Sequence) -> list:
    """Evaluate the group law at two coefficient vectors (Rational or Poly)."""
    law = bch_product(algebra)
    ring = None
    for entry in list(a) + list(b):
        if isinstance(entry, Poly):
            ring = entry.ring
            break
    if ring is None:
        point = [rat(v) for v in a] + [rat(v) for v in b]
        return [p.evaluate(point) for p in law]
    images = [entry if isinstance(entry, Poly) else ring.constant(entry) for entry in a]
    images += [entry if isinstance(entry, Poly) else ring.constant(entry) for entry in b]
    return [p.substitute(images) for p in law]


@lru_cache(maxsize=None)
def left_invariant_frame(algebra: StratifiedAlgebra) -> tuple[tuple[Poly, ...], ...]:
    """Frame X_j = d/dy_j (x*y) at y=0; entry [j][k] is the d_k coefficient.

    Coefficients are weight-homogeneous polynomials of degree w_k - w_j.
    """
    law = bch_product(algebra)
    ring = algebra.ring()
    n = algebra.dim
    frame = []
    for j in range(n):
        row = []
        for k in range(n):
            coeff = ring.zero()
            for exps, c in law[k].terms.items():
                xpart, ypart = exps[:n], exps[n:]
                if ypart == tuple(1 if t == j else 0 for t in range(n)):
                    coeff = coeff + ring.monomial(xpart, c)
            row.append(coeff)
        frame.append(tuple(row))
    return tuple(frame)


def frame_apply(algebra: StratifiedAlgebra, j: int, f: Poly) -> Poly:
    """Left-invariant X_j (1-based) acting as a derivation on a coordinate polynomial."""
    row = left_invariant_frame(algebra)[j - 1]
    out = f.ring.zero()
    for k, coeff in enumerate(row):
        if coeff.is_zero():
            continue
        df = f.partial(k)
        if not df.is_zero():
            out = out + coeff * df
    return out


# -- graded homomorphisms -----------------------------------------------------


@dataclass
class HomReport:
    ok: bool
    block_failures: list[tuple[int, int]] = field(default_factory=list)
    bracket_failure: tuple[int, int] | None = None


class GradedHom:
    """A linear map between graded algebras, stored as a target x source matrix.

    Entry matrix[i][j] is the X_i^target coefficient of the image of
    X_j^source; entries may be rationals or coordinate polynomials on the
    source.
    """

    def __init__(self, source: StratifiedAlgebra, target: StratifiedAlgebra, matrix):
        self.source = source
        self.target = target
        self.matrix = [list(row) for row in matrix]
        if len(self.matrix) != target.dim or any(
            len(row) != source.dim for row in self.matrix
        ):
            raise ValueError("matrix shape must be target dim x source dim")

    def column(self, j: int) -> list:
        """Image of X_j^source (1-based) as a target coefficient vector."""
        return [self.matrix[i][j - 1] for i in range(self.target.dim)]

    def apply(self, v: Sequence) -> list:
        out = []
        for i in range(self.target.dim):
            total = None
            for j in range(self.source.dim):
                entry = self.matrix[i][j]
                piece = _scale(v[j], entry) if isinstance(entry, Poly) else _scale(entry, v[j])
                total = piece if total is None else total + piece
            out.append(total)
        return out


def _entry_is_zero(entry) -> bool:
    return entry.is_zero() if isinstance(entry, Poly) else entry == 0


def hom_check(hom: GradedHom, require_graded: bool = True) -> HomReport:
    """Layer-block structure plus bracket preservation on all basis pairs.

    With require_graded=False only bracket preservation is checked (needed for
    equivalences like Id + mu between central extensions, which mix layers).
    """
    block_failures = []
    if require_graded:
        for i in range(1, hom.target.dim + 1):
            for j in range(1, hom.source.dim + 1):
                if hom.target.weight_of(i) != hom.source.weight_of(j):
                    if not _entry_is_zero(hom.matrix[i - 1][j - 1]):
                        block_failures.append((i, j))
    if block_failures:
        return HomReport(ok=False, block_failures=block_failures)

    for a in range(1, hom.source.dim + 1):
        for b in range(a + 1, hom.source.dim + 1):
            lhs = hom.apply(
                hom.source.bracket(hom.source.basis_vector(a), hom.source.basis_vector(b))
            )
            rhs = hom.target.bracket(hom.column(a), hom.column(b))
            for l, r in zip(lhs, rhs):
                if not _entry_is_zero(l - r):
                    return HomReport(ok=False, bracket_failure=(a, b))
    return HomReport(ok=True)
