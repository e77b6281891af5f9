"""Multivariate polynomials over the rationals, graded by a weighted degree.

Each variable x_j carries a positive integer weight w_j (the layer weight of
the corresponding direction of the group), and the weighted degree of a
monomial is sum(e_j * w_j).  Terms are stored sparsely with no zero
coefficients, so equality of polynomials is equality of representations.
The canonical term order is graded lexicographic on exponent vectors.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalars import ONE, ZERO, Rational, rat


class PolyRing:
    """An ordered set of variables together with their weights."""

    __slots__ = ("variables", "weights", "_var_index")

    def __init__(self, variables: Sequence[str], weights: Sequence[int]):
        if len(variables) != len(weights):
            raise ValueError("one weight per variable required")
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        if any(w <= 0 or int(w) != w for w in weights):
            raise ValueError("weights must be positive integers")
        self.variables = tuple(variables)
        self.weights = tuple(int(w) for w in weights)
        self._var_index = {name: j for j, name in enumerate(self.variables)}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.weights == other.weights
        )

    def __hash__(self) -> int:
        return hash((self.variables, self.weights))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{v}:{w}" for v, w in zip(self.variables, self.weights))
        return f"PolyRing({pairs})"

    def index_of(self, name: str) -> int:
        try:
            return self._var_index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.constant(ONE)

    def constant(self, value) -> "Poly":
        q = rat(value)
        if q == 0:
            return self.zero()
        return Poly(self, {(0,) * self.nvars: q})

    def variable(self, j: int) -> "Poly":
        """The monomial x_j (0-based index)."""
        exps = [0] * self.nvars
        exps[j] = 1
        return Poly(self, {tuple(exps): ONE})

    def gens(self) -> list["Poly"]:
        return [self.variable(j) for j in range(self.nvars)]

    def monomial(self, exps: Sequence[int], coeff=ONE) -> "Poly":
        q = rat(coeff)
        if q == 0:
            return self.zero()
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise ValueError("bad exponent vector")
        return Poly(self, {exps: q})

    def monomial_wdeg(self, exps: Sequence[int]) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def monomials_up_to(self, bound: int) -> list[tuple[int, ...]]:
        """All exponent vectors of weighted degree <= bound, graded-lex order."""
        out: list[tuple[int, ...]] = []

        def rec(j: int, left: int, prefix: tuple[int, ...]):
            if j == self.nvars:
                out.append(prefix)
                return
            w = self.weights[j]
            for e in range(left // w + 1):
                rec(j + 1, left - e * w, prefix + (e,))

        rec(0, bound, ())
        out.sort(key=lambda e: (self.monomial_wdeg(e), e))
        return out

    def monomials_of_wdeg(self, degree: int) -> list[tuple[int, ...]]:
        return [e for e in self.monomials_up_to(degree) if self.monomial_wdeg(e) == degree]

    def from_string(self, text: str) -> "Poly":
        return parse_poly(self, text)


class Poly:
    """Immutable sparse polynomial; build via PolyRing factory methods."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict[tuple[int, ...], Rational]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- ring operations -------------------------------------------------

    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        self._check(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            s = terms.get(exps, ZERO) + c
            if s == 0:
                terms.pop(exps, None)
            else:
                terms[exps] = s
        return Poly(self.ring, terms)

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Rational)) or not isinstance(other, Poly):
            q = rat(other)
            if q == 0:
                return self.ring.zero()
            return Poly(self.ring, {e: c * q for e, c in self.terms.items()})
        self._check(other)
        terms: dict[tuple[int, ...], Rational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, ZERO) + c1 * c2
                if s == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return Poly(self.ring, terms)

    __rmul__ = __mul__

    def __radd__(self, other) -> "Poly":
        return self + other

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return self.ring.constant(other)

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Rational:
        return self.terms.get((0,) * self.ring.nvars, ZERO)

    def weighted_degree(self) -> int | None:
        """Max weighted degree of any monomial; None marks the zero polynomial."""
        if not self.terms:
            return None
        return max(self.ring.monomial_wdeg(e) for e in self.terms)

    def weight_components(self) -> dict[int, "Poly"]:
        """Split into weighted-degree homogeneous parts."""
        parts: dict[int, dict] = {}
        for exps, c in self.terms.items():
            parts.setdefault(self.ring.monomial_wdeg(exps), {})[exps] = c
        return {d: Poly(self.ring, t) for d, t in sorted(parts.items())}

    # -- calculus ---------------------------------------------------------

    def partial(self, j: int) -> "Poly":
        """Formal partial derivative with respect to x_j (0-based)."""
        if not 0 <= j < self.ring.nvars:
            raise ValueError("variable index out of range")
        terms: dict[tuple[int, ...], Rational] = {}
        for exps, c in self.terms.items():
            e = exps[j]
            if e == 0:
                continue
            new = list(exps)
            new[j] = e - 1
            key = tuple(new)
            s = terms.get(key, ZERO) + c * e
            if s == 0:
                terms.pop(key, None)
            else:
                terms[key] = s
        return Poly(self.ring, terms)

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace each variable by the corresponding image polynomial.

        All images must share one target ring; the result lives there.
        """
        if len(images) != self.ring.nvars:
            raise ValueError("one image per variable required")
        if not images:
            raise ValueError("empty ring substitution unsupported")
        target = images[0].ring
        for img in images:
            if img.ring != target:
                raise ValueError("images live in different rings")
        powers: dict[tuple[int, int], Poly] = {}

        def power(j: int, e: int) -> Poly:
            key = (j, e)
            if key not in powers:
                powers[key] = images[j] ** e
            return powers[key]

        result = target.zero()
        for exps, c in self.terms.items():
            term = target.constant(c)
            for j, e in enumerate(exps):
                if e:
                    term = term * power(j, e)
            result = result + term
        return result

    def evaluate(self, point: Sequence) -> Rational:
        if len(point) != self.ring.nvars:
            raise ValueError("one value per variable required")
        vals = [rat(v) for v in point]
        total = ZERO
        for exps, c in self.terms.items():
            acc = c
            for v, e in zip(vals, exps):
                if e:
                    acc = acc * v**e
            total += acc
        return total

    # -- identity ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Rational)):
            other = self.ring.constant(other)
        return (
            isinstance(other, Poly)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Rational]]:
        """Graded-lex descending, the canonical output order."""
        return sorted(
            self.terms.items(),
            key=lambda kv: (self.ring.monomial_wdeg(kv[0]), kv[0]),
            reverse=True,
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for exps, c in self.sorted_terms():
            factors = [
                f"{name}^{e}" if e > 1 else name
                for name, e in zip(self.ring.variables, exps)
                if e
            ]
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            sign = "-" if c < 0 else "+"
            chunks.append((sign, body))
        first_sign, first_body = chunks[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"


# -- parsing ---------------------------------------------------------------


class _Tokens:
    def __init__(self, text: str):
        self.items: list[tuple[str, str]] = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.items.append(("int", text[i:j]))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.items.append(("name", text[i:j]))
                i = j
            elif ch in "+-*^()/":
                self.items.append((ch, ch))
                i += 1
            else:
                raise ValueError(f"unexpected character {ch!r} in polynomial")
        self.pos = 0

    def peek(self) -> str | None:
        return self.items[self.pos][0] if self.pos < len(self.items) else None

    def next(self) -> tuple[str, str]:
        if self.pos >= len(self.items):
            raise ValueError("unexpected end of polynomial")
        tok = self.items[self.pos]
        self.pos += 1
        return tok


def parse_poly(ring: PolyRing, text: str) -> Poly:
    """Parse the canonical text form, e.g. "1/2*x1^2*x2 - x3 + 2"."""
    toks = _Tokens(text)

    def parse_expr() -> Poly:
        node = parse_term()
        while toks.peek() in ("+", "-"):
            op, _ = toks.next()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term() -> Poly:
        node = parse_factor()
        while toks.peek() == "*":
            toks.next()
            node = node * parse_factor()
        return node

    def parse_factor() -> Poly:
        kind = toks.peek()
        if kind == "-":
            toks.next()
            return -parse_factor()
        if kind == "+":
            toks.next()
            return parse_factor()
        if kind == "int":
            _, digits = toks.next()
            num = int(digits)
            if toks.peek() == "/":
                toks.next()
                k, d = toks.next()
                if k != "int":
                    raise ValueError("denominator must be an integer")
                base = ring.constant(rat(num, int(d)))
            else:
                base = ring.constant(num)
            return maybe_power(base)
        if kind == "name":
            _, name = toks.next()
            base = ring.variable(ring.index_of(name))
            return maybe_power(base)
        if kind == "(":
            toks.next()
            node = parse_expr()
            k, _ = toks.next()
            if k != ")":
                raise ValueError("unbalanced parentheses")
            return maybe_power(node)
        raise ValueError(f"unexpected token in polynomial: {kind}")

    def maybe_power(base: Poly) -> Poly:
        if toks.peek() == "^":
            toks.next()
            k, digits = toks.next()
            if k != "int":
                raise ValueError("exponent must be an integer")
            return base ** int(digits)
        return base

    result = parse_expr()
    if toks.peek() is not None:
        raise ValueError("trailing input after polynomial")
    return result
