"""Sparse multivariate polynomials over the rationals.

Grading convention used throughout the package: a linear form sits in degree
2, so the bookkeeping degree of a monomial is twice its exponent sum.  All
public "degree q" arguments in higher modules refer to these even degrees.

Monomials are exponent tuples ordered degree-lexicographically: higher total
exponent first, ties broken by reverse-lexicographic comparison of the
exponent tuples (so within one degree, ``x1^2 > x1*x2 > x2^2``).  Every basis
the package materializes lists monomials in this fixed order.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Monomial = tuple[int, ...]

_ZERO = Fraction(0)


def monomial_key(m: Monomial):
    """Sort key realizing the fixed monomial order (descending)."""
    return (-sum(m), tuple(-e for e in m))


@lru_cache(maxsize=None)
def monomials(nvars: int, total: int) -> tuple[Monomial, ...]:
    """All exponent tuples of the given exponent sum, in canonical order."""
    if total < 0:
        return ()
    if nvars == 0:
        return ((),) if total == 0 else ()

    def gen(nv, t):
        if nv == 1:
            yield (t,)
            return
        for e in range(t, -1, -1):
            for rest in gen(nv - 1, t - e):
                yield (e,) + rest

    return tuple(gen(nvars, total))


def monomial_count(nvars: int, total: int) -> int:
    if total < 0:
        return 0
    if nvars == 0:
        return 1 if total == 0 else 0
    n = 1
    for i in range(1, nvars):
        n = n * (total + i) // i
    return n


class Poly:
    """Immutable sparse polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[Monomial, Fraction] | None = None):
        self.nvars = nvars
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c != 0:
                    self.terms[m] = Fraction(c)

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars)

    @staticmethod
    def constant(nvars: int, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly(nvars)
        return Poly(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return Poly(nvars, {tuple(e): Fraction(1)})

    @staticmethod
    def linear(coeffs: Sequence) -> "Poly":
        """Linear form with the given coefficient vector."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = Fraction(c)
            if c != 0:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return Poly(n, terms)

    @staticmethod
    def monomial(nvars: int, m: Monomial, c=1) -> "Poly":
        return Poly(nvars, {tuple(m): Fraction(c)})

    # -- predicates and accessors -----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def degree(self) -> int:
        """Even bookkeeping degree; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return 2 * max(sum(m) for m in self.terms)

    def is_homogeneous(self, q: int | None = None) -> bool:
        degs = {sum(m) for m in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return q is None or 2 * degs.pop() == q

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), _ZERO)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, _ZERO)

    def linear_coeffs(self) -> tuple[Fraction, ...]:
        """Coefficient vector of a linear form (constant part ignored)."""
        out = [_ZERO] * self.nvars
        for m, c in self.terms.items():
            if sum(m) == 1:
                out[m.index(1)] = c
        return tuple(out)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, _ZERO) + c
            if s == 0:
                terms.pop(m, None)
            else:
                terms[m] = s
        return Poly(self.nvars, terms)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly(self.nvars)
        return Poly(self.nvars, {m: c * x for m, x in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = terms.get(m, _ZERO) + c1 * c2
                if s == 0:
                    terms.pop(m, None)
                else:
                    terms[m] = s
        return Poly(self.nvars, terms)

    def mul_monomial(self, m: Monomial, c=1) -> "Poly":
        c = Fraction(c)
        return Poly(self.nvars, {tuple(a + b for a, b in zip(mm, m)): cc * c
                                 for mm, cc in self.terms.items()})

    # -- substitution ------------------------------------------------------

    def substitute_linear(self, matrix: Sequence[Sequence[Fraction]], out_nvars: int) -> "Poly":
        """Substitute ``x_i -> sum_j matrix[i][j] * y_j``.

        ``matrix`` has one row per variable of ``self``; the result lives in
        ``out_nvars`` variables.
        """
        images = [Poly.linear(row) if any(x != 0 for x in row) else Poly.zero(out_nvars)
                  for row in matrix]
        for im in images:
            if im.nvars != out_nvars:
                raise ValueError("substitution row length mismatch")
        powers: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            got = powers.get(key)
            if got is None:
                got = Poly.constant(out_nvars, 1)
                for _ in range(e):
                    got = got * images[i]
                powers[key] = got
            return got

        result = Poly.zero(out_nvars)
        for m, c in self.terms.items():
            term = Poly.constant(out_nvars, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        total = _ZERO
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                for _ in range(e):
                    v *= x
            total += v
        return total

    # -- division by a linear form -----------------------------------------

    def divide_linear(self, form: "Poly") -> "Poly | None":
        """Exact quotient by a nonzero linear form, or ``None``."""
        coeffs = form.linear_coeffs()
        k = next((i for i, c in enumerate(coeffs) if c != 0), None)
        if k is None:
            raise ValueError("division by a form with no linear part")
        lead = coeffs[k]
        rem = self
        quot = Poly.zero(self.nvars)
        while rem.terms:
            # peel the term with the highest power of x_k, largest monomial first
            cand = max((m for m in rem.terms if m[k] > 0),
                       key=lambda m: (m[k], sum(m), m), default=None)
            if cand is None:
                return None
            e = list(cand)
            e[k] -= 1
            piece = Poly.monomial(self.nvars, tuple(e), rem.terms[cand] / lead)
            quot = quot + piece
            rem = rem - piece * form
        return quot

    # -- rendering -----------------------------------------------------------

    def __repr__(self):
        return f"Poly({self.to_string()})"

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for m in sorted(self.terms, key=monomial_key):
            c = self.terms[m]
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out
