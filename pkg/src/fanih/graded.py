"""Graded polynomial algebras on cones, free graded modules, and the
degreewise linear algebra used everywhere above: kernels, minimal generators,
reductions modulo the irrelevant ideal.

Polynomial functions on a cone live in that cone's span-basis coordinates, so
the algebra of a d-dimensional cone has d variables.  Degrees follow the even
grading of :mod:`fanih.polynomial` (linear forms in degree 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import linalg
from .errors import NotAFace, NotFree, TruncationTooLow
from .fan import Cone, Fan
from .linalg import Vec
from .polynomial import Poly, monomial_count, monomials

ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# coordinate transport between cones


def span_substitution(fan: Fan, sup: int, sub: int) -> list[Vec]:
    """Substitution matrix restricting sup-coordinate polynomials to a subcone.

    Row ``i`` expresses the i-th coordinate of the bigger cone in the
    coordinates of the smaller one; valid whenever the smaller cone's span is
    contained in the bigger one's.
    """
    cache = _fan_cache(fan).setdefault("span_subst", {})
    key = (sup, sub)
    if key not in cache:
        sup_c, sub_c = fan.cone(sup), fan.cone(sub)
        cols = []
        for b in sub_c.span_basis:
            t = sup_c.span_coords(b)
            if t is None:
                raise NotAFace(f"cone {sub} does not lie in the span of cone {sup}")
            cols.append(t)
        cache[key] = [tuple(col[i] for col in cols) for i in range(sup_c.dim)]
    return cache[key]


def restrict_poly(fan: Fan, p: Poly, sigma: int, tau: int) -> Poly:
    """Restriction of a polynomial function from a cone to a face."""
    if not fan.is_face(tau, sigma):
        raise NotAFace(f"cone {tau} is not a face of cone {sigma}")
    return transport_poly(fan, p, sigma, tau)


def transport_poly(fan: Fan, p: Poly, sup: int, sub: int) -> Poly:
    """Restriction along a span inclusion, cached monomial by monomial."""
    sub_dim = fan.cone(sub).dim
    if p.is_zero():
        return Poly.zero(sub_dim)
    cache = _fan_cache(fan).setdefault("mono_restrict", {})
    rows = span_substitution(fan, sup, sub)
    out = Poly.zero(sub_dim)
    for m, c in p.terms.items():
        key = (sup, sub, m)
        img = cache.get(key)
        if img is None:
            img = Poly.monomial(fan.cone(sup).dim, m).substitute_linear(rows, sub_dim)
            cache[key] = img
        out = out + img.scale(c)
    return out


def ambient_to_cone(fan: Fan, p: Poly, sigma: int) -> Poly:
    """Restrict a polynomial on the ambient space to a cone."""
    c = fan.cone(sigma)
    rows = [tuple(b[k] for b in c.span_basis) for k in range(fan.ambient_dim)]
    return p.substitute_linear(rows, c.dim)


def cone_to_ambient(fan: Fan, p: Poly, sigma: int) -> Poly:
    """Express a polynomial on a full-dimensional cone in ambient coordinates."""
    c = fan.cone(sigma)
    if c.dim != fan.ambient_dim:
        raise NotAFace("ambient expression requires a full-dimensional cone")
    return p.substitute_linear([tuple(r) for r in c.basis_inverse], fan.ambient_dim)


def _fan_cache(fan: Fan) -> dict:
    cache = getattr(fan, "_graded_cache", None)
    if cache is None:
        cache = {}
        fan._graded_cache = cache
    return cache


# ---------------------------------------------------------------------------
# free graded modules


@dataclass(frozen=True)
class FreeGradedModule:
    """Finitely generated free graded module over a cone's algebra."""

    fan: Fan
    cone_id: int
    gens: tuple[int, ...]  # even generator degrees

    def __post_init__(self):
        if any(d % 2 or d < 0 for d in self.gens):
            raise ValueError("generator degrees must be even and nonnegative")

    @property
    def rank(self) -> int:
        return len(self.gens)

    @property
    def nvars(self) -> int:
        return self.fan.cone(self.cone_id).dim

    def layout(self, q: int) -> list[tuple[int, tuple[int, ...]]]:
        """(generator, monomial) pairs spanning the degree-q piece."""
        if q % 2:
            return []
        out = []
        for i, d in enumerate(self.gens):
            if q >= d:
                out.extend((i, m) for m in monomials(self.nvars, (q - d) // 2))
        return out

    def dim_degree(self, q: int) -> int:
        if q % 2:
            return 0
        return sum(monomial_count(self.nvars, (q - d) // 2) for d in self.gens if q >= d)

    def zero_element(self) -> tuple[Poly, ...]:
        return tuple(Poly.zero(self.nvars) for _ in self.gens)

    def generator(self, i: int) -> tuple[Poly, ...]:
        return tuple(Poly.constant(self.nvars, 1) if j == i else Poly.zero(self.nvars)
                     for j in range(self.rank))

    def element_to_vector(self, elem: Sequence[Poly], q: int) -> Vec:
        out = []
        for i, d in enumerate(self.gens):
            if q >= d:
                for m in monomials(self.nvars, (q - d) // 2):
                    out.append(elem[i].coefficient(m))
        return tuple(out)

    def vector_to_element(self, v: Sequence[Fraction], q: int) -> tuple[Poly, ...]:
        elem = list(self.zero_element())
        pos = 0
        for i, d in enumerate(self.gens):
            if q >= d:
                terms = {}
                for m in monomials(self.nvars, (q - d) // 2):
                    if v[pos] != 0:
                        terms[m] = v[pos]
                    pos += 1
                elem[i] = Poly(self.nvars, terms)
        return tuple(elem)

    def scale_element(self, p: Poly, elem: Sequence[Poly]) -> tuple[Poly, ...]:
        return tuple(p * e for e in elem)

    def add_elements(self, a: Sequence[Poly], b: Sequence[Poly]) -> tuple[Poly, ...]:
        return tuple(x + y for x, y in zip(a, b))


def module_degree_basis(module: FreeGradedModule, q: int) -> list[tuple[Poly, ...]]:
    """Monomial-times-generator basis of the degree-q piece."""
    out = []
    for i, m in module.layout(q):
        elem = list(module.zero_element())
        elem[i] = Poly.monomial(module.nvars, m)
        out.append(tuple(elem))
    return out


@dataclass(frozen=True)
class PolyMatrix:
    """Graded module map into a module over a subcone's algebra.

    ``entries[k][i]`` is the coefficient of the k-th target generator in the
    image of the i-th source generator; it is homogeneous of degree
    ``source.gens[i] - target.gens[k]`` in the target algebra.
    """

    source: FreeGradedModule
    target: FreeGradedModule
    entries: tuple[tuple[Poly, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.target.rank:
            raise ValueError("entry rows must match target rank")
        for k, row in enumerate(self.entries):
            if len(row) != self.source.rank:
                raise ValueError("entry columns must match source rank")
            for i, p in enumerate(row):
                if p.nvars != self.target.nvars:
                    raise ValueError("entries must live in the target algebra")
                if not p.is_zero() and not p.is_homogeneous(self.source.gens[i] - self.target.gens[k]):
                    raise ValueError("entry degree violates the grading")

    @staticmethod
    def identity(module: FreeGradedModule) -> "PolyMatrix":
        nv = module.nvars
        rows = tuple(
            tuple(Poly.constant(nv, 1) if i == k else Poly.zero(nv) for i in range(module.rank))
            for k in range(module.rank))
        return PolyMatrix(module, module, rows)

    def apply(self, elem: Sequence[Poly]) -> tuple[Poly, ...]:
        """Image of a source element; coefficients are restricted on the way."""
        fan = self.source.fan
        restricted = [transport_poly(fan, p, self.source.cone_id, self.target.cone_id)
                      for p in elem]
        out = []
        for k in range(self.target.rank):
            acc = Poly.zero(self.target.nvars)
            for i in range(self.source.rank):
                if restricted[i] and self.entries[k][i]:
                    acc = acc + self.entries[k][i] * restricted[i]
            out.append(acc)
        return tuple(out)

    def compose(self, inner: "PolyMatrix") -> "PolyMatrix":
        """This map after ``inner`` (inner's target must be this source's cone)."""
        if inner.target is not self.source and inner.target.cone_id != self.source.cone_id:
            raise ValueError("composition cone mismatch")
        cols = []
        for i in range(inner.source.rank):
            col = self.apply([inner.entries[k][i] for k in range(inner.target.rank)])
            cols.append(col)
        rows = tuple(tuple(cols[i][k] for i in range(inner.source.rank))
                     for k in range(self.target.rank))
        return PolyMatrix(inner.source, self.target, rows)

    def degree_matrix(self, q: int) -> list[Vec]:
        """The induced rational matrix on degree-q pieces (rows over target layout)."""
        cache = self.__dict__.setdefault("_deg_cache", {})
        if q not in cache:
            cols = []
            for i, m in self.source.layout(q):
                elem = list(self.source.zero_element())
                elem[i] = Poly.monomial(self.source.nvars, m)
                cols.append(self.target.element_to_vector(self.apply(elem), q))
            nrows = self.target.dim_degree(q)
            cache[q] = [tuple(col[r] for col in cols) for r in range(nrows)]
        return cache[q]

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix)
                and self.source.gens == other.source.gens
                and self.target.gens == other.target.gens
                and self.source.cone_id == other.source.cone_id
                and self.target.cone_id == other.target.cone_id
                and self.entries == other.entries)


# ---------------------------------------------------------------------------
# degreewise spaces and minimal generators


class DegreewiseSpace:
    """Explicit bases of a graded subspace, one list of vectors per even degree."""

    def __init__(self, bases: Mapping[int, Sequence[Vec]], truncation: int):
        self.bases = {q: [tuple(v) for v in vs] for q, vs in bases.items()}
        self.truncation = truncation

    def basis(self, q: int) -> list[Vec]:
        return self.bases.get(q, [])

    def dim(self, q: int) -> int:
        return len(self.bases.get(q, []))

    def dims(self) -> dict[int, int]:
        return {q: len(v) for q, v in sorted(self.bases.items()) if v}


def kernel_degreewise(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vec]:
    """Exact kernel basis of one degree component of a homogeneous map."""
    return linalg.kernel_basis(rows, ncols)


def minimal_generators(space: DegreewiseSpace,
                       multiply: Callable[[int, Vec, int], Vec],
                       nvars: int,
                       limit: int) -> list[tuple[int, Vec]]:
    """Degrees and lifts of a minimal generating set of a graded submodule.

    ``space`` holds degreewise bases of a submodule closed under the algebra
    action; ``multiply(i, v, q)`` multiplies a degree-q vector by the i-th
    algebra variable.  Generators are the canonical echelon complement of the
    span of ``variable * lower-degree`` products, scanned over even degrees up
    to ``limit``.  A generator appearing at ``limit`` itself raises
    ``TruncationTooLow`` since generators beyond the scan cannot be ruled out.
    """
    gens: list[tuple[int, Vec]] = []
    degrees = [q for q in sorted(space.bases) if space.bases[q] and q <= limit]
    for q in degrees:
        basis_q = space.basis(q)
        ncols = len(basis_q[0])
        tracker = linalg.SpanTracker(ncols)
        for v in space.basis(q - 2):
            for i in range(nvars):
                tracker.add(multiply(i, v, q - 2))
        fresh = []
        for v in basis_q:
            if tracker.add(v):
                fresh.append((q, v))
        if tracker.dim != len(basis_q):
            raise NotFree("products left the submodule: input is not a graded submodule")
        if fresh and q >= limit:
            raise TruncationTooLow(
                f"generator candidate at degree {q} reaches the scan bound {limit}")
        gens.extend(fresh)
    return gens


def check_free(dims: Mapping[int, int], gens: Sequence[int], nvars: int, up_to: int) -> None:
    """Verify dimension bookkeeping of a free presentation; raise ``NotFree``."""
    for q in range(0, up_to + 1, 2):
        expect = sum(monomial_count(nvars, (q - d) // 2) for d in gens if q >= d)
        got = dims.get(q, 0)
        if got != expect:
            raise NotFree(f"degree {q}: dimension {got}, free module would give {expect}")


# ---------------------------------------------------------------------------
# conewise linear functions


class ConewiseLinear:
    """A function linear on each maximal cone, with matching values on shared faces."""

    def __init__(self, fan: Fan, forms: Mapping[int, Sequence[Fraction]]):
        self.fan = fan
        self.forms = {m: tuple(Fraction(x) for x in v) for m, v in forms.items()}
        if set(self.forms) != set(fan.maximal_cones):
            raise ValueError("need exactly one linear form per maximal cone")
        for a in fan.maximal_cones:
            for b in fan.maximal_cones:
                if b <= a:
                    continue
                shared = fan.cone(a).rayset & fan.cone(b).rayset
                if shared in {c.rayset for c in fan.cones}:
                    gamma = fan.cone_by_rayset(shared)
                    diff = linalg.sub_vec(self.forms[a], self.forms[b])
                    for v in fan.cone(gamma).span_basis:
                        if linalg.dot(diff, v) != 0:
                            raise ValueError("pieces disagree on a shared face")

    def on_cone(self, sigma: int) -> Poly:
        """The restriction to a cone, in that cone's coordinates."""
        for m in self.fan.maximal_cones:
            if self.fan.is_face(sigma, m):
                return ambient_to_cone(self.fan, Poly.linear(self.forms[m]), sigma)
        raise NotAFace(f"cone {sigma} is not a face of any maximal cone")

    def ambient_form(self, m: int) -> Poly:
        return Poly.linear(self.forms[m])
