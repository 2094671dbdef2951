"""Exact polyhedral fans as finite topological spaces.

A fan is stored with its full face lattice.  Every cone knows its extreme-ray
index set, a span basis (the pivot columns of its ray matrix), the facet
inequalities cutting it out inside its span, and an orientation sign.  Faces
are identified with their ray index sets, which is sound because listed
generators are required to be extreme rays.

No floating point is used anywhere; all coordinates are ``Fraction``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import (
    ConeNotInFan,
    FanError,
    NotCommonFace,
    NotFullDim,
    NotPurelyDimensional,
    NotStrictlyConvex,
    OverlappingCones,
    RayNotInterior,
    RedundantRay,
    StrictConvexityFailed,
)
from . import linalg
from .linalg import Vec, vec

ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# canonical scalings


def canonical_ray(coords: Iterable) -> Vec:
    """Primitive integer representative of a ray direction.

    Scaling is by a positive rational only, so opposite rays stay distinct.
    """
    v = vec(coords)
    if all(x == 0 for x in v):
        raise FanError("zero vector cannot generate a ray")
    mult = 1
    for x in v:
        mult = mult * x.denominator // gcd(mult, x.denominator)
    ints = [int(x * mult) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(Fraction(x, g) for x in ints)


def canonical_form(coeffs: Iterable) -> Vec:
    """Primitive representative of a hyperplane normal, sign-normalized."""
    v = canonical_ray(coeffs)
    lead = next(x for x in v if x != 0)
    if lead < 0:
        v = tuple(-x for x in v)
    return v


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class Cone:
    """One cone of a fan, with exact geometric data.

    ``span_basis`` lists the pivot rays (by index order) whose columns give a
    basis of the cone's linear span; ``basis_inverse`` is a left inverse
    mapping ambient points of the span to basis coordinates; ``span_equations``
    cut out the span; ``facet_normals`` are inequalities in basis coordinates
    (one per facet, aligned with ``facet_raysets``).  ``orientation`` is the
    sign relating the chosen orientation of the span to the wedge of the dual
    span basis.
    """

    id: int
    ray_ids: tuple[int, ...]
    dim: int
    span_basis_ids: tuple[int, ...]
    span_basis: tuple[Vec, ...]
    basis_inverse: tuple[Vec, ...]
    span_equations: tuple[Vec, ...]
    facet_raysets: tuple[frozenset[int], ...]
    facet_normals: tuple[Vec, ...]
    orientation: int = 1

    @property
    def rayset(self) -> frozenset[int]:
        return frozenset(self.ray_ids)

    def span_coords(self, x: Sequence[Fraction]) -> Vec | None:
        """Basis coordinates of ``x`` if it lies in the span, else None."""
        if any(linalg.dot(eq, x) != 0 for eq in self.span_equations):
            return None
        return linalg.mat_vec(self.basis_inverse, x)

    def contains(self, x: Sequence[Fraction]) -> bool:
        t = self.span_coords(x)
        if t is None:
            return False
        return all(linalg.dot(h, t) >= 0 for h in self.facet_normals)

    def contains_relint(self, x: Sequence[Fraction]) -> bool:
        t = self.span_coords(x)
        if t is None:
            return False
        if self.dim == 0:
            return True
        return all(linalg.dot(h, t) > 0 for h in self.facet_normals)

    def ambient_facet_normal(self, k: int) -> Vec:
        """Extension of the k-th facet inequality to an ambient covector."""
        return linalg.mat_vec(linalg.transpose(self.basis_inverse), self.facet_normals[k])


def _cone_geometry(rays: Sequence[Vec], idxs: Sequence[int], ambient: int,
                   check_extreme: bool = True):
    """Face/facet analysis of the cone generated by the listed rays.

    Returns a dict with the span data, the facet ray sets with their
    inequalities, and the set of all face ray sets.  Raises
    ``NotStrictlyConvex`` for non-pointed input and ``RedundantRay`` when a
    listed generator is not extreme.
    """
    idxs = tuple(sorted(idxs))
    vectors = [rays[i] for i in idxs]
    tracker = linalg.SpanTracker(ambient)
    basis_ids = []
    for i, v in zip(idxs, vectors):
        if tracker.add(v):
            basis_ids.append(i)
    d = len(basis_ids)
    basis = tuple(rays[i] for i in basis_ids)
    # left inverse: row k solves <row, basis_j> = delta_kj
    bt = [list(b) for b in basis]
    binv = []
    for k in range(d):
        rhs = [Fraction(1) if j == k else ZERO for j in range(d)]
        sol = linalg.solve(bt, rhs)
        binv.append(sol)
    span_eq = linalg.kernel_basis([list(b) for b in basis], ambient)
    in_span = [linalg.mat_vec(binv, rays[i]) for i in idxs] if d else []

    facets: dict[frozenset[int], Vec] = {}
    if d >= 1:
        for sub in itertools.combinations(range(len(idxs)), d - 1):
            rows = [in_span[j] for j in sub]
            if linalg.rank(rows, d) != d - 1:
                continue
            ker = linalg.kernel_basis(rows, d)
            if len(ker) != 1:
                continue
            h = ker[0]
            vals = [linalg.dot(h, t) for t in in_span]
            if all(x >= 0 for x in vals):
                pass
            elif all(x <= 0 for x in vals):
                h = tuple(-x for x in h)
                vals = [-x for x in vals]
            else:
                continue
            fr = frozenset(idxs[j] for j, x in enumerate(vals) if x == 0)
            if fr not in facets:
                facets[fr] = canonical_ray(h)
        normals = list(facets.values())
        if linalg.rank([list(h) for h in normals], d) != d:
            raise NotStrictlyConvex(f"cone on rays {list(idxs)} contains a line")
    if check_extreme:
        for i in idxs:
            containing = [fr for fr in facets if i in fr]
            minimal = frozenset(idxs)
            for fr in containing:
                minimal &= fr
            if minimal != frozenset({i}):
                raise RedundantRay(f"ray {i} is not an extreme ray of cone on {list(idxs)}")

    # face lattice: all intersections of facets, plus the cone itself
    faces = {frozenset(idxs)}
    frontier = set(facets)
    while frontier:
        faces |= frontier
        nxt = set()
        for f in frontier:
            for g in facets:
                h = f & g
                if h not in faces:
                    nxt.add(h)
        frontier = nxt
    if d >= 1:
        faces.add(frozenset())

    sorted_facets = sorted(facets, key=lambda f: tuple(sorted(f)))
    return {
        "idxs": idxs,
        "dim": d,
        "basis_ids": tuple(basis_ids),
        "basis": basis,
        "binv": tuple(tuple(r) for r in binv),
        "span_eq": tuple(span_eq),
        "facet_raysets": tuple(sorted_facets),
        "facet_normals": tuple(facets[f] for f in sorted_facets),
        "faces": faces,
    }


# ---------------------------------------------------------------------------
# fans


class Fan:
    """A complete face lattice of cones, closed under faces and intersections."""

    def __init__(self, ambient_dim: int, rays: Sequence[Vec], cones: Sequence[Cone]):
        self.ambient_dim = ambient_dim
        self.rays = tuple(rays)
        self.cones = tuple(cones)
        self._by_rayset = {c.rayset: c.id for c in cones}
        self.facets_of = {
            c.id: tuple(sorted(self._by_rayset[f] for f in c.facet_raysets))
            for c in cones
        }
        maximal = []
        for c in cones:
            if not any(c.id != d.id and c.rayset < d.rayset for d in cones):
                maximal.append(c.id)
        self.maximal_cones = tuple(sorted(maximal))
        self.zero_cone = self._by_rayset[frozenset()]

    # -- basic queries ------------------------------------------------------

    def __len__(self):
        return len(self.cones)

    def cone(self, cid: int) -> Cone:
        try:
            return self.cones[cid]
        except IndexError:
            raise ConeNotInFan(f"no cone with id {cid}")

    def cone_by_rayset(self, rayset: Iterable[int]) -> int:
        key = frozenset(rayset)
        if key not in self._by_rayset:
            raise ConeNotInFan(f"no cone with rays {sorted(key)}")
        return self._by_rayset[key]

    def is_face(self, tau: int, sigma: int) -> bool:
        return self.cones[tau].rayset <= self.cones[sigma].rayset

    def faces_of(self, sigma: int) -> list[int]:
        """All faces of a cone, the cone included, sorted by id."""
        rs = self.cones[sigma].rayset
        return [c.id for c in self.cones if c.rayset <= rs]

    def proper_faces(self, sigma: int) -> list[int]:
        return [c for c in self.faces_of(sigma) if c != sigma]

    def star(self, sigma: int) -> list[int]:
        """All cones having ``sigma`` as a face, sorted by id."""
        rs = self.cones[sigma].rayset
        return [c.id for c in self.cones if rs <= c.rayset]

    def cones_of_dim(self, d: int) -> list[int]:
        return [c.id for c in self.cones if c.dim == d]

    def containing_cone(self, x: Sequence[Fraction]) -> int | None:
        """Id of the unique cone with ``x`` in its relative interior."""
        for c in self.cones:
            if c.contains_relint(x):
                return c.id
        return None

    def supports_point(self, x: Sequence[Fraction]) -> bool:
        return any(self.cones[m].contains(x) for m in self.maximal_cones)

    def dump_maximal(self) -> list[list[int]]:
        return [sorted(self.cones[m].ray_ids) for m in self.maximal_cones]

    def __repr__(self):
        dims = {}
        for c in self.cones:
            dims[c.dim] = dims.get(c.dim, 0) + 1
        prof = ", ".join(f"{dims[d]}x{d}d" for d in sorted(dims))
        return f"Fan(n={self.ambient_dim}, {len(self.cones)} cones: {prof})"


def _intersection_extreme_rays(fan_rays: Sequence[Vec], a: Cone, b: Cone, n: int) -> list[Vec]:
    """Extreme rays of the intersection of two cones, by brute force.

    Uses both H-representations: span equations plus ambient facet covectors.
    """
    equalities = list(a.span_equations) + list(b.span_equations)
    ineqs = [a.ambient_facet_normal(k) for k in range(len(a.facet_normals))]
    ineqs += [b.ambient_facet_normal(k) for k in range(len(b.facet_normals))]

    def satisfies(v):
        return (all(linalg.dot(e, v) == 0 for e in equalities)
                and all(linalg.dot(h, v) >= 0 for h in ineqs))

    found = set()
    base_rank = linalg.rank([list(e) for e in equalities], n)
    need = n - 1 - base_rank
    if need < 0:
        return []
    for sub in itertools.combinations(range(len(ineqs)), need):
        rows = [list(e) for e in equalities] + [list(ineqs[j]) for j in sub]
        if linalg.rank(rows, n) != n - 1:
            continue
        ker = linalg.kernel_basis(rows, n)
        if len(ker) != 1:
            continue
        v = ker[0]
        if satisfies(v):
            found.add(canonical_ray(v))
        elif satisfies(tuple(-x for x in v)):
            found.add(canonical_ray(tuple(-x for x in v)))
    return sorted(found)


def build_fan(ambient_dim: int, rays: Sequence[Sequence], maximal_cone_ray_sets: Sequence[Sequence[int]],
              orientations: Mapping[frozenset[int], int] | None = None) -> Fan:
    """Assemble the face-closed fan generated by the listed maximal cones.

    Rejects input whose cones are not strictly convex, whose listed
    generators are not extreme, or whose pairwise intersections are not
    common faces.
    """
    n = ambient_dim
    canon = []
    for r in rays:
        c = canonical_ray(r)
        if len(c) != n:
            raise FanError("ray length does not match ambient dimension")
        canon.append(c)
    if len(set(canon)) != len(canon):
        raise FanError("rays not distinct after canonical scaling")
    canon = tuple(canon)

    listed = []
    seen = set()
    for s in maximal_cone_ray_sets:
        key = frozenset(s)
        if any(i < 0 or i >= len(canon) for i in key):
            raise FanError("cone references an unknown ray index")
        if key in seen:
            continue
        seen.add(key)
        listed.append(key)

    geom: dict[frozenset[int], dict] = {}

    def analyze(rayset: frozenset[int]) -> dict:
        if rayset not in geom:
            geom[rayset] = _cone_geometry(canon, tuple(sorted(rayset)), n)
        return geom[rayset]

    all_faces: set[frozenset[int]] = {frozenset()}
    for key in listed:
        all_faces |= analyze(key)["faces"]

    # pairwise fan condition on the listed cones
    cone_stubs = {}
    for key in listed:
        g = analyze(key)
        cone_stubs[key] = Cone(
            id=-1, ray_ids=g["idxs"], dim=g["dim"], span_basis_ids=g["basis_ids"],
            span_basis=g["basis"], basis_inverse=g["binv"], span_equations=g["span_eq"],
            facet_raysets=g["facet_raysets"], facet_normals=g["facet_normals"],
        )
    for ka, kb in itertools.combinations(listed, 2):
        shared = ka & kb
        ga, gb = geom[ka], geom[kb]
        extreme = _intersection_extreme_rays(canon, cone_stubs[ka], cone_stubs[kb], n)
        expected = sorted(canon[i] for i in shared)
        ok = (extreme == expected and shared in ga["faces"] and shared in gb["faces"])
        if not ok:
            r = linalg.rank([list(v) for v in extreme], n) if extreme else 0
            if r == ga["dim"] and ga["dim"] == gb["dim"]:
                raise OverlappingCones(
                    f"cones on {sorted(ka)} and {sorted(kb)} have overlapping interiors")
            raise NotCommonFace(
                f"cones on {sorted(ka)} and {sorted(kb)} do not meet in a common face")

    for f in sorted(all_faces, key=lambda s: tuple(sorted(s))):
        analyze(f)

    ordered = sorted(all_faces, key=lambda s: (geom[s]["dim"], tuple(sorted(s))))
    cones = []
    for cid, rayset in enumerate(ordered):
        g = geom[rayset]
        if orientations is not None and rayset in orientations:
            sign = orientations[rayset]
        elif g["dim"] == n:
            sign = 1 if linalg.det([list(row) for row in zip(*g["basis"])]) > 0 else -1
        else:
            sign = 1
        cones.append(Cone(
            id=cid, ray_ids=g["idxs"], dim=g["dim"], span_basis_ids=g["basis_ids"],
            span_basis=g["basis"], basis_inverse=g["binv"], span_equations=g["span_eq"],
            facet_raysets=g["facet_raysets"], facet_normals=g["facet_normals"],
            orientation=sign,
        ))
    return Fan(n, canon, cones)


# ---------------------------------------------------------------------------
# subfans


class Subfan:
    """A face-closed selection of cones of a fan (an open set of the space)."""

    def __init__(self, fan: Fan, ids: Iterable[int]):
        self.fan = fan
        self.ids = frozenset(ids)
        for i in self.ids:
            c = fan.cone(i)
            for f in fan.faces_of(i):
                if f not in self.ids:
                    raise FanError(f"selection not face-closed: cone {i} needs face {f}")

    @staticmethod
    def affine(fan: Fan, sigma: int) -> "Subfan":
        return Subfan(fan, fan.faces_of(sigma))

    @staticmethod
    def whole(fan: Fan) -> "Subfan":
        return Subfan(fan, [c.id for c in fan.cones])

    @staticmethod
    def empty(fan: Fan) -> "Subfan":
        return Subfan(fan, [])

    def __contains__(self, cid: int) -> bool:
        return cid in self.ids

    def __len__(self):
        return len(self.ids)

    def __eq__(self, other):
        return isinstance(other, Subfan) and self.fan is other.fan and self.ids == other.ids

    def __hash__(self):
        return hash((id(self.fan), self.ids))

    def sorted_ids(self) -> list[int]:
        return sorted(self.ids)

    def maximal(self) -> list[int]:
        out = []
        for i in self.ids:
            ri = self.fan.cone(i).rayset
            if not any(j != i and ri < self.fan.cone(j).rayset for j in self.ids):
                out.append(i)
        return sorted(out)

    def __repr__(self):
        return f"Subfan({sorted(self.ids)})"


def boundary_fan(sub: Subfan) -> Subfan:
    """Face closure of the codim-1 cones lying in exactly one top cone.

    The selection must be purely dimensional (all maximal cones of one
    dimension ``d``); the boundary is taken relative to ``d``.
    """
    fan = sub.fan
    maximal = sub.maximal()
    if not maximal:
        return Subfan(fan, [])
    dims = {fan.cone(m).dim for m in maximal}
    if len(dims) != 1:
        raise NotPurelyDimensional(f"maximal cones have dimensions {sorted(dims)}")
    d = dims.pop()
    count: dict[int, int] = {}
    for m in maximal:
        for f in fan.facets_of[m]:
            count[f] = count.get(f, 0) + 1
    outer = [f for f, k in count.items() if k == 1]
    ids = set()
    for f in outer:
        ids.update(fan.faces_of(f))
    return Subfan(fan, ids)


def boundary_of_cone(fan: Fan, sigma: int) -> Subfan:
    """The subfan of proper faces of a cone."""
    return Subfan(fan, fan.proper_faces(sigma))


# ---------------------------------------------------------------------------
# star projections (transversal fans)


@dataclass
class StarProjection:
    """Projection of the star of a cone onto its transversal fan.

    ``matrix`` maps ambient coordinates onto coordinates of the quotient
    space; ``cone_image``/``cone_preimage`` give the induced bijection
    between the star and the quotient fan's cones.
    """

    source: Fan
    apex: int
    quotient: Fan
    matrix: tuple[Vec, ...]
    cone_image: dict[int, int]
    cone_preimage: dict[int, int]

    def project(self, x: Sequence[Fraction]) -> Vec:
        return linalg.mat_vec(self.matrix, x)


def transversal_fan(fan: Fan, sigma: int) -> StarProjection:
    """Image of the star of ``sigma`` under projection along its span."""
    sc = fan.cone(sigma)
    n = fan.ambient_dim
    d = sc.dim
    # complete the span basis with standard coordinate vectors
    tracker = linalg.SpanTracker(n)
    for b in sc.span_basis:
        tracker.add(b)
    complement = []
    for j in range(n):
        e = tuple(Fraction(1) if k == j else ZERO for k in range(n))
        if tracker.add(e):
            complement.append(e)
    full = [list(b) for b in sc.span_basis] + [list(e) for e in complement]
    # projection takes coordinates in the completed basis and keeps the tail
    cols = linalg.transpose(full)
    proj_rows = []
    for k in range(d, n):
        rhs = [Fraction(1) if j == k else ZERO for j in range(n)]
        proj_rows.append(linalg.solve([list(r) for r in linalg.transpose(cols)], rhs))
    # proj_rows solves B^T u = e_k, giving the dual basis of the tail
    matrix = tuple(tuple(r) for r in proj_rows)

    star = fan.star(sigma)
    edge_cones = [g for g in star if fan.cone(g).dim == d + 1]
    qrays = []
    ray_of_edge = {}
    for g in edge_cones:
        gc = fan.cone(g)
        extra = next(i for i in gc.ray_ids if i not in sc.rayset)
        qrays.append(canonical_ray(linalg.mat_vec(matrix, fan.rays[extra])))
        ray_of_edge[g] = len(qrays) - 1
    maximal_sets = []
    star_max = [g for g in star
                if not any(h != g and fan.cone(g).rayset < fan.cone(h).rayset for h in star)]
    for g in star_max:
        grs = fan.cone(g).rayset
        maximal_sets.append(sorted(ray_of_edge[e] for e in edge_cones
                                   if fan.cone(e).rayset <= grs))
    quotient = build_fan(n - d, qrays, maximal_sets)

    cone_image = {}
    for g in star:
        grs = fan.cone(g).rayset
        qset = frozenset(ray_of_edge[e] for e in edge_cones if fan.cone(e).rayset <= grs)
        cone_image[g] = quotient.cone_by_rayset(qset)
    if len(set(cone_image.values())) != len(cone_image) or len(cone_image) != len(quotient.cones):
        raise FanError("transversal projection is not a bijection on cones")
    cone_preimage = {v: k for k, v in cone_image.items()}
    return StarProjection(fan, sigma, quotient, matrix, cone_image, cone_preimage)


# ---------------------------------------------------------------------------
# refinements


@dataclass
class RefinementMap:
    """A refinement of fans over the identity of the ambient space.

    ``cone_map`` sends each cone of the refined fan to the smallest cone of
    the target containing it.
    """

    source: Fan
    target: Fan
    cone_map: dict[int, int]

    def __post_init__(self):
        for chat, c in self.cone_map.items():
            if not self.orientation_compatible(chat, c):
                raise FanError("refinement is not orientation compatible")

    @staticmethod
    def identity(fan: Fan) -> "RefinementMap":
        return RefinementMap(fan, fan, {c.id: c.id for c in fan.cones})

    def orientation_compatible(self, chat: int, c: int) -> bool:
        a, b = self.source.cone(chat), self.target.cone(c)
        if a.dim != b.dim:
            return True
        t = [b.span_coords(v) for v in a.span_basis]
        return linalg.det([list(r) for r in t]) * a.orientation * b.orientation > 0

    def preimage_subfan(self, sigma: int) -> Subfan:
        """Cones of the refinement lying inside the affine fan of ``sigma``."""
        trs = self.target.cone(sigma).rayset
        ids = [chat for chat, c in self.cone_map.items()
               if self.target.cone(c).rayset <= trs]
        return Subfan(self.source, ids)


def smallest_containing_cone(fan: Fan, points: Sequence[Vec]) -> int | None:
    for c in sorted(fan.cones, key=lambda c: (c.dim, c.id)):
        if all(c.contains(p) for p in points):
            return c.id
    return None


def stellar_subdivision(fan: Fan, sigma: int, ray: Sequence) -> tuple[Fan, RefinementMap]:
    """Subdivide the star of ``sigma`` along a ray through its interior."""
    sc = fan.cone(sigma)
    lam = canonical_ray(ray)
    if not sc.contains_relint(lam):
        raise RayNotInterior(f"ray {lam} is not interior to cone {sigma}")
    if lam in fan.rays and sc.dim == 1:
        return fan, RefinementMap.identity(fan)

    rays = list(fan.rays)
    lam_id = len(rays)
    rays.append(lam)

    new_max = []
    for m in fan.maximal_cones:
        mc = fan.cone(m)
        if not sc.rayset <= mc.rayset:
            new_max.append(sorted(mc.ray_ids))
            continue
        for fr in mc.facet_raysets:
            if not sc.rayset <= fr:
                new_max.append(sorted(fr | {lam_id}))
    refined = build_fan(fan.ambient_dim, rays, new_max)

    cone_map = {}
    for c in refined.cones:
        points = [refined.rays[i] for i in c.ray_ids] or [tuple(ZERO for _ in range(fan.ambient_dim))]
        target = smallest_containing_cone(fan, points)
        if target is None:
            raise FanError("subdivision escaped the original support")
        cone_map[c.id] = target

    # align orientations of equal-dimensional cones with their images
    adjusted = list(refined.cones)
    for c in refined.cones:
        t = fan.cone(cone_map[c.id])
        if t.dim != c.dim or c.dim == 0:
            continue
        change = [t.span_coords(v) for v in c.span_basis]
        sign = 1 if linalg.det([list(r) for r in change]) > 0 else -1
        want = t.orientation * sign
        if want != c.orientation:
            adjusted[c.id] = Cone(
                id=c.id, ray_ids=c.ray_ids, dim=c.dim, span_basis_ids=c.span_basis_ids,
                span_basis=c.span_basis, basis_inverse=c.basis_inverse,
                span_equations=c.span_equations, facet_raysets=c.facet_raysets,
                facet_normals=c.facet_normals, orientation=want,
            )
    refined = Fan(refined.ambient_dim, refined.rays, adjusted)
    return refined, RefinementMap(refined, fan, cone_map)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class FanFlags:
    complete: bool
    purely_n_dim: bool
    normal: bool
    quasi_convex: bool | None  # None = unknown

    @property
    def quasi_convex_known(self) -> bool:
        return self.quasi_convex is not None


def _dual_graph_connected(fan: Fan, nodes: Sequence[int], above: int | None = None) -> bool:
    """Connectivity of top cones through shared facets (optionally above a cone)."""
    if not nodes:
        return True
    nodes = list(nodes)
    facet_owner: dict[int, list[int]] = {}
    for m in nodes:
        for f in fan.facets_of[m]:
            if above is not None and not fan.cone(above).rayset <= fan.cone(f).rayset:
                continue
            facet_owner.setdefault(f, []).append(m)
    adj: dict[int, set[int]] = {m: set() for m in nodes}
    for owners in facet_owner.values():
        for a, b in itertools.combinations(owners, 2):
            adj[a].add(b)
            adj[b].add(a)
    seen = {nodes[0]}
    queue = [nodes[0]]
    while queue:
        cur = queue.pop()
        for nb in adj[cur]:
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return len(seen) == len(nodes)


def _sample_points(n: int, count: int = 40) -> list[Vec]:
    rng = random.Random(0xFA17 + n)
    pts = []
    while len(pts) < count:
        p = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(n))
        if any(x != 0 for x in p):
            pts.append(p)
    return pts


def classify(fan: Fan) -> FanFlags:
    """Compute the completeness / purity / normality / quasi-convexity flags."""
    n = fan.ambient_dim
    maximal = fan.maximal_cones
    purely = all(fan.cone(m).dim == n for m in maximal) and bool(maximal)

    complete = False
    if purely:
        count: dict[int, int] = {}
        for m in maximal:
            for f in fan.facets_of[m]:
                count[f] = count.get(f, 0) + 1
        walls_ok = all(count.get(c.id, 0) == 2 for c in fan.cones if c.dim == n - 1)
        connected = _dual_graph_connected(fan, maximal)
        sampled = all(fan.supports_point(p) for p in _sample_points(n)) if walls_ok else False
        complete = walls_ok and connected and sampled
    if n == 0:
        complete = True
        purely = True

    normal = purely
    if purely:
        for c in fan.cones:
            star_max = [m for m in maximal if c.rayset <= fan.cone(m).rayset]
            if not _dual_graph_connected(fan, star_max, above=c.id):
                normal = False
                break

    if complete:
        qc: bool | None = True
    elif (purely and len(maximal) == 1 and fan.cone(maximal[0]).dim == n
          and len(fan.cones) == len(fan.faces_of(maximal[0]))):
        qc = True
    else:
        qc = None
    return FanFlags(complete=complete, purely_n_dim=purely, normal=normal, quasi_convex=qc)


# ---------------------------------------------------------------------------
# polytopes


class Polytope:
    """A full-dimensional polytope given by its vertices (exactly the extreme points)."""

    def __init__(self, vertices: Sequence[Sequence]):
        self.vertices = tuple(vec(v) for v in vertices)
        if not self.vertices:
            raise NotFullDim("empty vertex list")
        self.dim = len(self.vertices[0])
        n = self.dim
        if len({len(v) for v in self.vertices}) != 1:
            raise FanError("vertex length mismatch")
        if len(set(self.vertices)) != len(self.vertices):
            raise FanError("duplicate vertices")
        v0 = self.vertices[0]
        diffs = [linalg.sub_vec(v, v0) for v in self.vertices[1:]]
        if linalg.rank([list(d) for d in diffs], n) != n:
            raise NotFullDim("polytope is not full-dimensional")

        # facet enumeration over affinely spanning n-subsets
        facets: dict[frozenset[int], tuple[Vec, Fraction]] = {}
        for sub in itertools.combinations(range(len(self.vertices)), n):
            pts = [self.vertices[i] for i in sub]
            rel = [linalg.sub_vec(p, pts[0]) for p in pts[1:]]
            if linalg.rank([list(r) for r in rel], n) != n - 1:
                continue
            normal = linalg.kernel_basis([list(r) for r in rel], n)
            if len(normal) != 1:
                continue
            a = normal[0]
            c = linalg.dot(a, pts[0])
            vals = [linalg.dot(a, v) - c for v in self.vertices]
            if all(x <= 0 for x in vals):
                pass
            elif all(x >= 0 for x in vals):
                a = tuple(-x for x in a)
                c = -c
                vals = [-x for x in vals]
            else:
                continue
            fr = frozenset(i for i, x in enumerate(vals) if x == 0)
            if fr not in facets:
                aa = canonical_ray(a)
                scale = aa[next(i for i, x in enumerate(a) if x != 0)] / a[next(i for i, x in enumerate(a) if x != 0)]
                facets[fr] = (aa, c * scale)
        self.facet_vertexsets = tuple(sorted(facets, key=lambda f: tuple(sorted(f))))
        self.facet_normals = tuple(facets[f][0] for f in self.facet_vertexsets)
        self.facet_offsets = tuple(facets[f][1] for f in self.facet_vertexsets)

        for i in range(len(self.vertices)):
            at = [self.facet_normals[k] for k, f in enumerate(self.facet_vertexsets) if i in f]
            if linalg.rank([list(a) for a in at], n) != n:
                raise FanError(f"vertex {i} is not an extreme point")

    def barycenter(self) -> Vec:
        n = len(self.vertices)
        total = [ZERO] * self.dim
        for v in self.vertices:
            total = [a + b for a, b in zip(total, v)]
        return tuple(x / n for x in total)

    def face_lattice(self) -> list[frozenset[int]]:
        """All proper nonempty faces as vertex sets (intersections of facets)."""
        faces = set(self.facet_vertexsets)
        frontier = set(faces)
        while frontier:
            nxt = set()
            for f in frontier:
                for g in self.facet_vertexsets:
                    h = f & g
                    if h and h not in faces:
                        nxt.add(h)
            faces |= nxt
            frontier = nxt
        return sorted(faces, key=lambda f: (len(f), tuple(sorted(f))))

    def face_dim(self, face: frozenset[int]) -> int:
        pts = [self.vertices[i] for i in sorted(face)]
        rel = [linalg.sub_vec(p, pts[0]) for p in pts[1:]]
        return linalg.rank([list(r) for r in rel], self.dim) if rel else 0

    def contains_origin_interior(self) -> bool:
        return all(c > 0 for c in self.facet_offsets)


def face_fan(p: Polytope) -> Fan:
    """Complete fan of cones over the proper faces, after centering."""
    b = p.barycenter()
    rays = [canonical_ray(linalg.sub_vec(v, b)) for v in p.vertices]
    maximal = [sorted(f) for f in p.facet_vertexsets]
    return build_fan(p.dim, rays, maximal)


def normal_fan(p: Polytope) -> tuple[Fan, dict[int, Vec]]:
    """Complete fan of outer-normal cones, with its support function.

    Returns the fan together with a map from maximal cone id to the ambient
    linear form the support function restricts to on that cone.  Strict
    convexity across every wall is verified.
    """
    rays = list(p.facet_normals)
    maximal = []
    for i in range(len(p.vertices)):
        maximal.append(sorted(k for k, f in enumerate(p.facet_vertexsets) if i in f))
    fan = build_fan(p.dim, rays, maximal)
    forms = {}
    for m in fan.maximal_cones:
        mc = fan.cone(m)
        vertex = None
        for i, fs in enumerate(maximal):
            if frozenset(fs) == mc.rayset:
                vertex = p.vertices[i]
                break
        if vertex is None:
            raise FanError("normal fan cone does not match a vertex")
        forms[m] = vertex
    verify_strict_convexity(fan, forms)
    return fan, forms


def verify_strict_convexity(fan: Fan, forms: Mapping[int, Sequence[Fraction]]) -> None:
    """Check a conewise linear function is strictly convex across every wall."""
    n = fan.ambient_dim
    owners: dict[int, list[int]] = {}
    for m in fan.maximal_cones:
        for f in fan.facets_of[m]:
            owners.setdefault(f, []).append(m)
    for wall, ms in owners.items():
        if len(ms) != 2:
            continue
        a, b = ms
        fa, fb = forms[a], forms[b]
        if tuple(fa) == tuple(fb):
            raise StrictConvexityFailed(f"function is linear across wall {wall}")
        wallset = fan.cone(wall).rayset
        for m, other in ((a, fb), (b, fa)):
            own = forms[m]
            for i in fan.cone(m).ray_ids:
                gap = linalg.dot(own, fan.rays[i]) - linalg.dot(other, fan.rays[i])
                if i in wallset:
                    if gap != 0:
                        raise StrictConvexityFailed("pieces disagree on a wall ray")
                elif gap <= 0:
                    raise StrictConvexityFailed(
                        f"not strictly convex across wall {wall} at ray {i}")


def polytopal_support(fan: Fan) -> dict[int, Vec] | None:
    """Recognize the fan as the face fan of the hull of its rays.

    If the primitive ray representatives are exactly the vertices of their
    convex hull, the hull contains the origin in its interior, and the cones
    over the hull's facets are exactly the maximal cones, returns the
    conewise linear support data normalized to 1 on the hull's boundary.
    Returns None when the fan is not recognized.
    """
    try:
        p = Polytope(fan.rays)
    except FanError:
        return None
    if not p.contains_origin_interior():
        return None
    hull_cones = {frozenset(f) for f in p.facet_vertexsets}
    fan_cones = {fan.cone(m).rayset for m in fan.maximal_cones}
    if hull_cones != fan_cones:
        return None
    forms = {}
    for k, f in enumerate(p.facet_vertexsets):
        m = fan.cone_by_rayset(f)
        forms[m] = tuple(x / p.facet_offsets[k] for x in p.facet_normals[k])
    verify_strict_convexity(fan, forms)
    return forms
