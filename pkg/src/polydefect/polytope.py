"""Lattice polytopes given by integer vertex lists.

Everything lattice-sensitive (facet normals, smoothness, counting) is done in
the saturated chart of the affine hull, so lower-dimensional polytopes such as
Cayley polytopes in their natural embedding are handled without special cases.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterable, Sequence

from .lattice_algebra import (
    AffineLatticeChart,
    IntVector,
    determinant,
    dot,
    primitive,
    rank,
    rational_inverse,
    saturated_chart,
)


@dataclass(frozen=True)
class Facet:
    """Inequality <normal, y> >= offset in chart coordinates, tight on `vertices`."""

    normal: IntVector
    offset: int
    vertices: frozenset


@dataclass(frozen=True)
class Face:
    vertex_indices: frozenset
    dim: int


def hull_inequalities(points: Sequence[Sequence[int]]) -> list[tuple[IntVector, int]]:
    """Facet inequalities <u, y> >= b of conv(points) in Z^r.

    The points must affinely span R^r with r >= 1. Double description on the
    homogenized cone {(y0, u) : y0 + <u, p> >= 0 for all p}; its extreme rays
    are the facets. Rays are kept primitive, adjacency is combinatorial.
    """
    rows = [(1,) + tuple(p) for p in dict.fromkeys(tuple(p) for p in points)]
    D = len(rows[0])

    basis: list[int] = []
    for i in range(len(rows)):
        if rank([rows[j] for j in basis + [i]]) == len(basis) + 1:
            basis.append(i)
            if len(basis) == D:
                break
    if len(basis) < D:
        raise ValueError("points are not full-dimensional")

    inv = rational_inverse([rows[i] for i in basis])
    rays = []
    masks = []
    for j in range(D):
        col = [inv[i][j] for i in range(D)]
        den = 1
        for x in col:
            den = den * x.denominator // gcd(den, x.denominator)
        rays.append(primitive([int(x * den) for x in col]))
        masks.append(sum(1 << basis[i] for i in range(D) if i != j))

    for idx in range(len(rows)):
        if idx in basis:
            continue
        a = rows[idx]
        vals = [dot(a, r) for r in rays]
        bit = 1 << idx
        if all(v >= 0 for v in vals):
            masks = [m | bit if v == 0 else m for m, v in zip(masks, vals)]
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        new_rays = [rays[i] for i, v in enumerate(vals) if v >= 0]
        new_masks = [masks[i] | bit if vals[i] == 0 else masks[i]
                     for i, v in enumerate(vals) if v >= 0]
        for p in pos:
            for q in neg:
                common = masks[p] & masks[q]
                if bin(common).count("1") < D - 2:
                    continue
                if any(t != p and t != q and masks[t] & common == common
                       for t in range(len(rays))):
                    continue
                r = [vals[p] * x - vals[q] * y for x, y in zip(rays[q], rays[p])]
                new_rays.append(primitive(r))
                new_masks.append(common | bit)
        rays, masks = new_rays, new_masks

    out = []
    for y0, *u in rays:
        g = 0
        for x in u:
            g = gcd(g, x)
        out.append((tuple(x // g for x in u), -y0 // g))
    return sorted(out)


class LatticePolytope:
    """Convex hull of integer points, stored by its vertices.

    Use :meth:`from_vertices`; the constructor trusts its input.
    Derived data is computed lazily and memoized under a lock.
    """

    def __init__(self, ambient_dim: int, vertices: Sequence[IntVector],
                 chart: AffineLatticeChart, facets: list[Facet] | None = None):
        self.ambient_dim = ambient_dim
        self.vertices = tuple(vertices)
        self.chart = chart
        self.model_vertices = tuple(chart.lattice_coordinates(v) for v in self.vertices)
        self._lock = threading.RLock()
        self._cache: dict = {}
        if facets is not None:
            self._cache["facets"] = facets

    @classmethod
    def from_vertices(cls, ambient_dim: int, points: Iterable[Sequence[int]]) -> LatticePolytope:
        pts = []
        for p in points:
            p = tuple(p)
            if len(p) != ambient_dim:
                raise ValueError(f"point {p} does not have {ambient_dim} coordinates")
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in p):
                raise TypeError(f"point {p} has non-integer coordinates")
            pts.append(p)
        if not pts:
            raise ValueError("a polytope needs at least one point")
        pts = sorted(set(pts))
        chart = saturated_chart(pts)
        r = chart.rank
        if r == 0:
            return cls(ambient_dim, pts, chart, [])
        model = [chart.lattice_coordinates(p) for p in pts]
        ineqs = hull_inequalities(model)
        verts = []
        for p, y in zip(pts, model):
            tight = [u for u, b in ineqs if dot(u, y) == b]
            if rank(tight) == r:
                verts.append(p)
        P = cls(ambient_dim, verts, chart)
        P._cache["facets"] = P._facets_from(ineqs)
        return P

    def _facets_from(self, ineqs):
        return [Facet(u, b, frozenset(i for i, y in enumerate(self.model_vertices)
                                     if dot(u, y) == b))
                for u, b in ineqs]

    def memo(self, key, fn: Callable):
        """Return the cached value for `key`, computing it once with `fn()`."""
        try:
            return self._cache[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._cache:
                self._cache[key] = fn()
            return self._cache[key]

    def __repr__(self):
        return f"LatticePolytope(ambient_dim={self.ambient_dim}, vertices={list(self.vertices)})"

    def __eq__(self, other):
        return (isinstance(other, LatticePolytope) and self.ambient_dim == other.ambient_dim
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    @property
    def dim(self) -> int:
        return self.chart.rank

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def facets(self) -> list[Facet]:
        return self.memo("facets", lambda: self._facets_from(hull_inequalities(self.model_vertices)))

    def incidence(self) -> list[list[bool]]:
        """Vertex-by-facet incidence matrix."""
        fs = self.facets()
        return [[i in f.vertices for f in fs] for i in range(len(self.vertices))]

    def faces(self) -> list[Face]:
        """All nonempty faces, P itself included, sorted by dimension then vertex set."""
        return self.memo("faces", self._face_lattice)

    def _face_lattice(self):
        full = (1 << len(self.vertices)) - 1
        facet_masks = [sum(1 << i for i in f.vertices) for f in self.facets()]
        seen = {full}
        stack = [full]
        while stack:
            F = stack.pop()
            for fm in facet_masks:
                G = F & fm
                if G and G not in seen:
                    seen.add(G)
                    stack.append(G)
        faces = []
        for mask in seen:
            idx = frozenset(i for i in range(len(self.vertices)) if mask >> i & 1)
            faces.append(Face(idx, self._affine_rank(idx)))
        faces.sort(key=lambda F: (F.dim, sorted(F.vertex_indices)))
        return faces

    def _affine_rank(self, idx) -> int:
        idx = sorted(idx)
        y0 = self.model_vertices[idx[0]]
        return rank([[a - b for a, b in zip(self.model_vertices[i], y0)] for i in idx[1:]])

    def faces_of_dim(self, j: int) -> list[Face]:
        return [F for F in self.faces() if F.dim == j]

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.dim + 1)
        for F in self.faces():
            counts[F.dim] += 1
        return tuple(counts)

    def face_polytope(self, face: Face) -> LatticePolytope:
        key = ("face", face.vertex_indices)
        return self.memo(key, lambda: LatticePolytope.from_vertices(
            self.ambient_dim, [self.vertices[i] for i in sorted(face.vertex_indices)]))

    def tight_facets(self, i: int) -> list[Facet]:
        return [f for f in self.facets() if i in f.vertices]

    def is_simple(self) -> bool:
        return all(len(self.tight_facets(i)) == self.dim for i in range(len(self.vertices)))

    def is_smooth(self) -> bool:
        if not self.is_simple():
            return False
        return all(abs(determinant([f.normal for f in self.tight_facets(i)])) == 1
                   for i in range(len(self.vertices)))

    def contains(self, x: Sequence, mode: str = "closed") -> bool:
        """Membership of a rational point in P ("closed") or its relative interior."""
        if mode not in ("closed", "relative_interior"):
            raise ValueError(f"unknown mode {mode!r}")
        y = self.chart.coordinates(x)
        if y is None:
            return False
        if self.dim == 0:
            return True
        if mode == "closed":
            return all(dot(f.normal, y) >= f.offset for f in self.facets())
        return all(dot(f.normal, y) > f.offset for f in self.facets())


def from_vertices(ambient_dim: int, points: Iterable[Sequence[int]]) -> LatticePolytope:
    return LatticePolytope.from_vertices(ambient_dim, points)


def dim(P: LatticePolytope) -> int:
    return P.dim


def facets(P: LatticePolytope) -> list[Facet]:
    return P.facets()


def face_lattice(P: LatticePolytope) -> list[list[Face]]:
    out = [[] for _ in range(P.dim + 1)]
    for F in P.faces():
        out[F.dim].append(F)
    return out


def f_vector(P: LatticePolytope) -> tuple[int, ...]:
    return P.f_vector()


def is_simple(P: LatticePolytope) -> bool:
    return P.is_simple()


def is_smooth(P: LatticePolytope) -> bool:
    return P.is_smooth()


def membership(P: LatticePolytope, x: Sequence, mode: str = "closed") -> bool:
    return P.contains(x, mode)


# constructors


def simplex(n: int) -> LatticePolytope:
    """The unimodular simplex conv(0, e_1, ..., e_n)."""
    pts = [(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return LatticePolytope.from_vertices(n, pts)


def cube(n: int, a: int = 1) -> LatticePolytope:
    """The box [0, a]^n."""
    if a < 1:
        raise ValueError("cube side must be positive")
    return LatticePolytope.from_vertices(n, itertools.product((0, a), repeat=n))


def dilate(P: LatticePolytope, k: int) -> LatticePolytope:
    if k < 1:
        raise ValueError("dilation factor must be >= 1")
    return LatticePolytope.from_vertices(P.ambient_dim, [tuple(k * x for x in v) for v in P.vertices])


def product(*Ps: LatticePolytope) -> LatticePolytope:
    if not Ps:
        raise ValueError("product of no polytopes")
    verts = [sum(vs, ()) for vs in itertools.product(*(P.vertices for P in Ps))]
    return LatticePolytope.from_vertices(sum(P.ambient_dim for P in Ps), verts)


def pyramid(P: LatticePolytope) -> LatticePolytope:
    """Lattice pyramid: P at height 0 with apex e_{n+1}."""
    n = P.ambient_dim
    verts = [v + (0,) for v in P.vertices] + [(0,) * n + (1,)]
    return LatticePolytope.from_vertices(n + 1, verts)


def cayley(Ps: Sequence[LatticePolytope]) -> LatticePolytope:
    """conv(P_0 x e_0, ..., P_k x e_k) in R^m + R^{k+1}."""
    if not Ps:
        raise ValueError("cayley needs at least one polytope")
    m = Ps[0].ambient_dim
    if any(P.ambient_dim != m for P in Ps):
        raise ValueError("cayley factors must share one ambient dimension")
    k1 = len(Ps)
    verts = [v + tuple(int(i == j) for j in range(k1)) for i, P in enumerate(Ps) for v in P.vertices]
    return LatticePolytope.from_vertices(m + k1, verts)


def full_dimensional_model(P: LatticePolytope) -> tuple[LatticePolytope, AffineLatticeChart]:
    if P.is_full_dimensional:
        return P, P.chart
    return LatticePolytope.from_vertices(P.dim, P.model_vertices), P.chart


def is_strictly_isomorphic(P: LatticePolytope, Q: LatticePolytope) -> bool:
    """Whether P and Q have the same normal fan.

    Lower-dimensional inputs are compared inside their common affine direction;
    if the directions differ the fans have different lineality spaces and the
    answer is False.
    """
    if P.ambient_dim != Q.ambient_dim:
        raise ValueError("polytopes live in different ambient spaces")
    if P.chart.basis != Q.chart.basis:
        return False
    if P.dim == 0:
        return True

    def cones(R):
        fs = R.facets()
        return {frozenset(f.normal for f in fs if i in f.vertices) for i in range(len(R.vertices))}

    if {f.normal for f in P.facets()} != {f.normal for f in Q.facets()}:
        return False
    return cones(P) == cones(Q)


def lattice_width(P: LatticePolytope, u: Sequence[int]) -> int:
    """Width of P in direction u, u given in chart coordinates."""
    vals = [dot(u, y) for y in P.model_vertices]
    return max(vals) - min(vals)


def width_one_directions(P: LatticePolytope, radius: int = 1) -> list[IntVector]:
    """Primitive functionals (chart coordinates, up to sign) on which P has width 1.

    Only functionals with all coordinates in [-radius, radius] are examined, so
    directions outside that box are missed.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    out = []
    for u in itertools.product(range(-radius, radius + 1), repeat=P.dim):
        nz = next((x for x in u if x), 0)
        if nz <= 0:
            continue
        g = 0
        for x in u:
            g = gcd(g, x)
        if g != 1:
            continue
        if lattice_width(P, u) == 1:
            out.append(u)
    return out


def to_json(P: LatticePolytope) -> dict:
    return {"ambient_dim": P.ambient_dim, "vertices": [list(v) for v in P.vertices]}


def from_json(data: dict) -> LatticePolytope:
    if not isinstance(data, dict) or "ambient_dim" not in data or "vertices" not in data:
        raise ValueError('polytope JSON needs "ambient_dim" and "vertices"')
    n = data["ambient_dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError("ambient_dim must be a non-negative integer")
    verts = data["vertices"]
    if not isinstance(verts, list):
        raise ValueError("vertices must be a list")
    return LatticePolytope.from_vertices(n, verts)
