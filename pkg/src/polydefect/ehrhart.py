"""Lattice-point counting in dilates and the invariants derived from it.

Points of kP are walked coordinate by coordinate in the saturated chart. The
admissible range of coordinate i, given the first i-1, comes from the facets of
the projection of P onto the first i chart coordinates, so every prefix that is
visited extends to at least a rational point of kP, and the last coordinate is
counted rather than visited.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .lattice_algebra import ConsistencyError, binom, dot
from .polytope import Face, LatticePolytope, hull_inequalities


@dataclass(frozen=True)
class EhrhartProfile:
    dim: int
    ehr_coeffs: tuple[Fraction, ...]
    h_star: tuple[int, ...]
    normalized_volume: int
    degree: int
    codegree: int

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "ehrhart_polynomial": [str(c) for c in self.ehr_coeffs],
            "h_star": list(self.h_star),
            "normalized_volume": self.normalized_volume,
            "degree": self.degree,
            "codegree": self.codegree,
        }


def _levels(P: LatticePolytope):
    # level i holds (coefficient of y_i, coefficients of y_<i, offset) for every
    # facet of the projection onto y_0..y_i that actually involves y_i
    def build():
        r = P.dim
        levels = []
        for i in range(1, r + 1):
            if i == r:
                ineqs = [(f.normal, f.offset) for f in P.facets()]
            else:
                ineqs = hull_inequalities(sorted({y[:i] for y in P.model_vertices}))
            levels.append([(u[i - 1], u[:i - 1], b) for u, b in ineqs if u[i - 1]])
        return levels

    return P.memo("levels", build)


def _walk(P: LatticePolytope, k: int, interior: bool, collect: bool):
    if _fits_int64(P, k):
        return _walk_batched(P, k, interior, collect)
    levels = _levels(P)
    r = len(levels)
    shift = 1 if interior else 0
    found = []
    total = 0
    prefix: list[int] = []

    def bounds(depth):
        lo = hi = None
        for a, w, b in levels[depth]:
            rhs = k * b + shift - dot(w, prefix)
            if a > 0:
                v = -(-rhs // a)
                if lo is None or v > lo:
                    lo = v
            else:
                v = (-rhs) // (-a)
                if hi is None or v < hi:
                    hi = v
        return lo, hi

    def rec(depth):
        nonlocal total
        lo, hi = bounds(depth)
        if lo > hi:
            return
        if depth == r - 1:
            if collect:
                found.extend(tuple(prefix) + (x,) for x in range(lo, hi + 1))
            else:
                total += hi - lo + 1
            return
        for x in range(lo, hi + 1):
            prefix.append(x)
            rec(depth + 1)
            prefix.pop()

    rec(0)
    return found if collect else total


_BATCH = 1 << 18


def _walk_batched(P: LatticePolytope, k: int, interior: bool, collect: bool):
    # Same walk, but a whole block of prefixes is extended by one coordinate at a
    # time with int64 arrays. Only used when _fits_int64 rules out overflow.
    shift = 1 if interior else 0
    levels = []
    for lvl in _levels(P):
        a = np.array([x for x, _, _ in lvl], dtype=np.int64)
        w = np.array([list(y) for _, y, _ in lvl], dtype=np.int64).reshape(len(lvl), -1)
        rhs = np.array([k * b + shift for _, _, b in lvl], dtype=np.int64)
        up = a > 0
        levels.append((w, rhs, up, a[up], -a[~up]))
    r = len(levels)
    found = []

    def ranges(rows, depth):
        w, rhs0, up, a_up, a_dn = levels[depth]
        rhs = rhs0[None, :] - rows @ w.T
        lo = (-((-rhs[:, up]) // a_up)).max(axis=1)
        hi = ((-rhs[:, ~up]) // a_dn).min(axis=1)
        return lo, np.maximum(hi - lo + 1, 0)

    def extend(rows, lo, cnt):
        keep = cnt > 0
        rows, lo, cnt = rows[keep], lo[keep], cnt[keep]
        starts = np.repeat(np.cumsum(cnt) - cnt, cnt)
        col = np.repeat(lo, cnt) + np.arange(int(cnt.sum()), dtype=np.int64) - starts
        return np.hstack([np.repeat(rows, cnt, axis=0), col[:, None]])

    def process(rows, depth):
        lo, cnt = ranges(rows, depth)
        if depth == r - 1 and not collect:
            return int(cnt.sum())
        if len(rows) > 1 and int(cnt.sum()) > _BATCH:
            half = len(rows) // 2
            return process(rows[:half], depth) + process(rows[half:], depth)
        nxt = extend(rows, lo, cnt)
        if depth == r - 1:
            found.extend(map(tuple, nxt.tolist()))
            return 0
        return process(nxt, depth + 1) if len(nxt) else 0

    total = process(np.zeros((1, 0), dtype=np.int64), 0)
    return found if collect else total


def _fits_int64(P: LatticePolytope, k: int) -> bool:
    # crude magnitude bound on every intermediate of the vectorized tail
    coord = k * max(max(abs(x) for x in y) for y in P.model_vertices) + 1
    coef = max(max((abs(x) for x in w), default=0) + abs(a) + abs(b) for lvl in _levels(P) for a, w, b in lvl)
    return (P.dim + 2) * coef * coord * (k + 1) < 2 ** 62


def count_points(P: LatticePolytope, k: int = 1) -> int:
    """|kP ∩ Z^n|."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0 or P.dim == 0:
        return 1
    return P.memo(("count", k), lambda: _walk(P, k, False, False))


def count_interior(P: LatticePolytope, k: int = 1) -> int:
    """Lattice points in the relative interior of kP."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if P.dim == 0:
        return 1
    return P.memo(("interior", k), lambda: _walk(P, k, True, False))


def lattice_points(P: LatticePolytope, k: int = 1, interior: bool = False) -> list[tuple[int, ...]]:
    """Lattice points of kP (or its relative interior) in ambient coordinates."""
    if k < 0 or (interior and k < 1):
        raise ValueError("invalid dilation factor")
    if P.dim == 0:
        return [tuple(k * x for x in P.vertices[0])]
    if k == 0:
        return [(0,) * P.ambient_dim]
    origin = tuple(k * x for x in P.chart.origin)
    model = _walk(P, k, interior, True)
    out = []
    for y in model:
        p = list(origin)
        for c, row in zip(y, P.chart.basis):
            for j, b in enumerate(row):
                p[j] += c * b
        out.append(tuple(p))
    return sorted(out)


def interpolate(values: list[int]) -> list[Fraction]:
    """Monomial coefficients (low to high) of the polynomial through (i, values[i])."""
    # Newton forward differences, then expand binom(t, m) into monomials
    diffs = []
    row = [Fraction(v) for v in values]
    while row:
        diffs.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    coeffs = [Fraction(0)] * len(values)
    basis = [Fraction(1)]  # coefficients of binom(t, m)
    for m, d in enumerate(diffs):
        for i, c in enumerate(basis):
            coeffs[i] += d * c
        nxt = [Fraction(0)] * (len(basis) + 1)
        for i, c in enumerate(basis):
            nxt[i + 1] += c / (m + 1)
            nxt[i] -= c * m / (m + 1)
        basis = nxt
    return coeffs


def evaluate(coeffs, t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def ehrhart_polynomial(P: LatticePolytope) -> list[Fraction]:
    def build():
        n = P.dim
        coeffs = interpolate([count_points(P, k) for k in range(n + 1)])
        check = count_points(P, n + 1)
        if evaluate(coeffs, n + 1) != check:
            raise ConsistencyError(
                f"Ehrhart interpolation predicts {evaluate(coeffs, n + 1)} points at k={n + 1}, "
                f"counted {check}")
        return coeffs

    return P.memo("ehrhart", build)


def h_star(P: LatticePolytope) -> list[int]:
    def build():
        n = P.dim
        counts = [count_points(P, i) for i in range(n + 1)]
        h = [sum((-1) ** (k - i) * binom(n + 1, k - i) * counts[i] for i in range(k + 1))
             for k in range(n + 1)]
        if h[0] != 1 or any(x < 0 for x in h):
            raise ConsistencyError(f"invalid h*-vector {h}")
        vol = normalized_volume(P)
        if sum(h) != vol:
            raise ConsistencyError(f"h* sums to {sum(h)}, normalized volume is {vol}")
        return h

    return list(P.memo("h_star", build))


def normalized_volume(P: LatticePolytope) -> int:
    lead = ehrhart_polynomial(P)[-1] * factorial(P.dim)
    if lead.denominator != 1 or lead <= 0:
        raise ConsistencyError(f"normalized volume {lead} is not a positive integer")
    return int(lead)


def face_volume(P: LatticePolytope, face: Face) -> int:
    return normalized_volume(P.face_polytope(face))


def codegree(P: LatticePolytope) -> int:
    def build():
        n = P.dim
        cd = next((k for k in range(1, n + 2) if count_interior(P, k) > 0), None)
        if cd is None:
            raise ConsistencyError(f"no interior lattice point in {n + 1}P")
        h = h_star(P)
        deg_h = max(i for i, x in enumerate(h) if x)
        if n + 1 - cd != deg_h:
            raise ConsistencyError(f"codegree {cd} disagrees with h*-degree {deg_h} (dim {n})")
        return cd

    return P.memo("codegree", build)


def degree(P: LatticePolytope) -> int:
    return P.dim + 1 - codegree(P)


def reciprocity_check(P: LatticePolytope, k: int) -> bool:
    """(-1)^n ehr_P(-k) == number of interior lattice points of kP."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lhs = (-1) ** P.dim * evaluate(ehrhart_polynomial(P), -k)
    return lhs == count_interior(P, k)


def ehrhart_profile(P: LatticePolytope) -> EhrhartProfile:
    return EhrhartProfile(
        dim=P.dim,
        ehr_coeffs=tuple(ehrhart_polynomial(P)),
        h_star=tuple(h_star(P)),
        normalized_volume=normalized_volume(P),
        degree=degree(P),
        codegree=codegree(P),
    )
