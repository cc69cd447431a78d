"""Box points of lattice simplices.

The box of a simplex with vertices v_0..v_n is the half-open parallelepiped
spanned by the lifted vertices (v_i, 1). Its lattice points are in bijection
with Z^{n+1}/Λ, Λ the lattice spanned by the lifted vertices, so they are
enumerated from Smith normal form coset representatives and then pushed into
the box by taking fractional parts of their barycentric coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import ehrhart
from .identities import IdentityReport
from .lattice_algebra import ConsistencyError, binom, rational_inverse, smith_normal_form
from .polytope import LatticePolytope


@dataclass(frozen=True)
class BoxPoint:
    point: tuple[int, ...]
    coefficients: tuple[Fraction, ...]
    support: frozenset
    height: int


@dataclass(frozen=True)
class BoxPointProfile:
    n: int
    points: tuple[BoxPoint, ...]
    s: dict
    h_star_from_heights: tuple[int, ...]

    def s_value(self, support) -> int:
        return self.s.get(frozenset(support), 0)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "box_points": [{"point": list(b.point), "support": sorted(b.support), "height": b.height}
                           for b in self.points],
            "s": [{"support": sorted(I), "count": c}
                  for I, c in sorted(self.s.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))],
            "h_star": list(self.h_star_from_heights),
        }


def _require_simplex(P: LatticePolytope):
    if len(P.vertices) != P.dim + 1:
        raise ValueError(f"not a simplex: {len(P.vertices)} vertices in dimension {P.dim}")


def box_points(P: LatticePolytope) -> BoxPointProfile:
    _require_simplex(P)
    return P.memo("box_points", lambda: _box_points(P))


def _box_points(P: LatticePolytope) -> BoxPointProfile:
    n = P.dim
    W = [list(v) + [1] for v in P.model_vertices]
    W_inv = rational_inverse(W)
    S, _, V = smith_normal_form(W)
    V_inv = [[int(x) for x in row] for row in rational_inverse(V)]
    divisors = [S[i][i] for i in range(n + 1)]

    points = []
    for z in itertools.product(*(range(d) for d in divisors)):
        y = [sum(z[i] * V_inv[i][j] for i in range(n + 1)) for j in range(n + 1)]
        lam = [sum(y[i] * W_inv[i][j] for i in range(n + 1)) for j in range(n + 1)]
        lam = [c - (c.numerator // c.denominator) for c in lam]
        x = [sum(lam[i] * W[i][j] for i in range(n + 1)) for j in range(n + 1)]
        if any(c.denominator != 1 for c in x):
            raise ConsistencyError("box point with non-integer coordinates")
        support = frozenset(i for i, c in enumerate(lam) if c)
        points.append(BoxPoint(tuple(int(c) for c in x), tuple(lam), support, int(x[-1])))
    points.sort(key=lambda b: (b.height, b.point))

    s: dict = {}
    for b in points:
        s[b.support] = s.get(b.support, 0) + 1
    h = [0] * (n + 1)
    for b in points:
        h[b.height] += 1
    if s.get(frozenset(), 0) != 1:
        raise ConsistencyError("the origin must be the only box point with empty support")
    return BoxPointProfile(n, tuple(points), s, tuple(h))


def c_from_box(P: LatticePolytope) -> int:
    """c(P) of a simplex as the nonnegative combination sum_I binom(|I|, n) s_I."""
    prof = box_points(P)
    n = prof.n
    c = sum(binom(len(I), n) * cnt for I, cnt in prof.s.items())
    short = (n + 1) * prof.s_value(range(n + 1)) + sum(
        cnt for I, cnt in prof.s.items() if len(I) == n)
    if n >= 1 and c != short:
        raise ConsistencyError(f"box formula {c} and its two-term form {short} disagree")
    return c


def support_bound_check(P: LatticePolytope) -> IdentityReport:
    """s_I = 0 whenever |I| > 2 deg(P)."""
    prof = box_points(P)
    d = ehrhart.degree(P)
    rep = IdentityReport("support_bound", {"n": prof.n, "degree": d})
    for I, cnt in sorted(prof.s.items(), key=lambda kv: sorted(kv[0])):
        if len(I) > 2 * d:
            rep.record({"support": sorted(I)}, cnt, 0)
        else:
            rep.checked += 1
    return rep
