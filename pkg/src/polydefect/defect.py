"""The invariant c(P), the codegree criterion for dual defect, and the face-sum
identities for simple polytopes.

For smooth P, c(P) is the degree of the A-discriminant, so c(P) = 0 exactly
when the toric embedding is dual defective; the criterion says this happens iff
cd(P) >= (n+3)/2. For singular P nothing is claimed.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from math import ceil

from . import ehrhart
from .identities import IdentityReport, lemma23_value
from .lattice_algebra import ConsistencyError, binom
from .polytope import LatticePolytope, product

SINGULAR_NOTE = "criterion applies to smooth polytopes only; invariants reported without a verdict"
Q_NORMAL_NOTE = "dual defective: (X, L) is Q-normal with spectral value = codegree = nef value"
SEGRE_WORDING_NOTE = (
    "P^k1 x P^k2 in its Segre embedding is dual defective iff k1 != k2: the codegree criterion "
    "(2 max(k1, k2) > k1 + k2) and c(S_k1 x S_k2) = 0 both say so. The sentence stating "
    "'if and only if k1 = k2' is read as a typo (c(S_1 x S_1) = 2, the degree of the 2x2 determinant).")


@dataclass(frozen=True)
class DefectVerdict:
    is_smooth: bool
    codegree: int
    dim: int
    c_value: int
    criterion_met: bool
    defect: int
    q_normal_note: str
    note: str = ""

    def to_json(self) -> dict:
        return asdict(self)


def c_invariant(P: LatticePolytope) -> int:
    """sum_j (-1)^(n-j) (j+1) sum_{dim F = j} Vol_Z(F), over the whole face lattice."""
    n = P.dim
    return P.memo("c", lambda: sum(
        (-1) ** (n - F.dim) * (F.dim + 1) * ehrhart.face_volume(P, F) for F in P.faces()))


def criterion(codegree: int, n: int) -> bool:
    """cd >= (n+3)/2, kept in integers."""
    return 2 * codegree >= n + 3


def defect_verdict(P: LatticePolytope) -> DefectVerdict:
    n = P.dim
    cd = ehrhart.codegree(P)
    c = c_invariant(P)
    smooth = P.is_smooth()
    met = criterion(cd, n)
    if not smooth:
        return DefectVerdict(False, cd, n, c, met, 0, "", SINGULAR_NOTE)
    if met != (c == 0):
        raise ConsistencyError(
            f"smooth polytope with codegree {cd}, dim {n} and c = {c} contradicts the criterion")
    if met:
        return DefectVerdict(True, cd, n, c, True, 2 * cd - 2 - n, Q_NORMAL_NOTE)
    return DefectVerdict(True, cd, n, c, False, 0, "")


def product_defect_criterion(Ps: list[LatticePolytope], cross_check: bool = False) -> bool:
    """2 max cd(P_i) >= sum dim(P_i) + 3 for a product of smooth polytopes."""
    for P in Ps:
        if not P.is_smooth():
            raise ValueError("product criterion needs smooth factors")
    verdict = 2 * max(ehrhart.codegree(P) for P in Ps) >= sum(P.dim for P in Ps) + 3
    if cross_check:
        c = c_invariant(product(*Ps))
        if verdict != (c == 0):
            raise ConsistencyError(f"product criterion says {verdict} but c(product) = {c}")
    return verdict


def segre_veronese_defect(d: list[int], k: list[int]) -> bool:
    """Dual defect of the product of the simplices d_i * S_{k_i}."""
    if len(d) != len(k) or not d or min(d + k) < 1:
        raise ValueError("need matching nonempty lists of positive integers")
    total = sum(k)
    displayed = 2 * max(ceil((ki + 1) / di) for di, ki in zip(d, k)) >= total + 3
    simplified = any(di == 1 and 2 * ki > total for di, ki in zip(d, k))
    if displayed != simplified:
        raise ConsistencyError(f"criterion forms disagree for d={d}, k={k}")
    return simplified


def c_segre_closed(k1: int, k2: int) -> int:
    """Closed double binomial sum for c(S_k1 x S_k2)."""
    if k1 < 1 or k2 < 1:
        raise ValueError("k1, k2 must be >= 1")
    return sum((-1) ** ((k1 + k2 - i - j) % 2) * (i + j - 1)
               * binom(k1 + 1, i) * binom(k2 + 1, j) * binom(i + j - 2, i - 1)
               for i in range(1, k1 + 2) for j in range(1, k2 + 2))


def _faces_by_dim(P: LatticePolytope):
    out = [[] for _ in range(P.dim + 1)]
    for F in P.faces():
        out[F.dim].append(P.face_polytope(F))
    return out


def _h(F: LatticePolytope, k: int) -> int:
    h = ehrhart.h_star(F)
    return h[k] if 0 <= k < len(h) else 0


def expr_proof_value(P: LatticePolytope) -> int:
    """sum_{p>d} sum_{i=1}^{p-d} (-1)^(d-i) i binom(p+1, p-d-i) sum_{dim G = p} |(iG)° ∩ Z^n|.

    Zero for every lattice polytope with degree d < n: each interior count
    vanishes because the codegree of a p-face exceeds p - d.
    """
    n, d = P.dim, ehrhart.degree(P)
    if d >= n:
        raise ValueError("expression undefined (empty outer sum range is the d=n degenerate case)")
    faces = _faces_by_dim(P)
    total = 0
    for p in range(d + 1, n + 1):
        for i in range(1, p - d + 1):
            inner = sum(ehrhart.count_interior(G, i) for G in faces[p])
            total += (-1) ** (d - i) * i * binom(p + 1, p - d - i) * inner
    return total


def _middle_bracket(n: int, d: int, j: int, k: int) -> int:
    # the p, i double sum before it is collapsed with the convolution formula
    return sum((-1) ** (p - d - i) * i * binom(p + 1, p - d - i) * binom(n - j, n - p)
               * binom(i + j - k, j)
               for p in range(d + 1, n + 1) for i in range(1, p - d + 1))


def h_star_expansion(P: LatticePolytope, collapsed: bool = True) -> int:
    """The same expression rewritten through h*-vectors of all faces.

    sum_j (-1)^j sum_{k <= min(j, d)} M(j, k) sum_{dim F = j} h*_k(F), with M the
    middle bracket, either as the raw double sum or collapsed to the one-line
    alternating sum. Only valid for simple P.
    """
    n, d = P.dim, ehrhart.degree(P)
    faces = _faces_by_dim(P)
    total = 0
    for j in range(n + 1):
        for k in range(min(j, d) + 1):
            if collapsed:
                m = lemma23_value(n, d, j, k)
            else:
                m = _middle_bracket(n, d, j, k)
            total += (-1) ** j * m * sum(_h(F, k) for F in faces[j])
    return total


def theorem21_check(P: LatticePolytope, part: str | None = None) -> IdentityReport:
    """Face-sum identities for a simple polytope of degree d < n.

    part "i" (d < n-d): c(P) = 0. part "ii" (d >= n-d): the weighted h*-sum over
    faces vanishes. Both are also compared with the interior-count expression
    and with its h*-expansion, raw and collapsed.
    """
    if not P.is_simple():
        raise ValueError("the face-sum identities need a simple polytope")
    n, d = P.dim, ehrhart.degree(P)
    if d >= n:
        raise ValueError(f"need degree < dim, got degree {d} and dim {n}")
    expected = "i" if d < n - d else "ii"
    if part is None:
        part = expected
    if part != expected:
        raise ValueError(f"part {part} does not apply: degree {d}, dim {n}")
    rep = IdentityReport(f"face_sum_part_{part}", {"n": n, "d": d})
    expr = expr_proof_value(P)
    rep.record({"quantity": "interior-count expression"}, expr, 0)
    rep.record({"quantity": "raw h* expansion"}, h_star_expansion(P, collapsed=False), expr)
    rep.record({"quantity": "collapsed h* expansion"}, h_star_expansion(P), expr)
    if part == "i":
        c = c_invariant(P)
        rep.record({"quantity": "c(P)"}, c, 0)
        rep.record({"quantity": "(-1)^n c(P) vs expression"}, (-1) ** n * c, expr)
    else:
        faces = _faces_by_dim(P)
        a = n - d
        value = sum((-1) ** j * sum(a * _h(F, a) + (j + 1) * sum(_h(F, k) for k in range(a))
                                    for F in faces[j])
                    for j in range(n + 1))
        rep.record({"quantity": "weighted h* face sum"}, value, 0)
        rep.record({"quantity": "weighted h* face sum vs expression"}, value, expr)
    return rep


def vanishing_equations(P: LatticePolytope) -> list[int]:
    """sum_j (-1)^(n-j) sum_{dim F = j} |kF ∩ Z^n| for k = 1..ceil((n+1)/2).

    Each value equals the number of interior lattice points of kP.
    """
    if not P.is_simple():
        raise ValueError("the inclusion-exclusion equations are stated for simple polytopes")
    n = P.dim
    faces = _faces_by_dim(P)
    out = []
    for k in range(1, (n + 2) // 2 + 1):
        v = sum((-1) ** (n - j) * ehrhart.count_points(F, k) for j in range(n + 1) for F in faces[j])
        if v != ehrhart.count_interior(P, k):
            raise ConsistencyError(f"face sum {v} differs from the interior count at k={k}")
        out.append(v)
    return out
