"""Seeded random instances and the property checks run on each of them."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import defect, ehrhart, simplex_box
from .lattice_algebra import ConsistencyError, determinant
from .polytope import (
    LatticePolytope,
    cube,
    dilate,
    from_vertices,
    full_dimensional_model,
    product,
    simplex,
)


@dataclass
class InstanceResult:
    index: int
    vertices: list
    ambient_dim: int
    failures: list = field(default_factory=list)
    findings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"index": self.index, "ambient_dim": self.ambient_dim, "vertices": self.vertices,
                "failures": self.failures, "findings": self.findings}


def random_simplex(rng: random.Random, dim: int, bound: int) -> LatticePolytope:
    while True:
        pts = [tuple(rng.randint(-bound, bound) for _ in range(dim)) for _ in range(dim + 1)]
        if determinant([[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]) != 0:
            return from_vertices(dim, pts)


def random_simple(rng: random.Random, dim: int, bound: int) -> LatticePolytope:
    """Product of random factors: dilated unimodular simplices, boxes, and now and
    then a random simplex, so that non-smooth simple polytopes show up too."""
    parts = []
    left = dim
    while left:
        m = rng.randint(1, left)
        kind = rng.random()
        if kind < 0.45:
            parts.append(dilate(simplex(m), rng.randint(1, 2)))
        elif kind < 0.8:
            parts.append(cube(m, rng.randint(1, 2)) if m <= 3 else simplex(m))
        else:
            parts.append(random_simplex(rng, m, max(1, bound // 2)))
        left -= m
    return product(*parts) if len(parts) > 1 else parts[0]


GENERATORS = {"simplex": random_simplex, "simple": random_simple}


def generate(kind: str, dim: int, bound: int, count: int, seed: int) -> list[LatticePolytope]:
    rng = random.Random(seed)
    gen = GENERATORS[kind]
    return [gen(rng, dim, bound) for _ in range(count)]


def check_instance(P: LatticePolytope) -> tuple[list[str], list[str]]:
    """Run every applicable property; return (failures, findings)."""
    failures: list[str] = []
    findings: list[str] = []

    def expect(ok, msg):
        if not ok:
            failures.append(msg)

    try:
        n = P.dim
        h = ehrhart.h_star(P)
        vol = ehrhart.normalized_volume(P)
        expect(h[0] == 1 and min(h) >= 0 and sum(h) == vol, f"h* {h} vs volume {vol}")
        cd = ehrhart.codegree(P)
        d = ehrhart.degree(P)
        expect(max(i for i, x in enumerate(h) if x) == n + 1 - cd, "h*-degree vs codegree")
        for k in range(1, n + 3):
            expect(ehrhart.reciprocity_check(P, k), f"reciprocity fails at k={k}")
        Q, _ = full_dimensional_model(P)
        for k in range(n + 3):
            expect(ehrhart.count_points(P, k) == ehrhart.count_points(Q, k), f"chart count k={k}")
        for F in P.faces():
            dF = ehrhart.degree(P.face_polytope(F))
            expect(dF <= d, f"face {sorted(F.vertex_indices)} has degree {dF} > {d}")
        if d < n:
            expect(defect.expr_proof_value(P) == 0, "interior-count expression is nonzero")
        c = defect.c_invariant(P)
        if P.is_simple():
            eqs = defect.vanishing_equations(P)
            if cd > (n + 2) // 2:
                expect(not any(eqs), f"vanishing equations {eqs}")
            if d < n:
                rep = defect.theorem21_check(P)
                expect(rep.passed, f"face-sum identity failed: {rep.first_failure}")
        if len(P.vertices) == n + 1:
            cb = simplex_box.c_from_box(P)
            expect(cb == c, f"box formula {cb} vs face lattice {c}")
            expect(c >= 0, f"negative c = {c} on a simplex")
            prof = simplex_box.box_points(P)
            expect(list(prof.h_star_from_heights) == h, "box heights vs h*")
            expect(len(prof.points) == vol, "box point count vs volume")
            expect(simplex_box.support_bound_check(P).passed, "support bound violated")
        elif c < 0:
            findings.append(f"c = {c} < 0 on a non-simplex")
        if P.is_smooth():
            verdict = defect.defect_verdict(P)
            expect(verdict.criterion_met == (c == 0), "criterion vs c on a smooth polytope")
    except ConsistencyError as exc:
        failures.append(f"consistency error: {exc}")
    return failures, findings


def _run_one(args) -> InstanceResult:
    index, ambient_dim, vertices = args
    P = from_vertices(ambient_dim, [tuple(v) for v in vertices])
    failures, findings = check_instance(P)
    return InstanceResult(index, [list(v) for v in vertices], ambient_dim, failures, findings)


def run(kind: str, dim: int, bound: int, count: int, seed: int, workers: int = 1) -> list[InstanceResult]:
    polys = generate(kind, dim, bound, count, seed)
    jobs = [(i, P.ambient_dim, [list(v) for v in P.vertices]) for i, P in enumerate(polys)]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(j) for j in jobs]
