from fractions import Fraction
from math import ceil, comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import box_count, euclidean_volume_simplex
from polydefect import ehrhart
from polydefect.ehrhart import (
    codegree,
    count_interior,
    count_points,
    degree,
    ehrhart_polynomial,
    ehrhart_profile,
    evaluate,
    h_star,
    interpolate,
    lattice_points,
    normalized_volume,
    reciprocity_check,
)
from polydefect.polytope import (
    cube,
    dilate,
    from_vertices,
    full_dimensional_model,
    product,
    pyramid,
    simplex,
)


def full_dim_sets(dim, size=7, bound=3):
    coord = st.integers(-bound, bound)
    return st.lists(st.tuples(*[coord] * dim), min_size=dim + 1, max_size=size)


def test_counts_of_dilated_triangle():
    assert [count_points(simplex(2), t) for t in range(4)] == [1, 3, 6, 10]
    assert count_points(cube(2, 2)) == 9


def test_cayley_polytope_has_nine_points(cayley_six):
    assert count_points(cayley_six) == 9
    assert sorted(lattice_points(cayley_six)) == sorted(cayley_six.vertices)


def test_interior_examples():
    T = dilate(simplex(2), 2)
    assert count_interior(T, 1) == 0
    assert count_interior(T, 2) == 3
    assert lattice_points(T, 2, interior=True) == [(1, 1), (1, 2), (2, 1)]
    assert [count_interior(simplex(1), k) for k in (1, 2)] == [0, 1]
    assert count_interior(from_vertices(3, [(1, 2, 3)]), 1) == 1
    with pytest.raises(ValueError):
        count_interior(T, 0)
    with pytest.raises(ValueError):
        count_points(T, -1)


def test_lattice_points_degenerate_cases():
    pt = from_vertices(2, [(1, -1)])
    assert lattice_points(pt, 3) == [(3, -3)]
    assert lattice_points(simplex(2), 0) == [(0, 0)]
    seg = from_vertices(2, [(0, 0), (2, 2)])
    assert lattice_points(seg) == [(0, 0), (1, 1), (2, 2)]


@settings(max_examples=40, deadline=None)
@given(full_dim_sets(3), st.integers(1, 3))
def test_counts_agree_with_bounding_box_scan(points, k):
    P = from_vertices(3, points)
    if P.dim < 3:
        return
    assert count_points(P, k) == box_count(list(P.vertices), k)
    assert count_interior(P, k) == box_count(list(P.vertices), k, interior=True)


@settings(max_examples=25, deadline=None)
@given(full_dim_sets(4, size=6, bound=2), st.integers(1, 2))
def test_counts_agree_with_bounding_box_scan_dim4(points, k):
    P = from_vertices(4, points)
    if P.dim < 4:
        return
    assert count_points(P, k) == box_count(list(P.vertices), k)
    assert count_interior(P, k) == box_count(list(P.vertices), k, interior=True)


def test_batched_walk_matches_plain_walk(monkeypatch):
    polys = [cube(3, 2), dilate(simplex(3), 3), from_vertices(3, [(0, 0, 0), (3, 1, 0), (1, 4, 0), (2, 2, 5)])]
    expected = {(i, k, s): ehrhart._walk(P, k, s, False) for i, P in enumerate(polys)
                for k in (1, 2, 3) for s in (False, True)}
    monkeypatch.setattr(ehrhart, "_fits_int64", lambda P, k: False)
    for (i, k, s), n in expected.items():
        assert ehrhart._walk(polys[i], k, s, False) == n


def test_interpolation():
    # values of 2k^2 + 3k + 1
    assert interpolate([1, 6, 15]) == [1, 3, 2]
    assert evaluate([Fraction(1), Fraction(1, 2)], 4) == 3
    coeffs = interpolate([k ** 5 - 3 * k for k in range(6)])
    assert coeffs == [0, -3, 0, 0, 0, 1]


def test_ehrhart_polynomial_examples():
    for n in range(1, 4):
        coeffs = ehrhart_polynomial(cube(n))
        assert coeffs == [comb(n, i) for i in range(n + 1)]
    assert ehrhart_polynomial(dilate(simplex(2), 2)) == [1, 3, 2]
    prism = ehrhart_polynomial(product(simplex(1), simplex(2)))
    for k in range(6):
        assert evaluate(prism, k) == (k + 1) * comb(k + 2, 2)


def test_h_star_examples():
    for n in range(1, 6):
        assert h_star(simplex(n)) == [1] + [0] * n
    assert h_star(dilate(simplex(2), 2)) == [1, 3, 0]
    assert h_star(product(simplex(1), simplex(2))) == [1, 2, 0, 0]


def test_codegree_examples(pyramid_chain, cayley_six):
    for n in range(1, 9):
        assert codegree(simplex(n)) == n + 1
    for d in range(1, 5):
        for k in range(1, 7):
            assert codegree(dilate(simplex(k), d)) == ceil((k + 1) / d)
    _, Qp, P = pyramid_chain
    assert degree(P) == 2 and codegree(P) == 5
    assert degree(Qp) == 1
    assert codegree(cayley_six) == 3


def test_normalized_volume_examples(four_simplex):
    assert normalized_volume(from_vertices(2, [(0, 0), (2, 0)])) == 2
    assert normalized_volume(from_vertices(2, [(0, 0), (2, 2)])) == 2
    assert normalized_volume(dilate(simplex(2), 2)) == 4
    for n in range(1, 6):
        assert normalized_volume(simplex(n)) == 1
    assert normalized_volume(four_simplex) == euclidean_volume_simplex(list(four_simplex.vertices))


def test_face_volume_uses_the_saturated_lattice(four_simplex):
    facet = next(F for F in four_simplex.faces_of_dim(3)
                 if all(four_simplex.vertices[i][3] == 1 for i in F.vertex_indices))
    assert ehrhart.face_volume(four_simplex, facet) == 2


def test_reciprocity_examples():
    assert reciprocity_check(dilate(simplex(2), 2), 2)
    assert count_interior(dilate(simplex(2), 2), 2) == 3
    assert reciprocity_check(simplex(1), 1)
    assert reciprocity_check(simplex(3), 4)
    assert count_interior(simplex(3), 4) == 1
    with pytest.raises(ValueError):
        reciprocity_check(simplex(2), 0)


@settings(max_examples=40, deadline=None)
@given(full_dim_sets(3, bound=2))
def test_profile_invariants(points):
    P = from_vertices(3, points)
    prof = ehrhart_profile(P)
    n = P.dim
    assert prof.h_star[0] == 1 and min(prof.h_star) >= 0
    assert sum(prof.h_star) == prof.normalized_volume
    assert prof.degree == max(i for i, x in enumerate(prof.h_star) if x)
    assert prof.codegree == n + 1 - prof.degree
    if n:
        assert prof.ehr_coeffs[-1] * factorial(n) == prof.normalized_volume
    for k in range(1, n + 3):
        assert reciprocity_check(P, k)
    Q, _ = full_dimensional_model(P)
    for k in range(n + 3):
        assert count_points(P, k) == count_points(Q, k)
    for F in P.faces():
        assert degree(P.face_polytope(F)) <= prof.degree
    data = prof.to_json()
    assert data["h_star"] == list(prof.h_star)


@settings(max_examples=30, deadline=None)
@given(full_dim_sets(2, size=5, bound=3))
def test_pyramid_keeps_degree(points):
    P = from_vertices(2, points)
    assert degree(pyramid(P)) == degree(P)


@settings(max_examples=20, deadline=None)
@given(full_dim_sets(2, size=4, bound=2), full_dim_sets(2, size=4, bound=2))
def test_codegree_of_product_is_max(a, b):
    P, Q = from_vertices(2, a), from_vertices(2, b)
    assert codegree(product(P, Q)) == max(codegree(P), codegree(Q))


def test_lower_dimensional_counts(cayley_six):
    Q, _ = full_dimensional_model(cayley_six)
    for k in range(4):
        assert count_points(cayley_six, k) == count_points(Q, k)
    assert h_star(cayley_six) == [1, 2, 4, 4, 1, 0, 0]
