import json
import random
from math import comb, gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_facets
from polydefect import polytope
from polydefect.lattice_algebra import dot
from polydefect.polytope import (
    cayley,
    cube,
    dilate,
    f_vector,
    face_lattice,
    from_vertices,
    full_dimensional_model,
    hull_inequalities,
    is_simple,
    is_smooth,
    is_strictly_isomorphic,
    lattice_width,
    membership,
    product,
    pyramid,
    simplex,
    width_one_directions,
)

OCTAHEDRON = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]


def point_sets(dim, size=8, bound=3):
    coord = st.integers(-bound, bound)
    return st.lists(st.tuples(*[coord] * dim), min_size=1, max_size=size)


# construction


def test_non_extreme_points_are_dropped():
    P = from_vertices(2, [(0, 0), (2, 0), (0, 2), (1, 1)])
    assert P.vertices == ((0, 0), (0, 2), (2, 0))
    assert len(from_vertices(1, [(0,), (1,)]).vertices) == 2


def test_bad_input_is_rejected():
    with pytest.raises(ValueError):
        from_vertices(2, [])
    with pytest.raises(ValueError):
        from_vertices(2, [(0, 0), (1, 0, 0)])
    with pytest.raises(TypeError):
        from_vertices(2, [(0, 0.5)])


def test_cayley_keeps_all_nine_vertices(cayley_six):
    assert cayley_six.ambient_dim == 7
    assert cayley_six.dim == 6
    assert len(cayley_six.vertices) == 9
    again = from_vertices(7, cayley_six.vertices)
    assert again.vertices == cayley_six.vertices


def test_dimensions(cayley_six, pyramid_chain):
    assert polytope.dim(from_vertices(3, [(1, 2, 3)])) == 0
    Q, Qp, P = pyramid_chain
    assert Qp.dim == 5
    assert P.dim == 6


# facets and faces


def test_facet_examples():
    assert len(polytope.facets(dilate(simplex(2), 2))) == 3
    fs = cube(3).facets()
    assert len(fs) == 6
    normals = {f.normal: f.offset for f in fs}
    for i in range(3):
        e = tuple(int(i == j) for j in range(3))
        assert normals[e] == 0
        assert normals[tuple(-x for x in e)] == -1


def test_facets_of_cayley_polytope_match_brute_force(cayley_six):
    Q, _ = full_dimensional_model(cayley_six)
    ours = sorted((f.normal, f.offset) for f in Q.facets())
    assert ours == brute_force_facets(list(Q.vertices))
    f = cayley_six.f_vector()
    assert sum((-1) ** j * x for j, x in enumerate(f[:-1])) == 1 - (-1) ** 6


@settings(max_examples=60, deadline=None)
@given(point_sets(3))
def test_facets_match_brute_force(points):
    P = from_vertices(3, points)
    if P.dim < 3:
        return
    ours = sorted((f.normal, f.offset) for f in P.facets())
    assert ours == brute_force_facets(list(P.vertices))


@settings(max_examples=60, deadline=None)
@given(point_sets(4, size=7, bound=2))
def test_facet_inequalities_are_tight_exactly_on_their_vertices(points):
    P = from_vertices(4, points)
    for f in P.facets():
        vals = [dot(f.normal, y) for y in P.model_vertices]
        assert min(vals) == f.offset
        assert {i for i, v in enumerate(vals) if v == f.offset} == f.vertices
        assert gcd(*f.normal) == 1


def test_f_vector_examples():
    assert f_vector(cube(2)) == (4, 4, 1)
    assert f_vector(product(simplex(1), simplex(2))) == (6, 9, 5, 1)
    for n in range(1, 7):
        assert f_vector(simplex(n)) == tuple(comb(n + 1, j + 1) for j in range(n + 1))


def _euler(P):
    f = P.f_vector()
    return sum((-1) ** j * x for j, x in enumerate(f)) == 1


@settings(max_examples=60, deadline=None)
@given(point_sets(4, size=8, bound=2))
def test_euler_relation(points):
    P = from_vertices(4, points)
    # with P itself counted, the alternating sum over all faces is 1
    assert _euler(P)


@settings(max_examples=40, deadline=None)
@given(point_sets(3, size=8))
def test_faces_are_closed_under_the_galois_connection(points):
    P = from_vertices(3, points)
    faces = {F.vertex_indices for F in P.faces()}
    for F in P.faces():
        containing = [f for f in P.facets() if F.vertex_indices <= f.vertices]
        if containing:
            joint = frozenset.intersection(*[f.vertices for f in containing])
            assert joint == F.vertex_indices
        # faces of faces are faces
        G = P.face_polytope(F)
        for H in G.faces():
            verts = {G.vertices[i] for i in H.vertex_indices}
            assert frozenset(P.vertices.index(v) for v in verts) in faces
    assert len(face_lattice(P)) == P.dim + 1


def _random_simple(rng):
    parts = []
    left = rng.randint(2, 6)
    while left:
        m = rng.randint(1, min(left, 3))
        parts.append(rng.choice([dilate(simplex(m), rng.randint(1, 2)), cube(m, rng.randint(1, 2))]))
        left -= m
    return product(*parts) if len(parts) > 1 else parts[0]


def test_faces_of_simple_polytopes_lie_in_binomially_many_faces():
    rng = random.Random(3)
    for _ in range(12):
        P = _random_simple(rng)
        assert P.is_simple()
        n = P.dim
        by_dim = face_lattice(P)
        for j in range(n + 1):
            for p in range(j, n + 1):
                for F in by_dim[j]:
                    above = sum(1 for G in by_dim[p] if F.vertex_indices <= G.vertex_indices)
                    assert above == comb(n - j, n - p)


# simple / smooth


def test_simple_and_smooth_examples(four_simplex, pyramid_chain):
    for n in range(1, 5):
        assert is_simple(simplex(n)) and is_smooth(simplex(n))
        assert is_smooth(cube(n))
    assert is_smooth(dilate(simplex(2), 2))
    octa = from_vertices(3, OCTAHEDRON)
    assert not is_simple(octa) and not is_smooth(octa)
    assert is_simple(four_simplex) and not is_smooth(four_simplex)
    assert is_simple(pyramid_chain[2])


def test_point_is_simple_and_smooth():
    P = from_vertices(2, [(1, 1)])
    assert is_simple(P) and is_smooth(P)


@settings(max_examples=50, deadline=None)
@given(point_sets(3, size=6), st.integers(1, 3))
def test_smooth_implies_simple_and_dilation_preserves_both(points, k):
    P = from_vertices(3, points)
    if P.is_smooth():
        assert P.is_simple()
    Pk = dilate(P, k)
    assert Pk.is_simple() == P.is_simple()
    assert Pk.is_smooth() == P.is_smooth()
    assert is_strictly_isomorphic(P, Pk)


# membership


def test_membership_examples():
    assert not membership(dilate(simplex(2), 2), (1, 1), "relative_interior")
    assert membership(dilate(simplex(2), 2), (1, 1))
    assert membership(dilate(simplex(2), 3), (1, 1), "relative_interior")
    seg = from_vertices(2, [(0, 0), (2, 0)])
    assert membership(seg, (1, 0), "relative_interior")
    assert not membership(seg, (1, 1))
    pt = from_vertices(2, [(4, 4)])
    assert membership(pt, (4, 4), "relative_interior")
    with pytest.raises(ValueError):
        membership(seg, (0, 0), "open")


def test_membership_accepts_rational_points():
    from fractions import Fraction

    P = simplex(2)
    assert membership(P, (Fraction(1, 3), Fraction(1, 3)), "relative_interior")
    assert not membership(P, (Fraction(2, 3), Fraction(2, 3)))


# constructors


@settings(max_examples=30, deadline=None)
@given(point_sets(2, size=5), point_sets(2, size=5))
def test_vertex_counts_of_constructions(a, b):
    P, Q = from_vertices(2, a), from_vertices(2, b)
    assert len(product(P, Q).vertices) == len(P.vertices) * len(Q.vertices)
    assert len(pyramid(P).vertices) == len(P.vertices) + 1
    assert len(cayley([P, Q]).vertices) == len(P.vertices) + len(Q.vertices)
    assert pyramid(P).dim == P.dim + 1
    assert product(P, Q).dim == P.dim + Q.dim


def test_cayley_dimension_and_errors(triangles):
    # the triangles span R^4 jointly, so the Cayley sum of three has dim 4 + 2
    assert cayley(triangles).dim == 6
    with pytest.raises(ValueError):
        cayley([simplex(2), simplex(3)])
    with pytest.raises(ValueError):
        dilate(simplex(2), 0)


def test_full_dimensional_model(cayley_six):
    P = cube(2)
    Q, chart = full_dimensional_model(P)
    assert Q is P
    Q, chart = full_dimensional_model(from_vertices(2, [(0, 0), (2, 2)]))
    assert Q.ambient_dim == 1 and Q.vertices == ((0,), (2,))
    Q, _ = full_dimensional_model(cayley_six)
    assert Q.ambient_dim == 6 and Q.is_full_dimensional


# normal fans


def test_strict_isomorphism_examples(triangles):
    P = dilate(simplex(2), 1)
    assert is_strictly_isomorphic(P, dilate(P, 2))
    assert not is_strictly_isomorphic(simplex(2), cube(2))
    assert is_strictly_isomorphic(cube(3), cube(3, 2))
    T0, T1, T2 = triangles
    # each triangle spans a different plane of R^4
    assert not is_strictly_isomorphic(T0, T1)
    assert not is_strictly_isomorphic(T1, T2)
    assert is_strictly_isomorphic(T0, T0)
    with pytest.raises(ValueError):
        is_strictly_isomorphic(simplex(2), simplex(3))


def test_rectangle_and_hexagon_against_square():
    # a rectangle has the fan of the square; the hexagon has two extra normals
    assert is_strictly_isomorphic(cube(2), from_vertices(2, [(0, 0), (3, 0), (0, 1), (3, 1)]))
    hexagon = from_vertices(2, [(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)])
    assert not is_strictly_isomorphic(hexagon, cube(2))


# lattice width


def test_width_one_examples(cayley_six):
    seg = cayley([simplex(1), dilate(simplex(1), 2)])
    dirs = width_one_directions(seg, 1)
    assert dirs
    assert width_one_directions(dilate(simplex(2), 2), 2) == []
    dirs = width_one_directions(cayley_six, 1)
    assert dirs
    for u in dirs:
        assert lattice_width(cayley_six, u) == 1
    with pytest.raises(ValueError):
        width_one_directions(simplex(2), 0)


# serialization


def test_json_round_trip(cayley_six):
    data = polytope.to_json(cayley_six)
    again = polytope.from_json(json.loads(json.dumps(data)))
    assert again.vertices == cayley_six.vertices
    with pytest.raises(ValueError):
        polytope.from_json({"vertices": [[0]]})
    with pytest.raises(ValueError):
        polytope.from_json({"ambient_dim": -1, "vertices": []})


def test_hull_inequalities_of_a_square():
    ineqs = hull_inequalities([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert sorted(ineqs) == [((-1, 0), -1), ((0, -1), -1), ((0, 1), 0), ((1, 0), 0)]
