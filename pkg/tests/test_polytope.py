import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from _helpers import random_unimodular
from fanovol.construct import reflexive_R, simplex_from_weights
from fanovol.classify import minimal_simplex_weights
from fanovol.polytope import (
    PolytopeError,
    RationalPolytope,
    dual,
    equivalent,
    free_sum,
    hull,
    interior_lattice_points,
    is_canonical_fano,
    is_minimal,
    is_reflexive,
    lattice_points,
    normal_form,
    normalized_volume,
    product,
    simplex_lattice_points,
    standard_simplex,
    transform,
    unimodular_map,
    volume,
)

F = Fraction
CROSS = hull([(1, 0), (-1, 0), (0, 1), (0, -1)])
SQUARE = hull([(1, 1), (1, -1), (-1, 1), (-1, -1)])
TRIANGLE = hull([(1, 0), (0, 1), (-1, -1)])
P1113 = hull([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -3)])


def cube(k, d):
    return hull(list(itertools.product([-k, k], repeat=d)))


def test_hull_drops_redundant_points():
    P = hull([(0, 0), (2, 0), (0, 2), (1, 1)])
    assert P.sorted_vertices() == ((0, 0), (0, 2), (2, 0))


def test_hull_cross_polytope_facets():
    assert CROSS.n_vertices == 4 and len(CROSS.facets) == 4
    normals = {tuple(n) for n, _ in CROSS.facets}
    assert normals == {(F(a), F(b)) for a in (1, -1) for b in (1, -1)}


def test_hull_of_R3_is_simplex():
    R = reflexive_R(3)
    assert R.n_vertices == 4 and len(R.facets) == 4


def test_lower_dimensional_hull():
    P = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert P.dim == 2 and not P.full_dim
    assert volume(P) == 1
    seg = hull([(0, 0), (2, 2)])
    assert seg.dim == 1 and volume(seg) == 2


def test_dual_examples():
    assert dual(CROSS) == SQUARE
    assert dual(TRIANGLE).sorted_vertices() == ((-1, -1), (-1, 2), (2, -1))
    assert volume(dual(P1113)) == 12


def test_dual_requires_interior_origin():
    with pytest.raises(PolytopeError):
        dual(hull([(0, 0), (1, 0), (0, 1)]))


def test_volumes():
    assert volume(SQUARE) == 4 and volume(hull([(0, 0), (1, 0), (0, 1), (1, 1)])) == 1
    S3 = hull([(0, 0, 0), (0, 0, 12), (0, 3, 0), (2, 0, 0)])
    assert normalized_volume(S3) == 72
    assert [volume(standard_simplex(q)) for q in (1, 2, 3)] == [1, F(1, 2), F(1, 6)]


def test_volume_against_floating_hull():
    rng = random.Random(3)
    for _ in range(20):
        d = rng.randint(2, 4)
        pts = [tuple(rng.randint(-5, 5) for _ in range(d)) for _ in range(d + 4)]
        P = hull(pts)
        if not P.full_dim:
            continue
        assert float(volume(P)) == pytest.approx(ConvexHull(np.array(pts, dtype=float)).volume, rel=1e-9)


def test_volume_independent_of_fan_order():
    rng = random.Random(5)
    polys = [CROSS, SQUARE, P1113, dual(P1113), cube(1, 3), reflexive_R(4)]
    for _ in range(10):
        polys.append(hull([tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(8)]))
    for P in polys:
        if P.full_dim:
            assert normalized_volume(P, "min") == normalized_volume(P, "max")


def test_lattice_point_examples():
    assert len(lattice_points(SQUARE)) == 9 and interior_lattice_points(SQUARE) == ((0, 0),)
    assert len(lattice_points(TRIANGLE)) == 4 and interior_lattice_points(TRIANGLE) == ((0, 0),)
    assert len(lattice_points(cube(2, 2))) == 25 and len(interior_lattice_points(cube(2, 2))) == 9


@pytest.mark.parametrize("k,d", [(k, d) for k in (1, 2) for d in (1, 2, 3, 4)])
def test_cube_point_count(k, d):
    assert len(lattice_points(cube(k, d))) == (2 * k + 1) ** d


def test_coset_enumeration_matches_box_scan():
    for P in (reflexive_R(3), reflexive_R(4), P1113, dual(reflexive_R(3))):
        pts = tuple(sorted(simplex_lattice_points(P.integer_vertices())))
        assert pts == lattice_points(P)


def test_canonical_examples():
    assert is_canonical_fano(CROSS)
    assert not is_canonical_fano(hull([(0, 0), (1, 0), (0, 1)]))
    assert is_canonical_fano(reflexive_R(4))
    assert not is_canonical_fano(cube(2, 2))


def test_minimal_examples():
    assert is_minimal(TRIANGLE)
    assert is_minimal(CROSS)
    assert not is_minimal(simplex_from_weights((2, 2, 3, 5)))
    assert not is_minimal(SQUARE)
    with pytest.raises(PolytopeError):
        is_minimal(cube(2, 2))


def test_reflexive_examples():
    assert is_reflexive(reflexive_R(3))
    assert is_reflexive(CROSS)
    # recorded value: the dual of P_1113 is conv of lattice points
    assert is_reflexive(P1113)


def test_free_sum_and_product():
    seg = hull([(-1,), (1,)])
    assert free_sum(seg, seg) == CROSS
    assert product(seg, seg) == SQUARE
    with pytest.raises(PolytopeError):
        free_sum(hull([(1,), (2,)]), seg)


def test_free_sum_duality():
    rng = random.Random(9)
    pool = [TRIANGLE, CROSS, SQUARE, hull([(-1,), (1,)]), hull([(-1,), (2,)]), P1113]
    pairs = list(itertools.combinations_with_replacement(pool[:5], 2)) + [(pool[3], P1113)]
    for P, Q in pairs:
        assert dual(free_sum(P, Q)) == product(dual(P), dual(Q))


def test_dual_is_involution():
    rng = random.Random(13)
    polys = [CROSS, TRIANGLE, P1113, reflexive_R(3), reflexive_R(4), cube(1, 3)]
    while len(polys) < 20:
        d = rng.randint(2, 4)
        P = hull([tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(d + 3)])
        if P.full_dim and P.origin_interior:
            polys.append(P)
    for P in polys:
        assert dual(dual(P)) == P


def test_dual_monotonicity():
    inner = hull([(1, 0), (0, 1), (-1, 0), (0, -1)])
    outer = hull([(2, 0), (0, 2), (-2, 0), (0, -2), (1, 1)])
    assert volume(dual(outer)) < volume(dual(inner))
    big = hull(list(P1113.integer_vertices()) + [(1, 1, 0)])
    assert volume(dual(big)) < volume(dual(P1113))


def test_normal_form_examples():
    shear = transform(TRIANGLE, [[1, 3], [0, 1]])
    assert normal_form(shear) == normal_form(TRIANGLE)
    assert normal_form(TRIANGLE) != normal_form(CROSS)
    keys = {normal_form(simplex_from_weights(w)) for w in minimal_simplex_weights(3)}
    assert len(keys) == 13


def test_normal_form_rejects_rational_vertices():
    with pytest.raises(PolytopeError):
        normal_form(hull([(F(1, 2), 0), (0, 1), (-1, -1)]))


def test_normal_form_invariance_under_random_unimodular_maps():
    rng = random.Random(17)
    polys = [CROSS, P1113, reflexive_R(3), dual(reflexive_R(3))]
    polys += [simplex_from_weights(w) for w in minimal_simplex_weights(3)[:4]]
    for P in polys:
        key = normal_form(P)
        for _ in range(20):
            G = random_unimodular(rng, P.ambient_dim)
            Q = transform(P, G)
            assert normal_form(Q) == key
            assert equivalent(P, Q)


def test_normal_form_agrees_with_vertex_matching():
    weights = minimal_simplex_weights(3)
    simplices = [simplex_from_weights(w) for w in weights]
    rng = random.Random(19)
    for S in simplices[:6]:
        G = random_unimodular(rng, 3)
        assert unimodular_map(S, transform(S, G)) is not None
    for A, B in itertools.combinations(simplices[:6], 2):
        assert unimodular_map(A, B) is None


def test_json_round_trip():
    P = dual(P1113)
    Q = RationalPolytope.from_json(P.to_json())
    assert Q == P and Q.to_json() == P.to_json()
