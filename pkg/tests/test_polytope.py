import random
from fractions import Fraction
from itertools import combinations, permutations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from persson_moduli import polytope as pt
from persson_moduli.polytope import FlatConstraint as F

from oracles import is_matroid_by_exchange, support_sets

HALF8 = (Fraction(1, 2),) * 8


def test_hypersimplex_vertex_counts():
    assert len(pt.hypersimplex_vertices(3, 8)) == 56
    assert len(pt.hypersimplex_vertices(3, 6)) == 20
    assert pt.hypersimplex_vertices(1, 4) == {tuple(int(i == j) for i in range(4)) for j in range(4)}
    with pytest.raises(ValueError):
        pt.hypersimplex_vertices(5, 4)


def test_constraint_polytopes():
    q1 = pt.polytope_from_constraints(3, 8, [F((1, 2, 3), 1)])
    # oracle: count 3-subsets meeting {1,2,3} in at most one element
    assert len(q1.vertices) == sum(1 for I in combinations(range(8), 3) if len(set(I) & {0, 1, 2}) <= 1) == 40
    assert len(pt.polytope_from_constraints(3, 8, []).vertices) == 56
    with pytest.raises(ValueError):
        pt.polytope_from_constraints(3, 8, [F((1, 2, 3, 4, 5, 6), 0)])


def test_matroid_examples():
    assert pt.is_matroid_polytope(pt.polytope_from_constraints(3, 8, []))
    assert pt.is_matroid_polytope(pt.polytope_from_constraints(3, 8, [F((1, 2, 3), 1)]))
    assert pt.is_matroid_polytope(pt.polytope_from_constraints(3, 8, [F((1, 2, 3, 4, 5), 2), F((4, 5, 6, 7, 8), 2)]))


def test_removing_one_vertex_agrees_with_exchange_oracle():
    verts = set(pt.hypersimplex_vertices(3, 8))
    verts.discard((1, 1, 1, 0, 0, 0, 0, 0))
    assert pt.is_matroid_polytope(verts) == is_matroid_by_exchange(support_sets(verts))


def test_constructed_non_example():
    verts = [(1, 1, 1, 0, 0, 0), (0, 0, 0, 1, 1, 1)]
    assert not is_matroid_by_exchange(support_sets(verts))
    assert not pt.is_matroid_polytope(verts)
    assert pt.non_root_edges(frozenset(verts))


def test_matroid_from_vectors():
    rng = random.Random(3)
    vecs = [[rng.randint(-50, 50) for _ in range(3)] for _ in range(8)]
    assert pt.matroid_from_vectors(vecs).vertices == pt.hypersimplex_vertices(3, 8)
    # five vectors in a plane: the dual picture of five concurrent lines
    plane = [[a, b, a + b] for a, b in [(1, 2), (3, -1), (2, 5), (-4, 1), (1, 1)]]
    generic = [[1, 0, 7], [0, 3, -1], [5, 1, 2]]
    got = pt.matroid_from_vectors(plane + generic)
    assert got.vertices == pt.polytope_from_constraints(3, 8, [F((1, 2, 3, 4, 5), 2)]).vertices
    same = [[1, 2, 3]] * 3 + [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 5], [2, -3, 7]]
    got = pt.matroid_from_vectors(same)
    assert got.vertices == pt.polytope_from_constraints(3, 8, [F((1, 2, 3), 1)]).vertices
    with pytest.raises(ValueError):
        pt.matroid_from_vectors([[0, 0, 0], [1, 0, 0], [0, 1, 0]])


def test_matroid_from_vectors_is_linear_invariant():
    rng = random.Random(9)
    vecs = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(7)]
    vecs[6] = [vecs[0][i] + vecs[1][i] for i in range(3)]
    vecs = [v if any(v) else [1, 1, 1] for v in vecs]
    M = [[2, 1, 0], [0, 1, 3], [1, 0, 1]]
    moved = [[sum(M[i][k] * v[k] for k in range(3)) * (j + 1) for i in range(3)] for j, v in enumerate(vecs)]
    a, b = pt.matroid_from_vectors(vecs), pt.matroid_from_vectors(moved)
    assert a.vertices == b.vertices
    assert pt.is_matroid_polytope(a)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 4), (2, 5), (3, 6)]).flatmap(
    lambda dn: st.tuples(st.just(dn), st.sets(st.sampled_from(sorted(pt.hypersimplex_vertices(*dn))), min_size=1))))
def test_edge_criterion_matches_exchange_axiom(case):
    _, verts = case
    assert pt.is_matroid_polytope(verts) == is_matroid_by_exchange(support_sets(verts))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_realisable_matroids_pass(seed):
    rng = random.Random(seed)
    vecs = [[rng.randint(-1, 1) for _ in range(3)] for _ in range(6)]
    vecs = [v if any(v) else [0, 0, 1] for v in vecs]
    try:
        P = pt.matroid_from_vectors(vecs)
    except ValueError:
        return
    if P.vertices:
        assert pt.is_matroid_polytope(P)


def test_face_fitting_examples():
    q1 = pt.polytope_from_constraints(3, 8, [F((1, 2, 3), 1)])
    q2 = pt.polytope_from_constraints(3, 8, [F((4, 5, 6, 7, 8), 2)])
    assert pt.face_fitting(q1, q2)
    assert not pt.face_fitting(q1, q1)
    q3 = pt.polytope_from_constraints(3, 8, [F((1, 2, 4), 1)])
    assert not pt.face_fitting(q1, q3)


def test_bcut_interior():
    full = pt.polytope_from_constraints(3, 8, [])
    assert pt.bcut_interior_meets(full, "1/2")
    assert pt.bcut_interior_meets(pt.polytope_from_constraints(3, 8, [F((1, 2, 3), 1)]), "1/2")
    # a facet x_1 = 1 misses the open cut
    facet = pt.MatroidPolytope(3, 8, frozenset(v for v in full.vertices if v[0] == 1))
    assert not pt.bcut_interior_meets(facet, "1/2")


def test_cut_hyperplanes_are_three_sets():
    hyper = pt.cut_hyperplanes(3, 8, HALF8)
    assert len(hyper) == comb(8, 3)
    assert all(len(I) == 3 and k == 1 for I, k in hyper)


def _as_sets(tiling):
    return sorted(sorted((c.I, c.k) for c in p.constraints) for p in tiling.pieces)


def test_three_classes(tilings_3_8):
    assert [c.orbit_size for c in tilings_3_8] == [1, comb(8, 3), comb(8, 3) * comb(5, 3) // 2]
    assert _as_sets(tilings_3_8[0].tiling) == [[]]
    assert _as_sets(tilings_3_8[1].tiling) == [[((1, 2, 3), 1)], [((4, 5, 6, 7, 8), 2)]]
    assert _as_sets(tilings_3_8[2].tiling) == [[((1, 2, 3), 1)], [((1, 2, 3, 4, 5), 2), ((4, 5, 6, 7, 8), 2)],
                                                [((6, 7, 8), 1)]]


def test_only_trivial_tiling_for_seven(tilings_3_7):
    assert len(tilings_3_7) == 1 and _as_sets(tilings_3_7[0].tiling) == [[]]


def test_volume_coverage_is_exact(tilings_3_8):
    for c in tilings_3_8:
        assert c.verified["covers"] and c.verified["volume_sum"] == Fraction(15, 16)
        assert c.verified["face_fitting"] and c.verified["integral_pieces"]
        assert all(pt.is_matroid_polytope(P) for P in c.tiling.pieces)


def test_orbit_sizes_by_direct_enumeration(tilings_3_8):
    # independent count: apply all of S_8 and count distinct images
    for c in tilings_3_8[1:]:
        images = set()
        cs = c.tiling.constraint_sets()
        for perm in permutations(range(1, 9)):
            images.add(pt._apply_perm(dict(zip(range(1, 9), perm)), cs))
        assert len(images) == c.orbit_size


def test_symmetry_soundness(tilings_3_8):
    rng = random.Random(1)
    for c in tilings_3_8[1:]:
        for _ in range(3):
            perm = list(range(1, 9))
            rng.shuffle(perm)
            image = pt._apply_perm(dict(zip(range(1, 9), perm)), c.tiling.constraint_sets())
            t = pt.Tiling(3, 8, tuple(pt.polytope_from_constraints(3, 8, sorted(p)) for p in image))
            assert pt.verify_tiling(t, HALF8)["ok"]


def test_non_tiling_fails_verification():
    t = pt.Tiling(3, 8, (pt.polytope_from_constraints(3, 8, [F((1, 2, 3), 1)]),
                         pt.polytope_from_constraints(3, 8, [F((1, 2, 4), 1)])))
    assert not pt.verify_tiling(t, HALF8)["ok"]


def test_tiling_json_round_trip(tilings_3_8):
    for c in tilings_3_8:
        t = c.tiling
        assert pt.Tiling.from_json(t.to_json()) == t


def test_search_limit():
    with pytest.raises(pt.SearchLimitError):
        pt.enumerate_tilings(3, 8, "1/2", limit=3)


def test_weight_validation():
    with pytest.raises(ValueError):
        pt.parse_weight("3/2", 8)
    with pytest.raises(ValueError):
        pt.enumerate_tilings(3, 8, "1/3")
