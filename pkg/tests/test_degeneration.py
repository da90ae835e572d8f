import random
from collections import Counter
from fractions import Fraction
from itertools import combinations

import pytest

from persson_moduli import cover, degeneration as dg, gf2core as gf, invariants, polytope as pt
from persson_moduli.polytope import FlatConstraint as F

HALF = Fraction(1, 2)
EVERY = set(range(1, 9))


def _type_ii(I, J):
    return dg.tiling_from_constraint_sets([[F(I, 1)], [F(tuple(sorted(EVERY - set(I))), 2),
                                                       F(tuple(sorted(EVERY - set(J))), 2)], [F(J, 1)]])


def _type_i(I):
    return dg.tiling_from_constraint_sets([[F(I, 1)], [F(tuple(sorted(EVERY - set(I))), 2)]])


def test_classification(tilings_3_8):
    tags = [dg.classify_tiling(c.tiling) for c in tilings_3_8]
    assert [t.tag for t in tags] == [dg.TYPE0, dg.TYPE_I, dg.TYPE_II]
    assert [t.kinds() for t in tags] == [["P2"], ["P2", "F1"], ["P2", "P1xP1", "P2"]]
    assert tags[1].concurrency["three_set"] == (1, 2, 3)
    assert tags[1].concurrency["five_set"] == (4, 5, 6, 7, 8)
    assert tags[2].concurrency["three_sets"] == ((1, 2, 3), (6, 7, 8))
    assert tags[2].concurrency["double_pair"] == (4, 5)


def test_outside_family():
    with pytest.raises(dg.NotInFamily):
        dg.classify_tiling(dg.tiling_from_constraint_sets([[F((1, 2, 3), 1)], [F((1, 2, 4), 1)]]))
    with pytest.raises(dg.NotInFamily):
        dg.classify_tiling(pt.Tiling(3, 7, (pt.polytope_from_constraints(3, 7, []),)))


def test_classification_is_equivariant(tilings_3_8):
    rng = random.Random(0)
    for c in tilings_3_8:
        base = dg.classify_tiling(c.tiling)
        for _ in range(5):
            perm = list(range(1, 9))
            rng.shuffle(perm)
            sigma = dict(zip(range(1, 9), perm))
            image = pt._apply_perm(sigma, c.tiling.constraint_sets())
            t = dg.tiling_from_constraint_sets([sorted(p) for p in image])
            moved = dg.classify_tiling(t)
            assert moved.tag == base.tag and sorted(moved.kinds()) == sorted(base.kinds())
            if base.tag == dg.TYPE_I:
                assert moved.concurrency["three_set"] == tuple(sorted(sigma[i] for i in base.concurrency["three_set"]))


def test_type_ii_prime_marker(tilings_3_8):
    dt = dg.type_ii_prime(dg.classify_tiling(tilings_3_8[2].tiling))
    assert dt.tag == dg.TYPE_II_PRIME and dt.marker["weight"][-1] == "1/2-eps"
    with pytest.raises(ValueError):
        dg.type_ii_prime(dg.classify_tiling(tilings_3_8[0].tiling))


def test_pullback_examples():
    y = dg.f1([dg.BranchCurve(dg.FIB)] * 5 + [dg.BranchCurve(dg.SPLUS)] * 3 + [dg.BranchCurve(dg.SMINUS)])
    assert dg.log_canonical_class(y) == (1, 0)
    assert dg.pullback_canonical_square(y, 16) == 0
    assert dg.pullback_canonical_square(dg.p2([dg.BranchCurve(dg.H)] * 6), 16) == 0
    assert dg.pullback_canonical_square(dg.p2([dg.BranchCurve(dg.H)] * 8), 16) == 16
    with pytest.raises(ValueError):
        dg.pullback_canonical_square(dg.p2([dg.BranchCurve((1, 0))]), 16)


def test_type0_matches_cover_invariants(tilings_3_8):
    dt = dg.classify_tiling(tilings_3_8[0].tiling)
    smooth = invariants.cover_invariants(cover.persson_building_data())
    got = dg.component_invariants(dt.components[0])
    assert (got["K2"], got["chiO"], got["pg"], got["q"]) == (smooth.K2, smooth.chiO, smooth.pg, smooth.q)


def test_intersection_forms():
    for c in (dg.p2(), dg.f1(), dg.p1xp1()):
        M = c.intersection
        assert all(M[i][j] == M[j][i] for i in range(len(M)) for j in range(len(M)))
    f = dg.f1()
    assert f.dot(dg.SPLUS, dg.SPLUS) == 1 and f.dot(dg.SMINUS, dg.SMINUS) == -1
    # adjunction: K.C + C^2 = -2 for the rational curves F, s-, s+
    for C in (dg.FIB, dg.SMINUS, dg.SPLUS):
        assert f.dot(f.canonical, C) + f.dot(C, C) == -2


def test_gluing_degrees_agree(tilings_3_8):
    for c in tilings_3_8[1:]:
        pairs = dg.gluing_check(dg.classify_tiling(c.tiling))
        assert pairs and all(a == b == HALF for a, b in pairs)


def test_type_i_profile(tilings_3_8):
    prof = dg.component_cover_profile(dg.classify_tiling(tilings_3_8[1].tiling))
    assert [p["coverKind"] for p in prof] == ["K3", "elliptic"]
    assert prof[0]["singularities"] == prof[1]["singularities"] == [{"type": "A1", "count": 8}]
    assert (prof[1]["pg"], prof[1]["h11"]) == (2, 22)
    assert all(p["K2"] == 0 for p in prof)


def test_type_i_profile_is_label_independent():
    seen = set()
    for I in combinations(range(1, 9), 3):
        prof = dg.component_cover_profile(dg.classify_tiling(_type_i(I)))
        seen.add(tuple((p["coverKind"], p["chiO"], p["pg"], p["q"], p["h11"]) for p in prof))
    assert seen == {(("K3", 2, 1, 0, 20), ("elliptic", 2, 2, 1, 22))}


def test_type_ii_outer_profile(tilings_3_8):
    prof = dg.component_cover_profile(dg.classify_tiling(tilings_3_8[2].tiling))
    for p in (prof[0], prof[2]):
        assert p["coverKind"] == "K3" and p["singularities"] == [{"type": "A3", "count": 4}]
    assert all(p["K2"] == 0 for p in prof)


def test_type_ii_middle_invariants(tilings_3_8):
    dt = dg.classify_tiling(tilings_3_8[2].tiling)
    got = dg.component_invariants(dt.components[1])
    assert (got["chiO"], got["K2"]) == (2, 0)


def test_type_ii_orbit_splits_by_labels():
    # frozen from the eigensheaf computation over all 280 tilings of the orbit
    kinds = Counter()
    for I in combinations(range(1, 9), 3):
        for J in combinations(sorted(EVERY - set(I)), 3):
            if I < J:
                prof = dg.component_cover_profile(dg.classify_tiling(_type_ii(I, J)))
                kinds[tuple(p["coverKind"] for p in prof)] += 1
    assert kinds == {("K3", "K3", "K3"): 168, ("K3", "abelian", "K3"): 112}


def test_non_generic_profile_rejected(tilings_3_8):
    with pytest.raises(ValueError):
        dg.component_cover_profile(dg.classify_tiling(tilings_3_8[0].tiling), generic=False)


def test_singular_point_counts():
    g, h = (1, 0, 0, 0), (1, 1, 0, 0)
    assert dg.singular_point_count(16, [g, g]) == 8
    assert dg.singular_point_count(16, [g, h, g]) == 4


def test_relation_classes():
    assert dg.relation_class([(1, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1), (1, 0, 0, 0)]) == dg.LENGTH4
    assert dg.relation_class([(1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1), (1, 0, 0, 0)]) == dg.NO_RELATION
    assert dg.relation_class([(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)]) == dg.LENGTH3


def test_no_length_three_among_persson_labels():
    labels = gf.persson_labels()
    for triple in combinations(labels, 3):
        assert dg.local_singularity_class(triple).relation_class != dg.LENGTH3
    for k in (2, 4):
        for sub in combinations(labels, k):
            assert dg.relation_class(sub) != dg.LENGTH3


def test_local_singularity_table():
    quad = [(1, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1), (1, 0, 0, 0)]
    d = dg.local_singularity_class(quad)
    assert d.relation_class == dg.LENGTH4 and d.table_labels and d.status == "candidates"
    t = dg.local_singularity_class(quad[:3], degeneration=dg.TYPE_II, locus="triple")
    assert t.table_labels == ["3.2", "3'.3"]
    u = dg.local_singularity_class(quad[:2], degeneration=dg.TYPE_I, locus="triple")
    assert u.status == "unresolved" and u.table_labels == []
    assert d.to_json()["labels"] == ["1110", "1101", "1011", "1000"]
    with pytest.raises(ValueError):
        dg.local_singularity_class(quad + [(1, 1, 1, 1)])
    with pytest.raises(ValueError):
        dg.local_singularity_class(quad[:1])
