from math import prod

import pytest
from hypothesis import given, strategies as st

from persson_moduli import gf2core as gf

PERSSON = gf.persson_labels()


@pytest.fixture(scope="module")
def stabilizer():
    return gf.stabilizer_of_label_set(PERSSON)


def test_pairing_values():
    assert gf.pairing((1, 0, 1, 1), (1, 1, 1, 0)) == 1
    assert gf.pairing((1, 0, 0, 0), (1, 1, 1, 0)) == -1
    with pytest.raises(ValueError):
        gf.dot((1, 0), (1, 0, 0))


def test_rank_and_span():
    assert gf.rank([(1, 1, 0), (0, 1, 1), (1, 0, 1)]) == 2
    assert len(gf.span([(1, 0, 0), (0, 1, 0)])) == 4


@pytest.mark.parametrize("m,r", [(4, 1), (4, 2), (4, 3), (5, 2)])
def test_subgroup_counts_match_gaussian_binomial(m, r):
    subs = gf.enumerate_subgroups(m, r)
    assert len(subs) == gf.gaussian_binomial(m, r)
    assert len({frozenset(s.elements()) for s in subs}) == len(subs)


def test_gaussian_binomial_values():
    # number of lines through the origin of F2^4, planes of F2^4
    assert gf.gaussian_binomial(4, 1) == 15
    assert gf.gaussian_binomial(4, 2) == 35


def test_stabilizer_order_and_structure(stabilizer):
    # |AGL(3, 2)| = 8 * 168
    assert stabilizer.order == 8 * prod(2 ** 3 - 2 ** i for i in range(3)) == 1344
    facts = gf.verify_affine_structure(stabilizer, PERSSON)
    assert facts["ok"], facts


def test_stabilizer_rejects_bad_sets():
    with pytest.raises(gf.LabelSetError):
        gf.stabilizer_of_label_set([])
    with pytest.raises(gf.LabelSetError):
        gf.stabilizer_of_label_set([(0, 1, 0, 0)])


def test_pair_partitions(stabilizer):
    parts = gf.partitions_into_parallel_pairs(PERSSON)
    assert len(parts) == 7
    for part in parts:
        assert len(part.pairs) == 4
        assert all(gf.add(a, b) == part.difference for a, b in part.pairs)
    stab = gf.stabilizer_of_partition(parts[0], stabilizer)
    assert stab["order"] == 192 and stab["facts"]["ok"]
    assert stabilizer.order == stab["order"] * len(parts)
    assert len(gf.partition_orbits(stabilizer, parts)) == 1


def test_lift_count():
    assert gf.label_lift_count(PERSSON) == 112


def test_torelli_index(stabilizer):
    assert gf.torelli_index(PERSSON, group=stabilizer) == 2
    for part in gf.partitions_into_parallel_pairs(PERSSON):
        assert gf.torelli_index(PERSSON, part=part, group=stabilizer) == 2


def test_identity_is_induced(stabilizer):
    assert gf.is_induced_by_stabilizer(tuple(range(8)), PERSSON, stabilizer)


@given(st.lists(st.tuples(*[st.integers(0, 1)] * 4), min_size=1, max_size=6))
def test_rref_is_idempotent_and_rank_preserving(rows):
    r = gf.rref(rows)
    assert gf.rref(r) == r
    assert gf.span(r, 4) == gf.span([tuple(x) for x in rows], 4)
