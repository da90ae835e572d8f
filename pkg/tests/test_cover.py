from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from persson_moduli import cover, gf2core as gf


def test_persson_degrees():
    data = cover.persson_building_data()
    assert Counter(data.bundles.values()) == {4: 1, 2: 14, 0: 1}
    assert data.bundles[(1, 0, 0, 0)] == 4


def test_zl_degrees():
    data = cover.zl_building_data()
    assert Counter(data.bundles.values()) == {4: 1, 3: 4, 2: 22, 1: 4, 0: 1}


def test_half_integral_degree_rejected():
    with pytest.raises(cover.HalfIntegralDegree):
        cover.solve_line_bundles(cover.BranchData.from_labels(["100", "010"]))


def test_branch_data_validation():
    with pytest.raises(ValueError):
        cover.BranchData.from_labels(["000", "100"])
    with pytest.raises(ValueError):
        cover.persson_building_data(line_ids=[1, 2, 3])


def test_building_data_json_round_trip():
    data = cover.zl_building_data()
    again = cover.BuildingData.from_json(data.to_json())
    assert again.to_json() == data.to_json()


def test_inconsistent_bundles_rejected():
    obj = cover.persson_building_data().to_json()
    obj["bundles"]["1000"] = 3
    with pytest.raises(ValueError):
        cover.BuildingData.from_json(obj)


def test_all_lifts_are_distinct_and_counted():
    data = cover.persson_building_data()
    lifts = cover.all_lifts(data)
    assert len(lifts) == 112
    keys = {tuple(ln.label for ln in lifted.branch.lines) for _, _, lifted in lifts}
    assert len(keys) == 112
    for part, _, lifted in lifts:
        assert cover.degree_three_partition(lifted) == sorted(part.pairs)


def test_restriction_recovers_persson():
    lifted = cover.zl_building_data()
    assert cover.restrict_to_first(lifted, 4).bundles == cover.persson_building_data().bundles


def test_persson_census():
    counts = cover.intermediate_census(cover.persson_building_data())
    assert counts[cover.CAMPEDELLI] == 8
    assert counts[cover.ENRIQUES] == 28
    assert counts[cover.DEL_PEZZO_2] == 14
    assert counts[cover.HORIKAWA] == 1


def test_zl_double_planes():
    data = cover.zl_building_data()
    counts = cover.intermediate_census(data, ranks=(1,))
    assert counts[cover.K3_DOUBLE] == 4
    assert counts[cover.PLANE_112] == 4
    for chi, d in data.bundles.items():
        if d == 3:
            assert data.branch.branch_degree(chi) == 6


def _even_labels(m, labels):
    # appending the sum of all labels makes every branch degree even
    total = gf.zero(m)
    for g in labels:
        total = gf.add(total, g)
    return labels + ([total] if any(total) else [])


label_lists = st.integers(1, 5).flatmap(
    lambda m: st.tuples(st.just(m), st.lists(st.tuples(*[st.integers(0, 1)] * m).filter(any),
                                             min_size=1, max_size=9)))


@settings(max_examples=80, deadline=None)
@given(label_lists)
def test_fundamental_relation(case):
    m, labels = case
    data = cover.solve_line_bundles(cover.BranchData.from_labels(_even_labels(m, labels)))
    assert cover.fundamental_relation_holds(data)


@pytest.mark.parametrize("data", [cover.persson_building_data(), cover.zl_building_data()],
                         ids=["persson", "lifted"])
def test_fundamental_relation_on_named_data(data):
    assert cover.fundamental_relation_holds(data)
