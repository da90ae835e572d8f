from fractions import Fraction

import pytest

from persson_moduli import hull, polytope

from oracles import eulerian


def _hypersimplex_rows(d, n, b):
    return polytope._region_rows(d, n, b, [])


@pytest.mark.parametrize("d,n", [(1, 3), (2, 4), (2, 5), (3, 6), (3, 7)])
def test_hypersimplex_volume_is_eulerian(d, n):
    assert polytope.region_volume(d, n, (Fraction(1),) * n, []) == eulerian(n - 1, d - 1)


def test_half_cut_volume():
    b = (Fraction(1, 2),) * 8
    # the half cut of Delta(3, 8) is Delta(6, 8) scaled by one half
    assert polytope.region_volume(3, 8, b, []) == Fraction(eulerian(7, 5), 2 ** 7) == Fraction(15, 16)


def test_unit_square_and_simplex():
    square = ([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 0, 1, 0])
    assert sorted(hull.vertices(*square)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert hull.volume(*square) == 2
    simplex = ([[-1, 0, 0], [0, -1, 0], [0, 0, -1], [1, 1, 1]], [0, 0, 0, 1])
    assert hull.volume(*simplex) == 1


def test_empty_and_flat():
    assert hull.vertices([[1], [-1]], [0, -1]) == []
    assert hull.volume([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, 0, 1, 0]) == 0
    assert hull.affine_dim([(0, 0), (1, 1), (2, 2)]) == 1
