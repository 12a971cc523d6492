from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatradon.lattice import IntegerLattice, hermite_rows, integer_kernel, lattice_membership, xgcd


def test_xgcd_identity():
    for a, b in [(12, 18), (-7, 5), (0, 4), (9, 0), (-6, -4)]:
        g, x, y = xgcd(a, b)
        assert g >= 0 and x * a + y * b == g


def test_hermite_transform_is_consistent():
    rows = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    h, piv, u = hermite_rows(rows)
    prod_rows = [[sum(u[i][k] * rows[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert prod_rows[: len(h)] == h
    assert all(all(x == 0 for x in r) for r in prod_rows[len(h):])
    for r, c in enumerate(piv):
        assert h[r][c] > 0
        assert all(0 <= h[i][c] < h[r][c] for i in range(r))


def test_integer_kernel_relations():
    rows = [[1, 2], [2, 4], [3, 6]]
    for rel in integer_kernel(rows):
        assert [sum(c * r[j] for c, r in zip(rel, rows)) for j in range(2)] == [0, 0]
    assert len(integer_kernel(rows)) == 2


def test_membership_examples():
    alpha = (1, -1)
    two_root = IntegerLattice.spanned_by([(2, -2)])
    assert lattice_membership(two_root, (0, 0))
    assert not lattice_membership(two_root, alpha)
    assert lattice_membership(two_root, (2, -2))


def test_dimension_mismatch():
    lat = IntegerLattice.spanned_by([(1, 0)])
    with pytest.raises(ValueError):
        lat.contains((1, 0, 0))


def test_coordinates_and_residue():
    lat = IntegerLattice.spanned_by([(Fraction(1, 2), 0), (0, 3), (1, 3)])
    c = lat.coordinates((Fraction(3, 2), 6))
    assert c is not None
    recon = tuple(sum(ci * g[j] for ci, g in zip(c, lat.generators)) for j in range(2))
    assert recon == (Fraction(3, 2), 6)
    assert lat.coordinates((0, 1)) is None
    assert lat.residue((0, 1)) == (0, 1)


def test_generating_set_invariance():
    a = IntegerLattice.spanned_by([(1, 1, 0), (0, 2, 2)])
    b = IntegerLattice.spanned_by([(1, 3, 2), (1, 1, 0), (-1, 1, 2)])
    assert a.same_as(b)
    for v in product(range(-2, 3), repeat=3):
        assert (v in a) == (v in b)


def test_index_and_intersection():
    big = IntegerLattice.spanned_by([(1, 0), (0, 1)])
    small = IntegerLattice.spanned_by([(2, 0), (0, 3)])
    assert small.index_in(big) == 6
    inter = IntegerLattice.spanned_by([(2, 0), (0, 1)]).intersect(IntegerLattice.spanned_by([(1, 0), (0, 2)]))
    assert inter.same_as(IntegerLattice.spanned_by([(2, 0), (0, 2)]))


small_int = st.integers(min_value=-4, max_value=4)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=3).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.lists(small_int, min_size=n, max_size=n), min_size=1, max_size=n))))
def test_membership_matches_brute_force(data):
    n, gens = data
    lat = IntegerLattice.spanned_by(gens, n)
    for g in gens:
        assert g in lat
    reachable = set()
    for coeffs in product(range(-5, 6), repeat=len(gens)):
        reachable.add(tuple(sum(c * g[j] for c, g in zip(coeffs, gens)) for j in range(n)))
    for v in reachable:
        assert v in lat
    # every box point is either reachable with explicit integer coordinates or outside
    for v in product(range(-3, 4), repeat=n):
        c = lat.coordinates(v)
        if c is None:
            assert v not in reachable
        else:
            assert tuple(sum(ci * g[j] for ci, g in zip(c, lat.generators)) for j in range(n)) == v
