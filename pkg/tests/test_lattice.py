import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from tormap import lattice as lat
from tormap.reproduce import brute_force_sublattice_count, random_unimodular
from tormap.tilings import D4, D6


def points(m, r=20):
    (a, c), (b, d) = lat.as_matrix(m)
    return {(x * a + y * c, x * b + y * d) for x in range(-r, r + 1) for y in range(-r, r + 1)}


def in_window(pts, w=6):
    return {p for p in pts if abs(p[0]) <= w and abs(p[1]) <= w}


nonsingular = st.tuples(*[st.integers(-12, 12)] * 4).filter(lambda t: t[0] * t[3] - t[1] * t[2] != 0)


def test_det_examples():
    assert lat.det(((1, 0), (0, 1))) == 1
    assert lat.det(((5, 0), (0, 3))) == 15
    assert lat.det(((3, 1), (0, 2))) == 6


def test_hnf_examples():
    assert lat.hnf(((2, 0), (0, 1))).matrix == ((2, 0), (0, 1))
    assert lat.hnf(((2, 1), (1, 1))).matrix == ((1, 0), (0, 1))
    h, u = lat.hnf_with_transform(((3, 1), (0, 2)))
    assert h.matrix == ((1, 0), (2, 6))
    assert lat.matmul(((3, 1), (0, 2)), u) == h.matrix
    assert abs(lat.det(u)) == 1


def test_hnf_matches_point_set_oracle():
    m = ((3, 1), (0, 2))
    assert in_window(points(m)) == in_window(points(lat.hnf(m)))


def test_singular_rejected():
    with pytest.raises(lat.SingularLatticeError):
        lat.hnf(((2, 4), (1, 2)))


def test_serialization_round_trip():
    m = lat.parse_matrix("3,1,0,2")
    assert m == ((3, 1), (0, 2))
    assert lat.format_matrix(m) == "3,1,0,2"
    with pytest.raises(lat.LatticeError):
        lat.parse_matrix("1,2,3")
    with pytest.raises(lat.LatticeError):
        lat.parse_matrix("1,2,x,4")


@given(nonsingular)
@settings(max_examples=200, deadline=None)
def test_hnf_properties(t):
    m = lat.as_matrix(t)
    h, u = lat.hnf_with_transform(m)
    assert lat.hnf(h.matrix) == h  # idempotent
    assert h.index == abs(lat.det(m))
    assert lat.matmul(m, u) == h.matrix and abs(lat.det(u)) == 1
    assert 0 <= h.sub_b < h.diag_d


@given(nonsingular, st.integers(0, 2**32))
@settings(max_examples=200, deadline=None)
def test_hnf_invariant_under_unimodular(t, seed):
    m = lat.as_matrix(t)
    u = random_unimodular(random.Random(seed))
    assert lat.hnf(lat.matmul(m, u)) == lat.hnf(m)


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 3), (6, 12)])
def test_sublattice_examples(n, expected):
    forms = lat.sublattices_of_index(n)
    assert len(forms) == expected
    if n == 2:
        assert [str(h) for h in forms] == ["2,0,0,1", "1,0,0,2", "1,0,1,2"]


def test_sublattices_sorted_and_distinct():
    for n in range(1, 30):
        forms = lat.sublattices_of_index(n)
        keys = [(h.diag_d, h.sub_b) for h in forms]
        assert keys == sorted(keys) and len(set(forms)) == len(forms)


@pytest.mark.parametrize("n", range(1, 9))
def test_sigma_brute_force_small(n):
    assert len(lat.sublattices_of_index(n)) == brute_force_sublattice_count(n)


def test_sigma_upper_triangular_oracle_to_64():
    # independent enumeration by row-style (upper triangular) bases
    for n in range(1, 65):
        ups = set()
        for a in range(1, n + 1):
            if n % a:
                continue
            d = n // a
            for c in range(a):
                ups.add(lat.hnf(((a, c), (0, d))))
        assert ups == set(lat.sublattices_of_index(n))
        assert len(ups) == lat.divisor_sum(n)


def test_containment_and_index():
    i = ((1, 0), (0, 1))
    k = ((5, 0), (0, 3))
    assert lat.is_sublattice(k, k) and lat.quotient_index(k, k) == 1
    assert lat.is_sublattice(k, i) and lat.quotient_index(i, k) == 15
    assert not lat.is_sublattice(((1, 0), (0, 2)), ((2, 0), (0, 2)))
    with pytest.raises(lat.NotSublatticeError):
        lat.quotient_index(((2, 0), (0, 2)), ((1, 0), (0, 2)))


def test_canonical_examples():
    m = ((3, 1), (0, 2))
    assert lat.canonical_under_pointgroup(m, [((1, 0), (0, 1))]) == lat.hnf(m)
    assert lat.canonical_under_pointgroup(((2, 0), (0, 1)), D4) == lat.canonical_under_pointgroup(
        ((1, 0), (0, 2)), D4
    )


def test_canonical_merge_witness():
    # M1 = A M2 B with A a rotation and B unimodular, found by search
    m1, m2 = ((2, 0), (0, 1)), ((1, 0), (0, 2))
    found = [
        (a, b)
        for a in D4
        for b in (((p, q), (r, s)) for p, q, r, s in itertools.product(range(-1, 2), repeat=4))
        if abs(lat.det(b)) == 1 and lat.matmul(lat.matmul(a, m2), b) == m1
    ]
    assert found


@given(nonsingular, st.sampled_from(["D4", "D6"]), st.integers(0, 11))
@settings(max_examples=200, deadline=None)
def test_canonical_constant_on_orbits(t, gname, i):
    g = D4 if gname == "D4" else D6
    m = lat.as_matrix(t)
    a = g[i % len(g)]
    c = lat.canonical_under_pointgroup(m, g)
    assert c == lat.canonical_under_pointgroup(lat.matmul(a, m), g)
    assert lat.canonical_under_pointgroup(c.matrix, g) == c
    assert c.index == abs(lat.det(m))


@pytest.mark.parametrize("n,expected", [(1, 1), (4, 7), (12, 28)])
def test_paper_cover_classes(n, expected):
    assert len(lat.paper_cover_classes(n)) == expected


def test_intersection_and_invariance():
    k = ((5, 0), (0, 3))
    inter = lat.intersection([k, ((3, 0), (0, 5))])
    assert inter.matrix == ((15, 0), (0, 15))
    assert lat.is_invariant(inter.matrix, ((0, 1), (1, 0)))
    assert not lat.is_invariant(k, ((0, 1), (1, 0)))


def test_generate_group_orders():
    assert len(D6) == 12 and len(D4) == 8
    assert ((-1, 0), (0, -1)) in D6 and ((-1, 0), (0, -1)) in D4
