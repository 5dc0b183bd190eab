import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tormap import covers as cv
from tormap import lattice as lat
from tormap.symmetry import map_isomorphic, orbit_report
from tormap.tilings import UnsupportedTilingError
from tormap.torusmap import quotient


def test_covers_of_count(square3):
    for n in range(1, 7):
        descs = cv.covers_of(square3, n)
        assert len(descs) == lat.divisor_sum(n)
        assert len({d.hnf_in_K for d in descs}) == len(descs)
        assert all(d.sheets == n for d in descs)


def test_sheet_formula(tri53):
    for d in cv.covers_of(tri53, 4):
        assert abs(lat.det(d.cover_lattice)) == 4 * abs(lat.det(tri53.lattice))
        assert lat.is_sublattice(d.cover_lattice, tri53.lattice)
        assert d.realize().counts == tuple(4 * c for c in tri53.counts)


def test_descriptor_rejects_bad_lattice(square3):
    with pytest.raises(lat.NotSublatticeError):
        cv.CoverDescriptor(square3.lattice, ((1, 0), (0, 1)), 1, lat.HermiteForm(1, 0, 1), square3.tiling)


@pytest.mark.parametrize("n", range(1, 11))
def test_stretch_cover(square3, n):
    d = cv.stretch_cover(square3, n)
    assert d.sheets == n
    assert d.cover_lattice == ((3 * n, 0), (0, 3))
    vmap = cv.projection(d)[0]
    assert np.all(np.bincount(vmap, minlength=9) == n)


def test_stretch_cover_rejects_zero(square3):
    with pytest.raises(ValueError):
        cv.stretch_cover(square3, 0)


@given(st.sampled_from(["3^6", "4^4", "3.4.6.4", "4.8^2"]), st.integers(1, 6),
       st.integers(0, 5), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_projection_is_covering(tag, a, b, d):
    x = quotient(tag, ((2, 0), (1, 2)))
    n = a * d
    h = lat.HermiteForm(a, b % d, d)
    assert cv.check_covering(cv.cover_from_hnf(x, h))
    assert h.index == n


def test_symmetric_cover_sheets():
    x = quotient("3^6", ((2, 0), (1, 3)))
    d = cv.symmetric_cover(x)
    assert d.sheets == 36 and d.cover_lattice == ((12, 0), (6, 18))
    y = quotient("3^6", ((5, 0), (0, 3)))
    assert cv.symmetric_cover(y).sheets == 225


@pytest.mark.xfail(strict=True, reason="mK is not fixed by the enlarged point group")
def test_paper_cover_lattice_is_invariant():
    x = quotient("3^6", ((2, 0), (1, 3)))
    d = cv.symmetric_cover(x, "scaled")
    assert all(lat.is_invariant(d.cover_lattice, a) for a in cv.enlarged_group("3^6"))


@pytest.mark.parametrize("k", [((2, 0), (1, 3)), ((5, 0), (0, 3)), ((4, 0), (1, 4))])
def test_invariant_cover_lattice_is_invariant(k):
    x = quotient("3^6", k)
    d = cv.symmetric_cover(x, "invariant")
    assert all(lat.is_invariant(d.cover_lattice, a) for a in cv.enlarged_group("3^6"))
    assert lat.is_sublattice(d.cover_lattice, x.lattice)


def test_invariant_cover_reduces_orbits():
    x = quotient("3^6", ((5, 0), (0, 3)))
    d = cv.symmetric_cover(x, "invariant")
    assert d.sheets == 15
    assert d.edge_orbits() <= cv.symmetric_cover_target("3^6")


def test_symmetric_cover_stages():
    x = quotient("4.8^2", ((2, 0), (1, 2)))
    d1 = cv.symmetric_cover(x, "invariant", stage=1)
    d2 = cv.symmetric_cover(x, "invariant", stage=2)
    assert lat.is_sublattice(d2.cover_lattice, d1.cover_lattice)
    with pytest.raises(UnsupportedTilingError):
        cv.symmetric_cover(quotient("3^6", ((3, 0), (0, 3))), stage=2)
    with pytest.raises(UnsupportedTilingError):
        cv.symmetric_cover(quotient("3^3.4^2", ((3, 0), (0, 3))))


def test_minimal_cover(tri53):
    d, n = cv.minimal_k_orbital_cover(tri53, 1, 16)
    assert n == 15 and str(d.hnf_in_K) == "3,0,0,5"
    assert d.edge_orbits() == 1
    # nothing with fewer sheets works
    for m in range(1, 15):
        assert all(c.edge_orbits() != 1 for c in cv.covers_of(tri53, m))


def test_minimal_cover_trivial(square3):
    d, n = cv.minimal_k_orbital_cover(square3, 1, 3)
    assert n == 1 and d.cover_lattice == square3.lattice


def test_minimal_cover_not_found(tri53):
    with pytest.raises(cv.CoverNotFoundError):
        cv.minimal_k_orbital_cover(tri53, 1, 4)
    with pytest.raises(ValueError):
        cv.minimal_k_orbital_cover(tri53, 0, 4)


def test_classify(square3):
    cl = cv.classify_covers(square3, 2)
    assert len(cl.paper_classes) == 3
    merged = [sorted(str(d.hnf_in_K) for d in g) for g in cl.merged_classes]
    assert sorted(merged) == [["1,0,0,2", "2,0,0,1"], ["1,0,1,2"]]
    for g in cl.merged_classes:
        for d in g[1:]:
            assert map_isomorphic(g[0].realize(), d.realize())


def test_classes_partition(tri53):
    cl = cv.classify_covers(tri53, 3)
    flat = [d for g in cl.merged_classes for d in g]
    assert sorted(flat, key=lambda d: d.hnf_in_K) == sorted(cl.paper_classes, key=lambda d: d.hnf_in_K)
    assert len(cl.merged_classes) <= lat.divisor_sum(3)


def test_orbit_monotone_rows(square3):
    rows = cv.orbit_monotone(square3, 2)
    assert len(rows) == 3
    assert all(base == orbit_report(square3).edge_orbit_count for _, _, base in rows)
    # 2-sheeted covers of the 3x3 square map are not all edge-transitive
    assert sorted(k for _, k, _ in rows) == [1, 2, 2]


def test_to_dict(square3):
    d = cv.stretch_cover(square3, 2)
    assert d.to_dict(1) == {
        "tiling": "4^4", "base_lattice": [3, 0, 0, 3], "lattice": [6, 0, 0, 3],
        "hnf_in_K": [2, 0, 0, 1], "sheets": 2, "method": "stretch", "edge_orbits": 1,
    }
