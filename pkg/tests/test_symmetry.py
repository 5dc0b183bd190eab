import numpy as np
import pytest

from tormap import kernels
from tormap.symmetry import (
    automorphism_group,
    automorphisms,
    edge_orbit_count,
    find_isomorphism,
    flag_invariants,
    is_edge_transitive,
    map_isomorphic,
    orbit_report,
)
from tormap.torusmap import dual_map, flag_system, quotient

import oracles


def test_square_3x3(square3):
    rep = orbit_report(square3)
    assert rep.aut_order == 72
    assert rep.edge_orbit_count == 1
    assert is_edge_transitive(square3)


def test_square_3x3_oracle(square3):
    assert oracles.edge_orbit_count(square3) == (72, 1)


def test_sharpness_witness(tri53):
    rep = edge_orbit_count(tri53)
    assert rep.aut_order == 30 and rep.edge_orbit_count == 3
    assert not is_edge_transitive(tri53)
    assert oracles.edge_orbit_count(tri53) == (30, 3)


def test_t5_square():
    m = quotient("4^4", ((5, 0), (0, 3)))
    assert orbit_report(m).edge_orbit_count == 2
    assert oracles.edge_orbit_count(m)[1] == 2


@pytest.mark.parametrize(
    "tag,k",
    [("3^4.6", ((2, 0), (1, 2))), ("3^3.4^2", ((3, 0), (0, 2))), ("4.8^2", ((2, 0), (1, 3))),
     ("3.4.6.4", ((2, 0), (0, 2))), ("3^2.4.3.4", ((2, 0), (1, 2))), ("rhombille", ((3, 0), (1, 3)))],
)
def test_against_vertex_oracle(tag, k):
    m = quotient(tag, k)
    assert m.polyhedral
    rep = orbit_report(m)
    assert (rep.aut_order, rep.edge_orbit_count) == oracles.edge_orbit_count(m)


def test_group_structure(square3):
    autos = automorphisms(square3)
    assert len(autos) == 72
    ident = [a for a in autos if a.is_identity()]
    assert len(ident) == 1
    group = set(autos)
    fs = flag_system(square3)
    for a in autos[:12]:
        assert a.inverse() in group
        for b in autos[:12]:
            assert a.compose(b) in group
        for s in (fs.s0, fs.s1, fs.s2):
            assert np.array_equal(a.flag_perm[s], s[a.flag_perm])
        if not a.is_identity():
            assert np.all(a.flag_perm != np.arange(fs.size))  # free action


def test_partitions_sorted(tri53):
    rep = orbit_report(tri53)
    for part in (rep.vertex_orbits, rep.edge_orbits, rep.face_orbits):
        assert [p[0] for p in part] == sorted(p[0] for p in part)
        assert all(p == sorted(p) for p in part)
        assert sorted(x for p in part for x in p) == list(range(sum(map(len, part))))
    assert [p[0] for p in rep.edge_orbits] == [0, 15, 30]


def test_isomorphism_examples(square3):
    assert map_isomorphic(square3, square3)
    assert map_isomorphic(square3, dual_map(dual_map(square3)))
    a = quotient("4^4", ((6, 0), (0, 3)))
    b = quotient("4^4", ((3, 0), (0, 6)))
    assert map_isomorphic(a, b)
    c = quotient("4^4", ((3, 0), (1, 6)))
    assert map_isomorphic(a, c) == map_isomorphic(c, a)
    assert not map_isomorphic(a, quotient("4^4", ((9, 0), (0, 2))))


def test_isomorphism_is_flag_bijection():
    a = quotient("3.12^2", ((2, 0), (1, 3)))
    b = quotient("3.12^2", ((3, 1), (2, 1)))  # same lattice family after relabeling?
    phi = find_isomorphism(a, a)
    fa = flag_system(a)
    assert phi is not None and np.array_equal(np.sort(phi), np.arange(fa.size))
    if map_isomorphic(a, b):
        psi = find_isomorphism(a, b)
        fb = flag_system(b)
        for s, t in ((fa.s0, fb.s0), (fa.s1, fb.s1), (fa.s2, fb.s2)):
            assert np.array_equal(psi[s], t[psi])


def test_orbit_counts_are_isomorphism_invariants():
    a = quotient("4^4", ((6, 0), (0, 3)))
    b = quotient("4^4", ((3, 0), (0, 6)))
    ra, rb = orbit_report(a), orbit_report(b)
    assert (ra.aut_order, ra.edge_orbit_count) == (rb.aut_order, rb.edge_orbit_count)


def test_translations_divide_order():
    for k in (((5, 0), (0, 3)), ((4, 0), (1, 4)), ((2, 0), (1, 3))):
        for tag in ("3^6", "4.8^2", "3^4.6"):
            m = quotient(tag, k)
            assert automorphism_group(m).order % m.index == 0


def test_invariants_are_preserved(square3):
    fs = flag_system(square3)
    inv = flag_invariants(fs)
    for a in automorphisms(square3)[:10]:
        assert np.array_equal(inv[a.flag_perm], inv)


def test_thread_count_does_not_change_output():
    m = quotient("4.6.12", ((2, 0), (1, 2)))
    kernels.set_threads(1)
    a = orbit_report(m)
    kernels.set_threads(4)
    b = orbit_report(m)
    assert a == b


def test_dual_invariance_of_orbits():
    for tag in ("3^6", "4^4", "3.6.3.6"):
        m = quotient(tag, ((4, 0), (1, 3)))
        assert orbit_report(m).edge_orbit_count == orbit_report(dual_map(m)).edge_orbit_count
        assert orbit_report(m).aut_order == orbit_report(dual_map(m)).aut_order


def test_degenerate_maps_are_total():
    m = quotient("4^4", ((1, 0), (0, 1)))
    rep = orbit_report(m)
    assert rep.aut_order == 8 and rep.edge_orbit_count == 1
