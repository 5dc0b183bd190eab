"""Automorphism groups, edge orbits and isomorphism of toroidal maps.

An automorphism is a flag permutation commuting with ``s0, s1, s2``; it is
fixed by the image of a single base flag, so the search tries every
plausible image and propagates along a BFS tree of the flag graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from . import lattice as lat
from .tilings import AffineSymmetry, PeriodicTiling
from .torusmap import FlagSystem, ToroidalMap, flag_system

MapLike = Union[ToroidalMap, FlagSystem]
BATCH = 64


@dataclass(frozen=True, eq=False)
class Automorphism:
    flag_perm: np.ndarray

    def __call__(self, flag: int) -> int:
        return int(self.flag_perm[flag])

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self`` after ``other``."""
        return Automorphism(self.flag_perm[other.flag_perm])

    def inverse(self) -> "Automorphism":
        inv = np.empty_like(self.flag_perm)
        inv[self.flag_perm] = np.arange(self.flag_perm.shape[0])
        return Automorphism(inv)

    def is_identity(self) -> bool:
        return bool(np.all(self.flag_perm == np.arange(self.flag_perm.shape[0])))

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and np.array_equal(self.flag_perm, other.flag_perm)

    def __hash__(self) -> int:
        return hash(self.flag_perm.tobytes())


@dataclass(frozen=True)
class AutomorphismGroup:
    order: int
    base: int
    generators: tuple[np.ndarray, ...] = field(repr=False)
    base_orbit: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class OrbitReport:
    aut_order: int
    vertex_orbits: list[list[int]]
    edge_orbits: list[list[int]]
    face_orbits: list[list[int]]

    @property
    def edge_orbit_count(self) -> int:
        return len(self.edge_orbits)

    def to_dict(self, full: bool = False) -> dict:
        out = {
            "aut_order": self.aut_order,
            "edge_orbit_count": self.edge_orbit_count,
            "vertex_orbit_count": len(self.vertex_orbits),
            "face_orbit_count": len(self.face_orbits),
            "edge_orbit_representatives": [o[0] for o in self.edge_orbits],
        }
        if full:
            out.update(
                vertex_orbits=self.vertex_orbits,
                edge_orbits=self.edge_orbits,
                face_orbits=self.face_orbits,
            )
        return out


def _flags(m: MapLike) -> FlagSystem:
    return m if isinstance(m, FlagSystem) else flag_system(m)


def flag_invariants(fs: FlagSystem) -> np.ndarray:
    """Per-flag cycle lengths of a few involution words.

    Automorphisms commute with the involutions, so these agree on a flag and
    its image; they only serve to discard hopeless candidates.
    """
    s0, s1, s2 = fs.s0, fs.s1, fs.s2
    words = [
        s0[s1],  # face walk
        s1[s2],  # vertex rotation
        s0[s1[s2]],  # Petrie walk
        s0[s1[s2[s1]]],
        s1[s0[s1[s2]]],
    ]
    cols = [kernels.cycle_lengths(w) for w in words]
    # neighbouring faces and vertices
    cols.append(cols[0][s2])
    cols.append(cols[1][s0])
    return np.stack(cols, axis=1)


def _signature_keys(inv: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(inv).view([("", inv.dtype)] * inv.shape[1]).ravel()


def _components(n: int, perms: Sequence[np.ndarray]) -> np.ndarray:
    if not perms:
        return np.arange(n)
    ids = np.arange(n)
    rows = np.concatenate([ids] * len(perms))
    cols = np.concatenate(list(perms))
    graph = coo_matrix((np.ones(rows.shape[0], dtype=np.int8), (rows, cols)), shape=(n, n))
    return connected_components(graph, directed=False)[1]


def _pick_base(inv: np.ndarray) -> int:
    keys = _signature_keys(inv)
    _, first, counts = np.unique(keys, return_index=True, return_counts=True)
    best = np.lexsort((first, counts))[0]
    return int(first[best])


def automorphism_group(m: MapLike, batch: int = BATCH) -> AutomorphismGroup:
    """Order and a generating set of ``Aut`` via orbit-pruned flag search."""
    fs = _flags(m)
    n = fs.size
    table = fs.table
    inv = flag_invariants(fs)
    base = _pick_base(inv)
    keys = _signature_keys(inv)
    order, parent, gen, bounds = kernels.bfs_tree(table, base)

    # 0 unknown, 1 image of base, -1 rejected
    status = np.where(keys == keys[base], 0, -1).astype(np.int8)
    status[base] = 1
    gens: list[np.ndarray] = []
    labels = np.arange(n)
    failed: list[int] = []
    while True:
        pending = np.flatnonzero(status == 0)
        if pending.size == 0:
            break
        cands = pending[:batch]
        ok, imgs = kernels.extend_batch(table, table, order, parent, gen, bounds, cands)
        grew = False
        for t, c in enumerate(cands):
            if not ok[t]:
                failed.append(int(c))
                continue
            if labels[c] == labels[base]:
                continue
            gens.append(np.array(imgs[t]))
            labels = _components(n, gens)
            grew = True
        status[labels == labels[base]] = 1
        if failed:
            dead = np.isin(labels, labels[np.asarray(failed)])
            status[dead & (status == 0)] = -1
        if grew and failed:
            # one rejected representative per orbit is enough
            fl = np.asarray(failed)
            _, idx = np.unique(labels[fl], return_index=True)
            failed = fl[np.sort(idx)].tolist()
    orbit = np.flatnonzero(labels == labels[base])
    return AutomorphismGroup(int(orbit.size), base, tuple(gens), orbit)


def automorphisms(m: MapLike) -> list[Automorphism]:
    """Every automorphism, ordered by the image of the base flag."""
    fs = _flags(m)
    grp = automorphism_group(fs)
    table = fs.table
    order, parent, gen, bounds = kernels.bfs_tree(table, grp.base)
    out = []
    for i in range(0, grp.base_orbit.size, BATCH):
        cands = grp.base_orbit[i : i + BATCH]
        ok, imgs = kernels.extend_batch(table, table, order, parent, gen, bounds, cands)
        if not ok.all():  # pragma: no cover - would mean the group search is wrong
            raise AssertionError("orbit element failed to extend")
        out.extend(Automorphism(np.array(p)) for p in imgs)
    return out


def _partition(labels: np.ndarray) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels.tolist()):
        groups.setdefault(lab, []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _induced(fs: FlagSystem, cell: np.ndarray, count: int, gens) -> list[list[int]]:
    if not gens:
        return [[i] for i in range(count)]
    rows = np.concatenate([cell] * len(gens))
    cols = np.concatenate([cell[g] for g in gens])
    graph = coo_matrix((np.ones(rows.shape[0], dtype=np.int8), (rows, cols)), shape=(count, count))
    return _partition(connected_components(graph, directed=False)[1])


def orbit_report(m: ToroidalMap, group: Optional[AutomorphismGroup] = None) -> OrbitReport:
    fs = flag_system(m)
    grp = group or automorphism_group(fs)
    v, e, f = m.counts
    return OrbitReport(
        aut_order=grp.order,
        vertex_orbits=_induced(fs, fs.flag_vertex, v, grp.generators),
        edge_orbits=_induced(fs, fs.flag_edge, e, grp.generators),
        face_orbits=_induced(fs, fs.flag_face, f, grp.generators),
    )


def edge_orbit_count(m: ToroidalMap) -> OrbitReport:
    return orbit_report(m)


def is_edge_transitive(m: ToroidalMap) -> bool:
    return orbit_report(m).edge_orbit_count == 1


def find_isomorphism(a: MapLike, b: MapLike) -> Optional[np.ndarray]:
    """A flag bijection from ``a`` to ``b`` commuting with the involutions."""
    fa, fb = _flags(a), _flags(b)
    if fa.size != fb.size:
        return None
    ia, ib = flag_invariants(fa), flag_invariants(fb)
    ka, kb = _signature_keys(ia), _signature_keys(ib)
    if not np.array_equal(np.sort(ka), np.sort(kb)):
        return None
    base = _pick_base(ia)
    order, parent, gen, bounds = kernels.bfs_tree(fa.table, base)
    cands = np.flatnonzero(kb == ka[base])
    for i in range(0, cands.size, BATCH):
        chunk = cands[i : i + BATCH]
        ok, imgs = kernels.extend_batch(fa.table, fb.table, order, parent, gen, bounds, chunk)
        hit = np.flatnonzero(ok)
        if hit.size:
            return np.array(imgs[hit[0]])
    return None


def map_isomorphic(a: MapLike, b: MapLike) -> bool:
    return find_isomorphism(a, b) is not None


# ---------------------------------------------------------------------------
# orbits of the plane symmetry group, seen on a large quotient


def _midpoints(t: PeriodicTiling, n: int) -> dict[tuple[Fraction, Fraction], int]:
    out = {}
    for e, ce in enumerate(t.cell_edges):
        p = t.cell_vertices[ce.v1].coord
        q = t.cell_vertices[ce.v2].coord
        mid = ((p[0] + q[0] + ce.shift[0]) / 2, (p[1] + q[1] + ce.shift[1]) / 2)
        for x in range(n):
            for y in range(n):
                key = ((mid[0] + x) % n, (mid[1] + y) % n)
                out[key] = len(out)
    return out


def plane_edge_orbits(
    t: PeriodicTiling, n: int = 5, symmetries: Optional[Iterable[AffineSymmetry]] = None
) -> int:
    """Edge orbits of translations plus ``symmetries`` on the ``n*I`` quotient.

    Edges are keyed by their midpoints modulo ``n``, so the count is exact as
    soon as ``n`` is large enough to separate edges (``n >= 3`` for all tags).
    """
    syms = list(t.symmetries if symmetries is None else symmetries)
    syms += [
        AffineSymmetry(((1, 0), (0, 1)), (Fraction(1), Fraction(0))),
        AffineSymmetry(((1, 0), (0, 1)), (Fraction(0), Fraction(1))),
    ]
    mids = _midpoints(t, n)
    keys = list(mids)
    rows, cols = [], []
    for s in syms:
        for i, p in enumerate(keys):
            q = s.apply(p)
            q = (q[0] % n, q[1] % n)
            j = mids.get(q)
            if j is None:
                raise ValueError(f"{t.tag}: symmetry does not preserve the edge set")
            rows.append(i)
            cols.append(j)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(keys),) * 2)
    return int(connected_components(graph, directed=False)[0])


def central_inversion_group(t: PeriodicTiling) -> list[AffineSymmetry]:
    """``<chi>``, the half-turn about the origin."""
    return [AffineSymmetry(((-1, 0), (0, -1)))]


def rotation_subgroup(t: PeriodicTiling) -> list[AffineSymmetry]:
    return [s for s in t.symmetries if lat.det(s.matrix) == 1]
