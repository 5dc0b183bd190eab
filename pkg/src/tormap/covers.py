"""Covers of toroidal maps: enumeration, classification and constructions.

A cover of ``X = E / K`` is ``E / L`` for a full-rank sublattice ``L`` of
``K``.  Writing ``L = K @ H`` with ``H`` in Hermite form enumerates every
cover exactly once.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal, Optional, Sequence

import numpy as np

from . import lattice as lat
from .symmetry import map_isomorphic, orbit_report
from .tilings import (
    EDGE_HOMOGENEOUS,
    PeriodicTiling,
    TilingType,
    UnsupportedTilingError,
    parse_tag,
)
from .torusmap import ToroidalMap, quotient


class CoverNotFoundError(LookupError):
    """No cover within the sheet budget (not a proof of nonexistence)."""


@dataclass(frozen=True)
class CoverDescriptor:
    base_lattice: lat.Matrix
    cover_lattice: lat.Matrix
    sheets: int
    hnf_in_K: lat.HermiteForm
    tiling: PeriodicTiling = field(compare=False, repr=False)
    method: str = "sublattice"

    def __post_init__(self):
        if not lat.is_sublattice(self.cover_lattice, self.base_lattice):
            raise lat.NotSublatticeError("cover lattice is not inside the base lattice")
        if self.sheets * abs(lat.det(self.base_lattice)) != abs(lat.det(self.cover_lattice)):
            raise lat.LatticeError("sheet count disagrees with the index")

    @property
    def tag(self) -> str:
        return self.tiling.tag

    def realize(self) -> ToroidalMap:
        return _realize(self.tiling, self.cover_lattice)

    def base_map(self) -> ToroidalMap:
        return _realize(self.tiling, self.base_lattice)

    def edge_orbits(self) -> int:
        return orbit_report(self.realize()).edge_orbit_count

    def to_dict(self, edge_orbits: Optional[int] = None) -> dict:
        out = {
            "tiling": self.tag,
            "base_lattice": lat.flatten(self.base_lattice),
            "lattice": lat.flatten(self.cover_lattice),
            "hnf_in_K": self.hnf_in_K.flat(),
            "sheets": self.sheets,
            "method": self.method,
        }
        if edge_orbits is not None:
            out["edge_orbits"] = edge_orbits
        return out


@functools.lru_cache(maxsize=512)
def _realize(tiling: PeriodicTiling, lattice: lat.Matrix) -> ToroidalMap:
    return quotient(tiling, lattice)


def _descriptor(x: ToroidalMap, cover: lat.Matrix, method: str) -> CoverDescriptor:
    k = x.lattice
    cu, cv = lat.columns(cover)
    h = lat.lattice_hnf([lat.coordinates_in(k, cu), lat.coordinates_in(k, cv)])
    # report the cover by its HNF in the tiling basis, for stable output
    return CoverDescriptor(
        base_lattice=k,
        cover_lattice=lat.matmul(k, h.matrix),
        sheets=h.index,
        hnf_in_K=h,
        tiling=x.tiling,
        method=method,
    )


def cover_from_hnf(x: ToroidalMap, h: lat.HermiteForm, method: str = "sublattice") -> CoverDescriptor:
    return CoverDescriptor(x.lattice, lat.matmul(x.lattice, h.matrix), h.index, h, x.tiling, method)


def covers_of(x: ToroidalMap, n: int) -> list[CoverDescriptor]:
    """All ``sigma(n)`` covers with ``n`` sheets, ordered by ``(d, b)``."""
    return [cover_from_hnf(x, h) for h in lat.sublattices_of_index(n)]


def stretch_cover(x: ToroidalMap, n: int) -> CoverDescriptor:
    """``L_n = <gamma^n, delta>``."""
    if n < 1:
        raise ValueError("n must be positive")
    return cover_from_hnf(x, lat.HermiteForm(n, 0, 1), method="stretch")


# ---------------------------------------------------------------------------
# symmetric covers

SWAP = ((0, 1), (1, 0))
MINUS_I = ((-1, 0), (0, -1))
REFLECT_OA_SQUARE = ((1, 0), (0, -1))
REFLECT_OA_HEX = ((1, 1), (0, -1))
ROT60 = ((0, -1), (1, 1))
D6 = lat.generate_group([ROT60, ((-1, -1), (0, 1))])
D4 = lat.generate_group([((0, 1), (-1, 0)), ((-1, 0), (0, 1))])

# (linear parts of the enlarged group, target orbit count) per stage
_STAGES: dict[TilingType, list[tuple[list[lat.Matrix], int]]] = {
    TilingType.T3_6: [([MINUS_I, SWAP], 2)],
    TilingType.T6_3: [([MINUS_I, SWAP], 2)],
    TilingType.T3_6_3_6: [([MINUS_I, SWAP], 2)],
    TilingType.RHOMBILLE: [([MINUS_I, SWAP], 2)],
    TilingType.T4_4: [([MINUS_I, SWAP], 1)],
    # through the associated [3^6] map, doubling its target
    TilingType.T3_12_2: [([MINUS_I, SWAP], 4)],
    TilingType.T3_4_6_4: [([MINUS_I, SWAP], 4)],
    TilingType.T3_2_4_3_4: [([MINUS_I, REFLECT_OA_SQUARE], 3)],
    TilingType.T3_4_6: [([MINUS_I, ROT60], 2)],
    TilingType.T4_6_12: [([MINUS_I, REFLECT_OA_HEX], 6), (D6, 3)],
    TilingType.T4_8_2: [([MINUS_I, REFLECT_OA_SQUARE], 3), (D4, 2)],
}


def symmetric_cover_target(tag, stage: int = 1) -> int:
    return _stage(tag, stage)[1]


def enlarged_group(tag, stage: int = 1) -> list[lat.Matrix]:
    return lat.generate_group(_stage(tag, stage)[0])


def _stage(tag, stage: int):
    t = parse_tag(tag)
    if t not in _STAGES:
        raise UnsupportedTilingError(f"no symmetric cover construction for {t}")
    stages = _STAGES[t]
    if not 1 <= stage <= len(stages):
        raise UnsupportedTilingError(f"{t} has {len(stages)} construction stage(s), not {stage}")
    return stages[stage - 1]


def symmetric_cover(
    x: ToroidalMap,
    method: Literal["scaled", "invariant"] = "scaled",
    stage: int = 1,
) -> CoverDescriptor:
    """Orbit-reducing cover.

    ``method="scaled"`` takes ``L = m K`` with ``m = |det K|``, sheets ``m^2``.
    ``method="invariant"`` takes the largest sublattice of ``K`` fixed by the
    enlarged point group, i.e. the intersection of ``A K`` over the group.
    ``stage=2`` applies the construction a second time where one is defined.
    """
    if x.tiling.tag not in {t.value for t in TilingType}:
        raise UnsupportedTilingError(f"no symmetric cover construction for {x.tag}")
    t = parse_tag(x.tag)
    _stage(t, stage)  # validates the tag and stage
    desc = _symmetric_once(x, t, method, 1)
    if stage == 2:
        y = desc.realize()
        inner = _symmetric_once(y, t, method, 2)
        h = lat.lattice_hnf(
            [lat.coordinates_in(x.lattice, c) for c in lat.columns(inner.cover_lattice)]
        )
        desc = cover_from_hnf(x, h, method=f"{method}-stage2")
    return desc


def _symmetric_once(x: ToroidalMap, t: TilingType, method: str, stage: int) -> CoverDescriptor:
    k = x.lattice
    if method == "scaled":
        m = abs(lat.det(k))
        return cover_from_hnf(x, lat.HermiteForm(m, 0, m), method="scaled")
    if method == "invariant":
        group = enlarged_group(t, stage)
        inter = lat.intersection([lat.matmul(a, k) for a in group])
        return _descriptor(x, inter.matrix, "invariant")
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# search and classification


def minimal_k_orbital_cover(
    x: ToroidalMap,
    k: int,
    max_sheets: int,
    orbit_count: Optional[Callable[[ToroidalMap], int]] = None,
) -> tuple[CoverDescriptor, int]:
    """Least-sheet cover with exactly ``k`` edge orbits, ties by HNF order."""
    if k < 1:
        raise ValueError("k must be positive")
    count = orbit_count or (lambda m: orbit_report(m).edge_orbit_count)
    for n in range(1, max_sheets + 1):
        for desc in sorted(covers_of(x, n), key=lambda d: d.hnf_in_K):
            if count(desc.realize()) == k:
                return desc, n
    raise CoverNotFoundError(f"no {k}-orbital cover with at most {max_sheets} sheets")


@dataclass(frozen=True)
class Classification:
    paper_classes: list[CoverDescriptor]
    merged_classes: list[list[CoverDescriptor]]


def classify_covers(x: ToroidalMap, n: int) -> Classification:
    paper = covers_of(x, n)
    groups: list[list[CoverDescriptor]] = []
    keys: list[tuple] = []
    for d in paper:
        m = d.realize()
        rep = orbit_report(m)
        key = (m.counts, rep.aut_order, rep.edge_orbit_count)
        for g, gk in zip(groups, keys):
            if gk == key and map_isomorphic(g[0].realize(), m):
                g.append(d)
                break
        else:
            groups.append([d])
            keys.append(key)
    return Classification(paper, groups)


# ---------------------------------------------------------------------------
# covering projection


def projection(desc: CoverDescriptor) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vertex, edge and face maps from the cover onto the base map."""
    lh = lat.hnf(desc.cover_lattice)
    kh = lat.hnf(desc.base_lattice)
    big, small = lh.index, kh.index
    red = np.array([lat.residue_index(kh, x, y) for x, y in lat.residues(lh)], dtype=np.int64)

    def lift(count: int) -> np.ndarray:
        cells = np.repeat(np.arange(count, dtype=np.int64), big)
        return cells * small + np.tile(red, count)

    v, e, f = desc.tiling.counts
    return lift(v), lift(e), lift(f)


def check_covering(desc: CoverDescriptor) -> bool:
    """The projection is a cellular map and ``sheets``-to-one on every cell class."""
    cover, base = desc.realize(), desc.base_map()
    vmap, emap, fmap = projection(desc)
    for arr, total in ((vmap, base.counts[0]), (emap, base.counts[1]), (fmap, base.counts[2])):
        if not np.array_equal(np.bincount(arr, minlength=total), np.full(total, desc.sheets)):
            return False
    for e, (u, w) in enumerate(cover.edges):
        if base.edges[emap[e]] != (vmap[u], vmap[w]):
            return False
    for f, walk in enumerate(cover.faces):
        if tuple((int(emap[e]), d) for e, d in walk) != base.faces[fmap[f]]:
            return False
    return True


def orbit_monotone(x: ToroidalMap, n: int) -> list[tuple[CoverDescriptor, int, int]]:
    """``(cover, cover orbits, base orbits)`` for every ``n``-sheeted cover."""
    base = orbit_report(x).edge_orbit_count
    return [(d, orbit_report(d.realize()).edge_orbit_count, base) for d in covers_of(x, n)]


def is_edge_homogeneous_tag(tag) -> bool:
    try:
        return parse_tag(tag) in EDGE_HOMOGENEOUS
    except Exception:
        return False
