"""The twelve periodic source tilings.

Each tiling is generated from a small description: the point group acting on
the translation cell (as affine maps in lattice coordinates), one seed vertex
per vertex orbit, and the squared edge lengths of a symmetric rational drawing.
Edges are the vertex pairs at those lengths and faces are traced from the
cyclic order of edges around each vertex.  Cyclic order is invariant under
orientation-preserving linear maps, so everything is computed exactly in
lattice coordinates; the Gram matrix only enters through edge lengths.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import lattice as lat

Vec = tuple[Fraction, Fraction]
Shift = tuple[int, int]


class TilingError(ValueError):
    pass


class UnsupportedTilingError(TilingError):
    pass


class TilingType(str, enum.Enum):
    T3_6 = "3^6"
    T4_4 = "4^4"
    T6_3 = "6^3"
    T3_6_3_6 = "3.6.3.6"
    RHOMBILLE = "rhombille"
    T3_4_6 = "3^4.6"
    T3_3_4_2 = "3^3.4^2"
    T3_2_4_3_4 = "3^2.4.3.4"
    T3_4_6_4 = "3.4.6.4"
    T3_12_2 = "3.12^2"
    T4_6_12 = "4.6.12"
    T4_8_2 = "4.8^2"

    def __str__(self) -> str:
        return self.value

    @property
    def edge_homogeneous(self) -> bool:
        return self in EDGE_HOMOGENEOUS


EDGE_HOMOGENEOUS = (
    TilingType.T3_6,
    TilingType.T4_4,
    TilingType.T6_3,
    TilingType.T3_6_3_6,
    TilingType.RHOMBILLE,
)
SEMI_EQUIVELAR = tuple(t for t in TilingType if t not in EDGE_HOMOGENEOUS)

_ALIASES = {
    "rhombille(4,4;3,6)": TilingType.RHOMBILLE,
    "[3^6]": TilingType.T3_6,
    "[4^4]": TilingType.T4_4,
    "[6^3]": TilingType.T6_3,
    "[3^1,6^1,3^1,6^1]": TilingType.T3_6_3_6,
    "[3^4,6^1]": TilingType.T3_4_6,
    "[3^3,4^2]": TilingType.T3_3_4_2,
    "[3^2,4^1,3^1,4^1]": TilingType.T3_2_4_3_4,
    "[3^1,4^1,6^1,4^1]": TilingType.T3_4_6_4,
    "[3^1,12^2]": TilingType.T3_12_2,
    "[4^1,6^1,12^1]": TilingType.T4_6_12,
    "[4^1,8^2]": TilingType.T4_8_2,
}


def parse_tag(tag) -> TilingType:
    if isinstance(tag, TilingType):
        return tag
    text = str(tag).strip().replace(" ", "")
    try:
        return TilingType(text)
    except ValueError:
        pass
    if text in _ALIASES:
        return _ALIASES[text]
    raise TilingError(f"unknown tiling tag {tag!r}")


@dataclass(frozen=True)
class EdgeSymbol:
    """Face sizes ``m, l`` and vertex valences ``u, v`` around an edge."""

    m: int
    l: int
    u: int
    v: int

    def __post_init__(self):
        if min(self.m, self.l, self.u, self.v) < 1:
            raise TilingError(f"non-positive entry in edge symbol {self}")
        if (self.u % 2 or self.v % 2) and self.m != self.l:
            raise TilingError(f"odd valence needs equal face sizes: {self}")
        if (self.m % 2 or self.l % 2) and self.u != self.v:
            raise TilingError(f"odd face size needs equal valences: {self}")

    def __str__(self) -> str:
        return f"({self.m},{self.l};{self.u},{self.v})"


@dataclass(frozen=True)
class CellVertex:
    id: int
    coord: Vec
    vertex_type: str


@dataclass(frozen=True)
class CellEdge:
    v1: int
    v2: int
    shift: Shift


# One face-boundary step: (edge id, direction +1/-1, cell of the step's tail).
FaceStep = tuple[int, int, Shift]


@dataclass(frozen=True)
class AffineSymmetry:
    """``x -> matrix @ x + offset`` in lattice coordinates."""

    matrix: lat.Matrix
    offset: Vec = (Fraction(0), Fraction(0))

    def apply(self, p: Sequence[Fraction]) -> Vec:
        (a, c), (b, d) = self.matrix
        x, y = p
        return (a * x + c * y + self.offset[0], b * x + d * y + self.offset[1])


@dataclass(frozen=True, eq=False)
class PeriodicTiling:
    """A doubly periodic cell complex in lattice coordinates."""

    tag: str
    cell_vertices: tuple[CellVertex, ...]
    cell_edges: tuple[CellEdge, ...]
    cell_faces: tuple[tuple[FaceStep, ...], ...]
    gram: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    symmetries: tuple[AffineSymmetry, ...]
    # tabulated counts; see symmetry.plane_edge_orbits for the computed ones
    plane_edge_orbit_count: int
    edge_symbol: Optional[EdgeSymbol] = None
    assoc_equivelar: Optional[tuple[TilingType, lat.Matrix]] = None
    vertex_type: Optional[str] = None
    # ccw list of outgoing half-edges (edge id, direction) at each vertex
    rotation: tuple[tuple[tuple[int, int], ...], ...] = field(default=(), repr=False)

    @property
    def point_group(self) -> list[lat.Matrix]:
        return sorted({s.matrix for s in self.symmetries})

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.cell_vertices), len(self.cell_edges), len(self.cell_faces)

    def face_size(self, f: int) -> int:
        return len(self.cell_faces[f])

    def half_edge(self, e: int, direction: int) -> tuple[int, int, Shift]:
        """``(tail, head, head cell)`` of a half-edge whose tail sits in cell 0."""
        ce = self.cell_edges[e]
        if direction > 0:
            return ce.v1, ce.v2, ce.shift
        return ce.v2, ce.v1, (-ce.shift[0], -ce.shift[1])

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def face_cycle(self, v: int) -> list[int]:
        """Sizes of the faces around ``v`` in counterclockwise order."""
        left = self._left_face()
        return [len(self.cell_faces[left[h]]) for h in self.rotation[v]]

    @functools.cached_property
    def _left_face_map(self) -> dict[tuple[int, int], int]:
        out = {}
        for f, steps in enumerate(self.cell_faces):
            for e, d, _ in steps:
                out[(e, d)] = f
        return out

    def _left_face(self) -> dict[tuple[int, int], int]:
        return self._left_face_map

    def dual(self) -> "PeriodicTiling":
        return _dual_tiling(self)

    def summary(self) -> dict:
        v, e, f = self.counts
        return {
            "tag": self.tag,
            "vertex_type": self.vertex_type,
            "edge_symbol": str(self.edge_symbol) if self.edge_symbol else None,
            "cell_vertices": v,
            "cell_edges": e,
            "cell_faces": f,
            "plane_edge_orbits": self.plane_edge_orbit_count,
        }


# ---------------------------------------------------------------------------
# exact geometry helpers


def _frac_vec(p) -> Vec:
    return (Fraction(p[0]), Fraction(p[1]))


def _reduce(p: Vec) -> tuple[Vec, Shift]:
    """Split a point into its representative in [0,1)^2 and the cell shift."""
    fx, fy = p[0] // 1, p[1] // 1
    return (p[0] - fx, p[1] - fy), (int(fx), int(fy))


def _norm2(gram, v) -> Fraction:
    (g11, g12), (_, g22) = gram
    return g11 * v[0] * v[0] + 2 * g12 * v[0] * v[1] + g22 * v[1] * v[1]


def _half_plane(v) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _ccw_cmp(u, v) -> int:
    hu, hv = _half_plane(u), _half_plane(v)
    if hu != hv:
        return hu - hv
    cross = u[0] * v[1] - u[1] * v[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _vertex_type_string(cycle: Sequence[int]) -> str:
    """Canonical ``p^k.q...`` string, minimal over rotations and reflections."""
    n = len(cycle)
    variants = []
    for seq in (list(cycle), list(reversed(cycle))):
        for r in range(n):
            variants.append(tuple(seq[r:] + seq[:r]))
    best = min(variants)
    # pick the rotation that keeps runs together and starts with the smallest
    runs = []
    for x in best:
        if runs and runs[-1][0] == x:
            runs[-1][1] += 1
        else:
            runs.append([x, 1])
    if len(runs) > 1 and runs[0][0] == runs[-1][0]:
        runs[0][1] += runs.pop()[1]
    return ".".join(f"{p}^{k}" if k > 1 else f"{p}" for p, k in runs)


def cycle_matches(cycle: Sequence[int], pattern: Sequence[int]) -> bool:
    n = len(pattern)
    if len(cycle) != n:
        return False
    cyc = list(cycle)
    for seq in (list(pattern), list(reversed(pattern))):
        for r in range(n):
            if seq[r:] + seq[:r] == cyc:
                return True
    return False


# ---------------------------------------------------------------------------
# generic construction


def _orbit(points: Iterable[Vec], syms: Sequence[AffineSymmetry]) -> list[tuple[Vec, int]]:
    out: dict[Vec, int] = {}
    for k, p in enumerate(points):
        stack = [_reduce(_frac_vec(p))[0]]
        while stack:
            q = stack.pop()
            if q in out:
                continue
            out[q] = k
            for s in syms:
                stack.append(_reduce(s.apply(q))[0])
    return sorted(out.items())


def _trace_faces(rotation, head_of):
    """Faces as cycles of half-edges, with the face on the left of each step.

    ``rotation[v]`` lists outgoing half-edges counterclockwise; ``head_of(h)``
    returns ``(head vertex, head cell)`` for a half-edge with tail in cell 0.
    """
    pos = {}
    for v, hs in enumerate(rotation):
        for i, h in enumerate(hs):
            pos[h] = (v, i)
    seen = set()
    faces = []
    for v, hs in enumerate(rotation):
        for h0 in hs:
            if h0 in seen:
                continue
            steps = []
            cell = (0, 0)
            h = h0
            while True:
                seen.add(h)
                steps.append((h[0], h[1], cell))
                w, sh = head_of(h)
                cell = (cell[0] + sh[0], cell[1] + sh[1])
                rev = (h[0], -h[1])
                rw, i = pos[rev]
                assert rw == w
                h = rotation[w][(i - 1) % len(rotation[w])]
                if h == h0:
                    break
            if cell != (0, 0):
                raise TilingError("face boundary does not close in the plane")
            faces.append(tuple(steps))
    return faces


def _assemble(tag, coords, edges, gram, syms, patterns=None, cls=None, **meta) -> PeriodicTiling:
    """Rotation systems, faces and vertex types from vertices and edges."""
    edges = sorted(edges, key=lambda e: (e.v1, e.v2, e.shift))
    out: list[list] = [[] for _ in coords]
    for k, e in enumerate(edges):
        d = (
            coords[e.v2][0] + e.shift[0] - coords[e.v1][0],
            coords[e.v2][1] + e.shift[1] - coords[e.v1][1],
        )
        out[e.v1].append(((k, 1), d))
        out[e.v2].append(((k, -1), (-d[0], -d[1])))
    rotation = []
    for hs in out:
        hs.sort(key=functools.cmp_to_key(lambda a, b: _ccw_cmp(a[1], b[1])))
        rotation.append(tuple(h for h, _ in hs))

    def head_of(h):
        e = edges[h[0]]
        return (e.v2, e.shift) if h[1] > 0 else (e.v1, (-e.shift[0], -e.shift[1]))

    faces = _trace_faces(rotation, head_of)
    left = {}
    for f, steps in enumerate(faces):
        for e, d, _ in steps:
            left[(e, d)] = f
    cell_vertices = []
    for v, p in enumerate(coords):
        cycle = [len(faces[left[h]]) for h in rotation[v]]
        if patterns is not None and not cycle_matches(cycle, patterns[cls[v]]):
            raise TilingError(
                f"{tag}: vertex {v} has face cycle {cycle}, expected {patterns[cls[v]]}"
            )
        cell_vertices.append(CellVertex(v, p, _vertex_type_string(cycle)))
    nv, ne, nf = len(coords), len(edges), len(faces)
    if nv - ne + nf != 0:
        raise TilingError(f"{tag}: cell Euler characteristic {nv - ne + nf} != 0")
    types = {cv.vertex_type for cv in cell_vertices}
    return PeriodicTiling(
        tag=tag,
        cell_vertices=tuple(cell_vertices),
        cell_edges=tuple(edges),
        cell_faces=tuple(faces),
        gram=gram,
        symmetries=tuple(syms),
        rotation=tuple(rotation),
        vertex_type=types.pop() if len(types) == 1 else None,
        **meta,
    )


def _build(tag, gram, syms, seeds, edge_rules, patterns, **meta) -> PeriodicTiling:
    gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
    verts = _orbit([_frac_vec(s) for s in seeds], syms)
    coords = [p for p, _ in verts]
    cls = [k for _, k in verts]
    rules = {(Fraction(l2), min(a, b), max(a, b)) for l2, a, b in edge_rules}
    edges = []
    for i, pi in enumerate(coords):
        for j in range(i, len(coords)):
            pj = coords[j]
            for sx in range(-2, 3):
                for sy in range(-2, 3):
                    # each undirected edge once
                    if i == j and (sx, sy) <= (0, 0):
                        continue
                    d = (pj[0] + sx - pi[0], pj[1] + sy - pi[1])
                    key = (_norm2(gram, d), min(cls[i], cls[j]), max(cls[i], cls[j]))
                    if key in rules:
                        edges.append(CellEdge(i, j, (sx, sy)))
    return _assemble(tag, coords, edges, gram, syms, patterns, cls, **meta)


# ---------------------------------------------------------------------------
# point groups

F = Fraction
HALF = F(1, 2)
_HEX_GRAM = ((1, HALF), (HALF, 1))
_SQUARE_GRAM = ((1, 0), (0, 1))

ROT60 = ((0, -1), (1, 1))
HEX_REFLECTION = ((-1, -1), (0, 1))
ROT90 = ((0, 1), (-1, 0))
SQUARE_REFLECTION = ((-1, 0), (0, 1))
MINUS_I = ((-1, 0), (0, -1))

D6 = lat.generate_group([ROT60, HEX_REFLECTION])
C6 = lat.generate_group([ROT60])
D4 = lat.generate_group([ROT90, SQUARE_REFLECTION])
# elongated triangular: mirrors through a square centre, basis A=(1,0), B=(1/2,h)
D2_ELONGATED = lat.generate_group([HEX_REFLECTION, ((1, 1), (0, -1))])


def _symmorphic(group) -> tuple[AffineSymmetry, ...]:
    return tuple(AffineSymmetry(m) for m in group)


def _snub_square_group() -> tuple[AffineSymmetry, ...]:
    out = []
    for m in D4:
        if lat.det(m) == 1:
            out.append(AffineSymmetry(m))
        else:
            out.append(AffineSymmetry(m, (HALF, HALF)))
    return tuple(out)


# ---------------------------------------------------------------------------
# the twelve tilings

_ELONGATION = F(13, 15)  # rational stand-in for sqrt(3)/2
_ELONG_GRAM = ((1, HALF), (HALF, F(1, 4) + (1 + _ELONGATION) ** 2))


def _elongated_seed() -> Vec:
    # square centred at the origin, lower-left corner (-1/2, -1/2) in cartesian
    y = F(-1, 2) / (1 + _ELONGATION)
    return (F(-1, 2) - y / 2, y)


# snub hexagonal: unit triangular lattice minus the index-7 sublattice
# spanned by (2,1) and (-1,3); seed is the unit point (1,0) in that basis
_SNUB_HEX_BASIS = ((2, -1), (1, 3))
_SNUB_HEX_GRAM = ((7, F(7, 2)), (F(7, 2), 7))

_IDENT = ((1, 0), (0, 1))

_SPECS = {
    TilingType.T3_6: dict(
        gram=_HEX_GRAM, syms=_symmorphic(D6), seeds=[(0, 0)],
        edge_rules=[(1, 0, 0)], patterns={0: (3,) * 6},
        plane_edge_orbit_count=3, edge_symbol=EdgeSymbol(3, 3, 6, 6),
    ),
    TilingType.T4_4: dict(
        gram=_SQUARE_GRAM, syms=_symmorphic(D4), seeds=[(0, 0)],
        edge_rules=[(1, 0, 0)], patterns={0: (4,) * 4},
        plane_edge_orbit_count=2, edge_symbol=EdgeSymbol(4, 4, 4, 4),
    ),
    TilingType.T6_3: dict(
        gram=_HEX_GRAM, syms=_symmorphic(D6), seeds=[(F(1, 3), F(1, 3))],
        edge_rules=[(F(1, 3), 0, 0)], patterns={0: (6,) * 3},
        plane_edge_orbit_count=3, edge_symbol=EdgeSymbol(6, 6, 3, 3),
    ),
    TilingType.T3_6_3_6: dict(
        gram=_HEX_GRAM, syms=_symmorphic(D6), seeds=[(HALF, 0)],
        edge_rules=[(F(1, 4), 0, 0)], patterns={0: (3, 6, 3, 6)},
        plane_edge_orbit_count=3, edge_symbol=EdgeSymbol(3, 6, 4, 4),
    ),
    TilingType.RHOMBILLE: dict(
        gram=_HEX_GRAM, syms=_symmorphic(D6), seeds=[(0, 0), (F(1, 3), F(1, 3))],
        edge_rules=[(F(1, 3), 0, 1)], patterns={0: (4,) * 6, 1: (4,) * 3},
        plane_edge_orbit_count=3, edge_symbol=EdgeSymbol(4, 4, 3, 6),
    ),
    TilingType.T3_4_6: dict(
        gram=_SNUB_HEX_GRAM, syms=_symmorphic(C6), seeds=[(F(3, 7), F(-1, 7))],
        edge_rules=[(1, 0, 0)], patterns={0: (3, 3, 3, 3, 6)},
        plane_edge_orbit_count=2, assoc_equivelar=(TilingType.T3_6, _IDENT),
    ),
    TilingType.T3_3_4_2: dict(
        gram=_ELONG_GRAM, syms=_symmorphic(D2_ELONGATED), seeds=[_elongated_seed()],
        edge_rules=[(1, 0, 0), (F(1, 4) + _ELONGATION**2, 0, 0)],
        patterns={0: (3, 3, 3, 4, 4)},
        plane_edge_orbit_count=3, assoc_equivelar=(TilingType.T3_6, _IDENT),
    ),
    TilingType.T3_2_4_3_4: dict(
        gram=_SQUARE_GRAM, syms=_snub_square_group(), seeds=[(F(1, 3), F(1, 6))],
        edge_rules=[(F(10, 36), 0, 0), (F(8, 36), 0, 0)],
        patterns={0: (3, 3, 4, 3, 4)},
        plane_edge_orbit_count=3, assoc_equivelar=(TilingType.T4_4, _IDENT),
    ),
    TilingType.T3_4_6_4: dict(
        gram=_HEX_GRAM, syms=_symmorphic(D6), seeds=[(F(1, 5), F(1, 5))],
        edge_rules=[(F(3, 25), 0, 0), (F(4, 25), 0, 0)],
        patterns={0: (3, 4, 6, 4)},
        plane_edge_orbit_count=2, assoc_equivelar=(TilingType.T3_6, _IDENT),
    ),
    TilingType.T3_12_2: dict(
        gram=_HEX_GRAM, syms=_symmorphic(D6), seeds=[(F(5, 12), F(5, 12))],
        edge_rules=[(F(1, 16), 0, 0), (F(1, 12), 0, 0)],
        patterns={0: (3, 12, 12)},
        plane_edge_orbit_count=2, assoc_equivelar=(TilingType.T3_6, _IDENT),
    ),
    TilingType.T4_6_12: dict(
        gram=_HEX_GRAM, syms=_symmorphic(D6), seeds=[(F(5, 18), F(1, 9))],
        edge_rules=[(F(1, 36), 0, 0), (F(1, 27), 0, 0), (F(1, 9), 0, 0)],
        patterns={0: (4, 6, 12)},
        plane_edge_orbit_count=3, assoc_equivelar=(TilingType.T3_6, _IDENT),
    ),
    TilingType.T4_8_2: dict(
        gram=_SQUARE_GRAM, syms=_symmorphic(D4), seeds=[(F(1, 5), HALF)],
        edge_rules=[(F(18, 100), 0, 0), (F(16, 100), 0, 0)],
        patterns={0: (4, 8, 8)},
        plane_edge_orbit_count=2, assoc_equivelar=(TilingType.T4_4, _IDENT),
    ),
}

_DUALS = {
    TilingType.T3_6: TilingType.T6_3,
    TilingType.T6_3: TilingType.T3_6,
    TilingType.T4_4: TilingType.T4_4,
    TilingType.T3_6_3_6: TilingType.RHOMBILLE,
    TilingType.RHOMBILLE: TilingType.T3_6_3_6,
}


@functools.lru_cache(maxsize=None)
def _cached(t: TilingType) -> PeriodicTiling:
    spec = dict(_SPECS[t])
    return _build(t.value, **spec)


def build_tiling(tag) -> PeriodicTiling:
    return _cached(parse_tag(tag))


def dual_tiling(tag) -> TilingType:
    t = parse_tag(tag)
    if t not in _DUALS:
        raise UnsupportedTilingError(f"dual is only defined for edge-homogeneous tags, not {t}")
    return _DUALS[t]


def associated_equivelar(tag) -> tuple[TilingType, lat.Matrix]:
    t = parse_tag(tag)
    meta = _SPECS[t].get("assoc_equivelar")
    if meta is None:
        raise UnsupportedTilingError(f"{t} is edge-homogeneous; no associated equivelar tiling")
    return meta


def all_tilings() -> list[PeriodicTiling]:
    return [build_tiling(t) for t in TilingType]


def point_group(tag) -> list[lat.Matrix]:
    return build_tiling(tag).point_group


# ---------------------------------------------------------------------------
# duals


def _dual_tiling(t: PeriodicTiling) -> PeriodicTiling:
    """Dual with a vertex at each face centroid, one edge across each edge."""
    raw = []
    for steps in t.cell_faces:
        n = len(steps)
        sx = sy = Fraction(0)
        for e, d, cell in steps:
            p = t.cell_vertices[t.half_edge(e, d)[0]].coord
            sx += p[0] + cell[0]
            sy += p[1] + cell[1]
        raw.append((sx / n, sy / n))
    coords = [_reduce(p)[0] for p in raw]
    anchor = [_reduce(p)[1] for p in raw]
    # cell of the edge instance (where v1 sits) seen from each face's frame
    inst = {}
    for f, steps in enumerate(t.cell_faces):
        for e, d, cell in steps:
            sh = t.cell_edges[e].shift
            inst[(e, d)] = (f, cell if d > 0 else (cell[0] - sh[0], cell[1] - sh[1]))
    edges = []
    for e in range(len(t.cell_edges)):
        fl, il = inst[(e, 1)]
        fr, ir = inst[(e, -1)]
        shift = (
            anchor[fr][0] - anchor[fl][0] + il[0] - ir[0],
            anchor[fr][1] - anchor[fl][1] + il[1] - ir[1],
        )
        edges.append(CellEdge(fl, fr, shift))
    try:
        kind = dual_tiling(t.tag)
        meta = _SPECS[kind]
        tag = kind.value
        extra = dict(
            plane_edge_orbit_count=meta["plane_edge_orbit_count"],
            edge_symbol=meta.get("edge_symbol"),
        )
    except TilingError:
        tag = f"dual({t.tag})"
        extra = dict(plane_edge_orbit_count=t.plane_edge_orbit_count)
    return _assemble(tag, coords, edges, t.gram, t.symmetries, **extra)
