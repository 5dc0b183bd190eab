"""Toroidal maps as quotients of periodic tilings by translation lattices."""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import lattice as lat
from .tilings import EdgeSymbol, PeriodicTiling, build_tiling, parse_tag

TilingLike = Union[PeriodicTiling, str]


class MapError(ValueError):
    pass


class DisconnectedMapError(MapError):
    pass


class NotEdgeHomogeneousError(MapError):
    pass


@dataclass(frozen=True, eq=False)
class ToroidalMap:
    """A finite quotient ``tiling / lattice``.

    Ids are deterministic: cell object ``i`` in residue class ``r`` gets id
    ``i * n + r`` where ``r`` indexes the HNF residues of the lattice.
    """

    tiling: PeriodicTiling
    lattice: lat.Matrix
    vertex_origin: tuple[tuple[int, tuple[int, int]], ...]
    edges: tuple[tuple[int, int], ...]
    # each face is a cyclic walk of (edge id, direction); the face lies on the left
    faces: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def tag(self) -> str:
        return self.tiling.tag

    @property
    def index(self) -> int:
        return abs(lat.det(self.lattice))

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.vertex_origin), len(self.edges), len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        v, e, f = self.counts
        return v - e + f

    def face_vertices(self, f: int) -> list[int]:
        return [self.edges[e][0] if d > 0 else self.edges[e][1] for e, d in self.faces[f]]

    @functools.cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(len(self.vertex_origin), dtype=np.int64)
        for u, w in self.edges:
            deg[u] += 1
            deg[w] += 1
        return deg

    @functools.cached_property
    def edge_faces(self) -> tuple[tuple[int, int], ...]:
        """``(left face, right face)`` of every edge w.r.t. its orientation."""
        out = [[-1, -1] for _ in self.edges]
        for f, walk in enumerate(self.faces):
            for e, d in walk:
                out[e][0 if d > 0 else 1] = f
        return tuple((a, b) for a, b in out)

    @functools.cached_property
    def polyhedral(self) -> bool:
        return validate_polyhedral(self)

    def vertex_face_cycle(self, v: int) -> list[int]:
        """Face sizes around ``v`` read off the flag system (cyclic order)."""
        fs = flag_system(self)
        start = int(np.flatnonzero(fs.flag_vertex == v)[0])
        out = []
        x = start
        while True:
            out.append(len(self.faces[fs.flag_face[x]]))
            x = int(fs.s2[fs.s1[x]])
            if x == start:
                break
        return out

    def to_dict(self) -> dict:
        return {
            "tiling": self.tag,
            "lattice": lat.flatten(self.lattice),
            "vertices": [[c, r[0], r[1]] for c, r in self.vertex_origin],
            "edges": [list(e) for e in self.edges],
            "faces": [[e if d > 0 else ~e for e, d in walk] for walk in self.faces],
            "polyhedral": self.polyhedral,
        }

    def __repr__(self) -> str:
        v, e, f = self.counts
        return f"ToroidalMap({self.tag}, {lat.format_matrix(self.lattice)}, V={v}, E={e}, F={f})"


def _resolve(t: TilingLike) -> PeriodicTiling:
    return t if isinstance(t, PeriodicTiling) else build_tiling(t)


def quotient(t: TilingLike, k) -> ToroidalMap:
    """Quotient of a tiling by the translation lattice spanned by ``k``'s columns."""
    tiling = _resolve(t)
    k = lat.as_matrix(k)
    h = lat.hnf(k)  # raises SingularLatticeError
    n = h.index
    res = lat.residues(h)

    def rid(x, y):
        return lat.residue_index(h, x, y)

    vertex_origin = tuple((cv.id, r) for cv in tiling.cell_vertices for r in res)
    edges = []
    for ce in tiling.cell_edges:
        for rx, ry in res:
            edges.append((ce.v1 * n + rid(rx, ry), ce.v2 * n + rid(rx + ce.shift[0], ry + ce.shift[1])))
    faces = []
    for steps in tiling.cell_faces:
        for rx, ry in res:
            walk = []
            for e, d, cell in steps:
                sh = tiling.cell_edges[e].shift
                cx, cy = cell if d > 0 else (cell[0] - sh[0], cell[1] - sh[1])
                walk.append((e * n + rid(rx + cx, ry + cy), d))
            faces.append(tuple(walk))
    return ToroidalMap(tiling, k, vertex_origin, tuple(edges), tuple(faces))


def validate_polyhedral(m: ToroidalMap) -> bool:
    """No loops or multi-edges; distinct faces meet in nothing, a vertex or an edge."""
    seen = set()
    for u, w in m.edges:
        if u == w:
            return False
        key = (min(u, w), max(u, w))
        if key in seen:
            return False
        seen.add(key)
    fverts = []
    for f in range(len(m.faces)):
        vs = m.face_vertices(f)
        if len(set(vs)) != len(vs):
            return False
        fverts.append(vs)
    # shared vertices per face pair
    incident: dict[int, list[int]] = {}
    for f, vs in enumerate(fverts):
        for v in vs:
            incident.setdefault(v, []).append(f)
    shared: dict[tuple[int, int], list[int]] = {}
    for v, fs in incident.items():
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                shared.setdefault((fs[i], fs[j]), []).append(v)
    fedges = [{e for e, _ in walk} for walk in m.faces]
    for (f, g), vs in shared.items():
        if len(vs) == 1:
            continue
        if len(vs) > 2:
            return False
        common = fedges[f] & fedges[g]
        if len(common) != 1:
            return False
        u, w = m.edges[next(iter(common))]
        if {u, w} != set(vs):
            return False
    return True


@dataclass(frozen=True, eq=False)
class FlagSystem:
    """Flags ``4e + 2*end + side`` with the three involutions as int arrays."""

    s0: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    flag_vertex: np.ndarray
    flag_edge: np.ndarray
    flag_face: np.ndarray

    @property
    def size(self) -> int:
        return int(self.s0.shape[0])

    @property
    def table(self) -> np.ndarray:
        """``(3, nflags)`` stacked involutions, the kernel input."""
        return np.ascontiguousarray(np.stack([self.s0, self.s1, self.s2]))

    def dual(self) -> "FlagSystem":
        return FlagSystem(self.s2, self.s1, self.s0, self.flag_face, self.flag_edge, self.flag_vertex)

    def check(self) -> None:
        ids = np.arange(self.size)
        for name in ("s0", "s1", "s2"):
            s = getattr(self, name)
            if np.any(s[s] != ids) or np.any(s == ids):
                raise MapError(f"{name} is not a fixed-point-free involution")
        if np.any(self.s0[self.s2] != self.s2[self.s0]):
            raise MapError("s0 and s2 do not commute")

    def orbits(self, gens: tuple[int, ...]) -> np.ndarray:
        """Component label per flag under the subgroup generated by ``gens``."""
        arrs = [(self.s0, self.s1, self.s2)[g] for g in gens]
        ids = np.arange(self.size)
        rows = np.concatenate([ids] * len(arrs))
        cols = np.concatenate(arrs)
        graph = coo_matrix((np.ones_like(rows), (rows, cols)), shape=(self.size, self.size))
        _, labels = connected_components(graph, directed=False)
        return labels


@functools.lru_cache(maxsize=256)
def _flag_system_cached(m: ToroidalMap) -> FlagSystem:
    ne = len(m.edges)
    nf = 4 * ne
    s0 = np.arange(nf, dtype=np.int64) ^ 2
    s2 = np.arange(nf, dtype=np.int64) ^ 1
    s1 = np.full(nf, -1, dtype=np.int64)
    for walk in m.faces:
        k = len(walk)
        for i in range(k):
            e, d = walk[i]
            e2, d2 = walk[(i + 1) % k]
            side, side2 = (0 if d > 0 else 1), (0 if d2 > 0 else 1)
            head = 1 if d > 0 else 0
            tail2 = 0 if d2 > 0 else 1
            a = 4 * e + 2 * head + side
            b = 4 * e2 + 2 * tail2 + side2
            s1[a] = b
            s1[b] = a
    if np.any(s1 < 0):
        raise MapError("face walks do not cover every flag")
    edges = np.asarray(m.edges, dtype=np.int64).reshape(-1, 2)
    ef = np.asarray(m.edge_faces, dtype=np.int64).reshape(-1, 2)
    flags = np.arange(nf)
    e_of = flags >> 2
    end = (flags >> 1) & 1
    side = flags & 1
    fs = FlagSystem(
        s0=s0,
        s1=s1,
        s2=s2,
        flag_vertex=edges[e_of, end],
        flag_edge=e_of,
        flag_face=ef[e_of, side],
    )
    for arr in (fs.s0, fs.s1, fs.s2, fs.flag_vertex, fs.flag_edge, fs.flag_face):
        arr.setflags(write=False)
    labels = fs.orbits((0, 1, 2))
    if nf and labels.max() != 0:
        raise DisconnectedMapError("flag system is not connected")
    return fs


def flag_system(m: ToroidalMap) -> FlagSystem:
    return _flag_system_cached(m)


def reconstruct(fs: FlagSystem) -> tuple[int, int, int, list[tuple[int, ...]]]:
    """``(V, E, F, vertex labels per flag orbit)`` rebuilt from involution orbits."""
    v = fs.orbits((1, 2))
    e = fs.orbits((0, 2))
    f = fs.orbits((0, 1))
    return int(v.max()) + 1, int(e.max()) + 1, int(f.max()) + 1, [tuple(v), tuple(e), tuple(f)]


def dual_map(m: ToroidalMap) -> ToroidalMap:
    """Quotient of the dual tiling by the same lattice."""
    return quotient(m.tiling.dual(), m.lattice)


def edge_symbol_of(m: ToroidalMap) -> EdgeSymbol:
    symbols = set()
    deg = m.degrees
    for e, (u, w) in enumerate(m.edges):
        fl, fr = m.edge_faces[e]
        a, b = sorted((len(m.faces[fl]), len(m.faces[fr])))
        x, y = sorted((int(deg[u]), int(deg[w])))
        symbols.add((a, b, x, y))
        if len(symbols) > 1:
            raise NotEdgeHomogeneousError(f"{m.tag}: edges carry different symbols")
    return EdgeSymbol(*symbols.pop())


# ---------------------------------------------------------------------------
# serialization


def map_to_json(m: ToroidalMap) -> str:
    return json.dumps(m.to_dict(), separators=(",", ":"), sort_keys=True)


def map_from_dict(data: dict) -> ToroidalMap:
    try:
        tiling = build_tiling(parse_tag(data["tiling"]))
        k = lat.as_matrix(data["lattice"])
    except KeyError as exc:
        raise MapError(f"map JSON missing field {exc}") from exc
    m = quotient(tiling, k)
    for key in ("vertices", "edges", "faces"):
        if key in data and data[key] != m.to_dict()[key]:
            raise MapError(f"map JSON field {key!r} does not match its tiling and lattice")
    return m


def map_from_json(text: str) -> ToroidalMap:
    return map_from_dict(json.loads(text))


def load_map(path) -> ToroidalMap:
    with open(path, encoding="utf-8") as fh:
        return map_from_json(fh.read())


def to_dot(m: ToroidalMap, name: Optional[str] = None) -> str:
    """1-skeleton as an undirected DOT multigraph."""
    label = name or f"{m.tag} {lat.format_matrix(m.lattice)}"
    lines = [f'graph "{label}" {{']
    for v, (c, r) in enumerate(m.vertex_origin):
        lines.append(f'  {v} [label="{v}" cell={c} residue="{r[0]},{r[1]}"];')
    for e, (u, w) in enumerate(m.edges):
        lines.append(f"  {u} -- {w} [id={e}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
