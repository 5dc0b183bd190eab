"""Exact 2x2 integer lattice algebra.

A lattice matrix ``[[a, c], [b, d]]`` has columns ``(a, b)`` and ``(c, d)``:
the two generators of a translation sublattice of Z^2, written in the basis
of the tiling it lives in.  Matrices are serialized row-major as ``a,c,b,d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

Matrix = tuple[tuple[int, int], tuple[int, int]]


class LatticeError(ValueError):
    """Base class for lattice errors."""


class SingularLatticeError(LatticeError):
    pass


class NotSublatticeError(LatticeError):
    pass


@dataclass(frozen=True, order=True)
class HermiteForm:
    """Lower-triangular basis ``[[diag_a, 0], [sub_b, diag_d]]``.

    Ordering is lexicographic on ``(diag_a, sub_b, diag_d)``.
    """

    diag_a: int
    sub_b: int
    diag_d: int

    def __post_init__(self):
        if self.diag_a <= 0 or self.diag_d <= 0:
            raise LatticeError(f"non-positive diagonal in {self}")
        if not 0 <= self.sub_b < self.diag_d:
            raise LatticeError(f"sub-diagonal out of range in {self}")

    @property
    def index(self) -> int:
        return self.diag_a * self.diag_d

    @property
    def matrix(self) -> Matrix:
        return ((self.diag_a, 0), (self.sub_b, self.diag_d))

    def flat(self) -> list[int]:
        return flatten(self.matrix)

    def __str__(self) -> str:
        return format_matrix(self.matrix)


def as_matrix(m) -> Matrix:
    """Coerce nested sequences, a flat ``[a, c, b, d]`` list or a HermiteForm."""
    if isinstance(m, HermiteForm):
        return m.matrix
    if len(m) == 4:
        a, c, b, d = (int(x) for x in m)
        return ((a, c), (b, d))
    (a, c), (b, d) = m
    return ((int(a), int(c)), (int(b), int(d)))


def flatten(m) -> list[int]:
    (a, c), (b, d) = as_matrix(m)
    return [a, c, b, d]


def parse_matrix(text: str) -> Matrix:
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    if len(parts) != 4:
        raise LatticeError(f"expected 4 comma-separated integers, got {text!r}")
    try:
        return as_matrix([int(p) for p in parts])
    except ValueError as exc:
        raise LatticeError(f"non-integer entry in {text!r}") from exc


def format_matrix(m) -> str:
    return ",".join(str(x) for x in flatten(m))


def det(m) -> int:
    (a, c), (b, d) = as_matrix(m)
    return a * d - b * c


def matmul(x, y) -> Matrix:
    (a, b), (c, d) = as_matrix(x)
    (e, f), (g, h) = as_matrix(y)
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def scale(m, k: int) -> Matrix:
    (a, c), (b, d) = as_matrix(m)
    return ((k * a, k * c), (k * b, k * d))


def columns(m) -> tuple[tuple[int, int], tuple[int, int]]:
    (a, c), (b, d) = as_matrix(m)
    return (a, b), (c, d)


def from_columns(u: Sequence[int], v: Sequence[int]) -> Matrix:
    return ((int(u[0]), int(v[0])), (int(u[1]), int(v[1])))


def _hnf_columns(cols: list[list[int]]) -> tuple[int, int, int]:
    """Reduce a generating set of a rank-2 lattice to ``(a, b, d)``."""
    # Column operations only. First gcd the top row into a single column.
    cols = [list(c) for c in cols]
    top = None
    rest = []
    for c in cols:
        if top is None:
            top = c
            continue
        while c[0] != 0:
            q = top[0] // c[0] if c[0] else 0
            top = [top[0] - q * c[0], top[1] - q * c[1]]
            top, c = c, top
        rest.append(c)
    if top[0] == 0:
        raise SingularLatticeError("generators do not span a rank-2 lattice")
    if top[0] < 0:
        top = [-top[0], -top[1]]
    g = 0
    for c in rest:
        g = _gcd(g, c[1])
    if g == 0:
        raise SingularLatticeError("generators do not span a rank-2 lattice")
    d = abs(g)
    return top[0], top[1] % d, d


def _gcd(x: int, y: int) -> int:
    x, y = abs(x), abs(y)
    while y:
        x, y = y, x % y
    return x


def hnf(m) -> HermiteForm:
    """Hermite normal form of the column lattice of ``m``."""
    if det(m) == 0:
        raise SingularLatticeError(f"singular matrix {format_matrix(m)}")
    u, v = columns(m)
    return HermiteForm(*_hnf_columns([list(u), list(v)]))


def hnf_with_transform(m) -> tuple[HermiteForm, Matrix]:
    """Return ``(H, U)`` with ``m @ U == H.matrix`` and ``|det U| == 1``."""
    h = hnf(m)
    (a, c), (b, d) = as_matrix(m)
    n = a * d - b * c
    # U = m^{-1} H, exact because both bases span the same lattice.
    inv = ((d, -c), (-b, a))
    num = matmul(inv, h.matrix)
    u = tuple(tuple(x // n for x in row) for row in num)
    if any(x % n for row in num for x in row):
        raise AssertionError("hnf lattice mismatch")
    return h, u


def lattice_hnf(generators: Iterable[Sequence[int]]) -> HermiteForm:
    """HNF of the lattice spanned by any finite set of integer vectors."""
    return HermiteForm(*_hnf_columns([list(g) for g in generators]))


def contains(lattice, v: Sequence[int]) -> bool:
    """True iff the vector ``v`` lies in the column lattice."""
    h = hnf(lattice)
    x, y = int(v[0]), int(v[1])
    if x % h.diag_a:
        return False
    k = x // h.diag_a
    return (y - k * h.sub_b) % h.diag_d == 0


def is_sublattice(sub, sup) -> bool:
    """True iff every column of ``sub`` is an integer combination of ``sup``."""
    if det(sub) == 0 or det(sup) == 0:
        raise SingularLatticeError("singular lattice")
    return all(contains(sup, col) for col in columns(sub))


def quotient_index(sup, sub) -> int:
    """Index ``[sup : sub]``."""
    if not is_sublattice(sub, sup):
        raise NotSublatticeError(
            f"{format_matrix(sub)} is not a sublattice of {format_matrix(sup)}"
        )
    return abs(det(sub)) // abs(det(sup))


def coordinates_in(lattice, v: Sequence[int]) -> tuple[int, int]:
    """Integer coordinates of ``v`` in the column basis of ``lattice``."""
    (a, c), (b, d) = as_matrix(lattice)
    n = a * d - b * c
    x = d * v[0] - c * v[1]
    y = -b * v[0] + a * v[1]
    if x % n or y % n:
        raise NotSublatticeError(f"{tuple(v)} not in lattice {format_matrix(lattice)}")
    return x // n, y // n


def residue(h: HermiteForm, x: int, y: int) -> tuple[int, int]:
    """Canonical representative of ``(x, y)`` modulo the lattice ``h``."""
    k = x // h.diag_a
    x -= k * h.diag_a
    y = (y - k * h.sub_b) % h.diag_d
    return x, y


def residue_index(h: HermiteForm, x: int, y: int) -> int:
    x, y = residue(h, x, y)
    return x * h.diag_d + y


def residues(h: HermiteForm) -> list[tuple[int, int]]:
    return [(x, y) for x in range(h.diag_a) for y in range(h.diag_d)]


def divisor_sum(n: int) -> int:
    return sum(d for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def _sublattices(n: int) -> tuple[HermiteForm, ...]:
    forms = []
    for d in range(1, n + 1):
        if n % d:
            continue
        for b in range(d):
            forms.append(HermiteForm(n // d, b, d))
    forms.sort(key=lambda h: (h.diag_d, h.sub_b))
    return tuple(forms)


def sublattices_of_index(n: int) -> list[HermiteForm]:
    """All sublattices of Z^2 of index ``n``, sorted by ``(d, b)``."""
    if n < 1:
        raise LatticeError("index must be positive")
    return list(_sublattices(n))


def canonical_under_pointgroup(m, group: Iterable) -> HermiteForm:
    """Least ``hnf(A @ m)`` over ``A`` in ``group``."""
    if det(m) == 0:
        raise SingularLatticeError(f"singular matrix {format_matrix(m)}")
    return min(hnf(matmul(a, m)) for a in group)


def paper_cover_classes(n: int) -> list[HermiteForm]:
    """One class per HNF representative of index ``n`` (no point-group merging)."""
    return sublattices_of_index(n)


def is_invariant(lattice, a) -> bool:
    """True iff the linear map ``a`` sends the lattice onto itself."""
    return is_sublattice(matmul(a, lattice), lattice)


def intersection(lattices: Sequence) -> HermiteForm:
    """HNF of the intersection of finitely many full-rank lattices."""
    hs = [hnf(x) for x in lattices]
    n = 1
    for h in hs:
        n = n * h.index // _gcd(n, h.index)
    # Every lattice contains n Z^2, so the intersection is read off residues.
    gens = [(n, 0), (0, n)]
    for x in range(n):
        for y in range(n):
            if (x, y) != (0, 0) and all(residue(h, x, y) == (0, 0) for h in hs):
                gens.append((x, y))
    return lattice_hnf(gens)


def generate_group(generators: Iterable) -> list[Matrix]:
    """Close a set of integer 2x2 matrices under multiplication."""
    gens = [as_matrix(g) for g in generators]
    ident = ((1, 0), (0, 1))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = matmul(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)
