"""Claim checks and parameter sweeps behind ``tormap reproduce``.

Every check yields :class:`Finding` rows.  ``pass``/``fail`` rows are claims
that are expected to hold; ``recorded`` rows report observations that the
harness prints without judging (known gaps, basis-dependent relations).
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from . import covers as cv
from . import lattice as lat
from . import tilings as tl
from .symmetry import automorphism_group, map_isomorphic, orbit_report, plane_edge_orbits
from .torusmap import ToroidalMap, dual_map, flag_system, quotient, reconstruct

PASS, FAIL, RECORDED = "pass", "fail", "recorded"


@dataclass
class Finding:
    claim: str
    description: str
    expected: object
    observed: object
    status: str
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _check(claim, description, expected, observed, ok: bool, **detail) -> Finding:
    return Finding(claim, description, expected, observed, PASS if ok else FAIL, detail)


def _record(claim, description, expected, observed, **detail) -> Finding:
    return Finding(claim, description, expected, observed, RECORDED, detail)


# ---------------------------------------------------------------------------
# sweeps


def hnf_lattices(max_index: int) -> Iterator[lat.HermiteForm]:
    for n in range(1, max_index + 1):
        yield from lat.sublattices_of_index(n)


@dataclass
class SweepRow:
    tag: str
    lattice: str
    polyhedral: bool
    edge_orbits: Optional[int]


def orbit_sweep(tag, max_index: int, polyhedral_only: bool = True) -> list[SweepRow]:
    t = tl.build_tiling(tag)
    rows = []
    for h in hnf_lattices(max_index):
        m = quotient(t, h.matrix)
        poly = m.polyhedral
        if polyhedral_only and not poly:
            rows.append(SweepRow(t.tag, str(h), False, None))
            continue
        rows.append(SweepRow(t.tag, str(h), poly, orbit_report(m).edge_orbit_count))
    return rows


# bound and whether the claim is an equality
EDGE_HOMOGENEOUS_BOUNDS = {
    "3^6": 3, "6^3": 3, "3.6.3.6": 3, "rhombille": 3, "4^4": 2,
}
SEMI_EQUIVELAR_BOUNDS = {
    "3.12^2": 6, "3^2.4.3.4": 6, "3.4.6.4": 6, "4.8^2": 4, "3^4.6": 8, "4.6.12": 12, "3^3.4^2": 3,
}
EXACT = {"3^3.4^2"}
BOUND_CLAIMS = {
    "3^6": "thm:no-of-orbits.a", "6^3": "thm:no-of-orbits.a", "3.6.3.6": "thm:no-of-orbits.a",
    "rhombille": "thm:no-of-orbits.a", "4^4": "thm:no-of-orbits.b",
    "3.12^2": "edge-no-of-orbits.a", "3^2.4.3.4": "edge-no-of-orbits.a",
    "3.4.6.4": "edge-no-of-orbits.a", "4.8^2": "edge-no-of-orbits.b",
    "3^4.6": "edge-no-of-orbits.c", "3^3.4^2": "edge-no-of-orbits.d", "4.6.12": "edge-no-of-orbits.e",
}


def bound_findings(tag, max_index: int, require_attained: bool = False) -> list[Finding]:
    tag = tl.parse_tag(tag).value
    bound = {**EDGE_HOMOGENEOUS_BOUNDS, **SEMI_EQUIVELAR_BOUNDS}[tag]
    rows = [r for r in orbit_sweep(tag, max_index) if r.edge_orbits is not None]
    observed = sorted({r.edge_orbits for r in rows})
    if tag in EXACT:
        bad = [r for r in rows if r.edge_orbits != bound]
        desc = f"every polyhedral quotient of {tag} (index <= {max_index}) has m = {bound}"
    else:
        bad = [r for r in rows if r.edge_orbits > bound]
        desc = f"polyhedral quotients of {tag} (index <= {max_index}) have m <= {bound}"
    out = [
        _check(
            BOUND_CLAIMS[tag], desc, bound, max(observed) if observed else None, not bad,
            tag=tag, checked=len(rows), observed_values=observed,
            violations=[f"{r.lattice}: m={r.edge_orbits}" for r in bad[:10]],
        )
    ]
    if require_attained:
        hit = [r.lattice for r in rows if r.edge_orbits == bound]
        out.append(
            _check(
                "thm:no-of-orbits.c", f"bound {bound} for {tag} is attained (index <= {max_index})",
                bound, max(observed) if observed else None, bool(hit), tag=tag,
                witness=hit[0] if hit else None,
            )
        )
    return out


# ---------------------------------------------------------------------------
# individual claims


def check_sigma(max_n: int = 12) -> list[Finding]:
    expected = [lat.divisor_sum(n) for n in range(1, max_n + 1)]
    observed = [len(lat.sublattices_of_index(n)) for n in range(1, max_n + 1)]
    brute = [brute_force_sublattice_count(n) for n in range(1, max_n + 1)]
    return [
        _check(
            "thm-main3.sigma", f"sublattices_of_index(n) has sigma(n) forms, n = 1..{max_n}",
            expected, observed, expected == observed == brute, brute_force=brute,
        )
    ]


def brute_force_sublattice_count(n: int) -> int:
    """Distinct index-``n`` column lattices among all small integer matrices."""
    seen = set()
    rng = range(-n, n + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if abs(a * d - b * c) != n:
                        continue
                    # canonical key: the coset set of Z^2 / L inside [0, n)^2
                    pts = frozenset(
                        (x, y)
                        for x in range(n)
                        for y in range(n)
                        if (d * x - c * y) % n == 0 and (-b * x + a * y) % n == 0
                    )
                    seen.add(pts)
    return len(seen)


def check_sharpness() -> list[Finding]:
    m = quotient("3^6", ((5, 0), (0, 3)))
    rep = orbit_report(m)
    m5 = quotient("4^4", ((5, 0), (0, 3)))
    rep5 = orbit_report(m5)
    return [
        _check("thm:no-of-orbits.c", "quotient(3^6, 5,0,0,3) has 3 edge orbits", 3,
               rep.edge_orbit_count, rep.edge_orbit_count == 3, aut_order=rep.aut_order),
        _check("t-5orb", "quotient(4^4, 5,0,0,3) has 2 edge orbits", 2,
               rep5.edge_orbit_count, rep5.edge_orbit_count == 2, aut_order=rep5.aut_order),
    ]


def check_symmetric_cover() -> list[Finding]:
    out = []
    for k, sheets in ((((2, 0), (1, 3)), 36), (((5, 0), (0, 3)), 225)):
        x = quotient("3^6", k)
        d = cv.symmetric_cover(x, "scaled")
        m = d.edge_orbits()
        out.append(
            _check(
                "thm-main1.clm1",
                f"symmetric cover of 3^6 {lat.format_matrix(k)}: {sheets} sheets, <= 2 edge orbits",
                {"sheets": sheets, "edge_orbits": "<=2"},
                {"sheets": d.sheets, "edge_orbits": m},
                d.sheets == sheets and m <= 2,
                cover_lattice=lat.format_matrix(d.cover_lattice),
                lattice_invariant=all(
                    lat.is_invariant(d.cover_lattice, a) for a in cv.enlarged_group("3^6")
                ),
            )
        )
        inv = cv.symmetric_cover(x, "invariant")
        out.append(
            _record(
                "thm-main1.invariant",
                f"G'-invariant sublattice of 3^6 {lat.format_matrix(k)}",
                "<=2 edge orbits",
                {"sheets": inv.sheets, "edge_orbits": inv.edge_orbits()},
                cover_lattice=lat.format_matrix(inv.cover_lattice),
            )
        )
    return out


STRETCH_BASES = (("3^6", ((5, 0), (0, 3))), ("4^4", ((3, 0), (0, 3))), ("3.4.6.4", ((2, 0), (1, 3))))


def check_stretch() -> list[Finding]:
    bad = []
    for tag, k in STRETCH_BASES:
        x = quotient(tag, k)
        for n in range(1, 11):
            d = cv.stretch_cover(x, n)
            vmap = cv.projection(d)[0]
            counts = np.bincount(vmap, minlength=x.counts[0])
            if d.sheets != n or not np.all(counts == n) or not cv.check_covering(d):
                bad.append(f"{tag} {lat.format_matrix(k)} n={n}")
    return [
        _check("thm-main2", "stretch covers have n sheets and n-to-1 vertex projection, n = 1..10",
               "n-to-1", "n-to-1" if not bad else bad, not bad)
    ]


def dual_sample() -> list[tuple[str, lat.Matrix]]:
    tags = [t.value for t in tl.EDGE_HOMOGENEOUS]
    mats = [((3, 0), (0, 3)), ((5, 0), (0, 3)), ((2, 0), (1, 3)), ((4, 0), (1, 4))]
    return [(t, m) for t in tags for m in mats]


def check_duals() -> list[Finding]:
    bad = []
    for tag, k in dual_sample():
        m = quotient(tag, k)
        a = orbit_report(m).edge_orbit_count
        b = orbit_report(dual_map(m)).edge_orbit_count
        if a != b:
            bad.append(f"{tag} {lat.format_matrix(k)}: {a} vs {b}")
    return [
        _check("prop2", f"edge orbit count equals that of the dual ({len(dual_sample())} maps)",
               "equal", "equal" if not bad else bad, not bad)
    ]


def check_monotone(max_index: int = 9, max_n: int = 4) -> list[Finding]:
    bad = []
    checked = 0
    for t in tl.EDGE_HOMOGENEOUS:
        for h in hnf_lattices(max_index):
            x = quotient(t, h.matrix)
            if not x.polyhedral:
                continue
            base = orbit_report(x).edge_orbit_count
            for n in range(1, max_n + 1):
                for d in cv.covers_of(x, n):
                    checked += 1
                    k = d.edge_orbits()
                    if k > base:
                        bad.append(f"{t.value} {h} -> {d.hnf_in_K}: {k} > {base}")
    return [
        _check("lemma-orbb", f"cover orbits <= base orbits (index <= {max_index}, n <= {max_n})",
               "k <= m", f"{len(bad)} violations" if bad else "k <= m", not bad,
               checked=checked, violations=bad[:20])
    ]


def check_classification(trials: int = 200, seed: int = 0) -> list[Finding]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        while True:
            m = tuple(tuple(rng.randint(-9, 9) for _ in range(2)) for _ in range(2))
            if lat.det(m) != 0:
                break
        u = random_unimodular(rng)
        g = rng.choice([tl.D6, tl.D4])
        a = rng.choice(g)
        if lat.hnf(lat.matmul(m, u)) != lat.hnf(m):
            bad += 1
        if lat.canonical_under_pointgroup(m, g) != lat.canonical_under_pointgroup(lat.matmul(a, m), g):
            bad += 1
    out = [
        _check("lemma-equl", f"{trials} randomized hnf / canonical-form checks", 0, bad, bad == 0)
    ]
    x = quotient("4^4", ((3, 0), (0, 3)))
    cl = cv.classify_covers(x, 2)
    merged = [[str(d.hnf_in_K) for d in g] for g in cl.merged_classes]
    pair = any({"2,0,0,1", "1,0,0,2"} <= set(g) for g in merged)
    out.append(
        _check("lemma-isomm", "4^4 3I, n=2: merged classes <= sigma(2), 6x3 and 3x6 merged",
               {"sigma": 3, "merged": "<=3"}, {"sigma": len(cl.paper_classes), "merged": len(merged)},
               len(cl.paper_classes) == 3 and len(merged) <= 3 and pair, merged=merged)
    )
    out.append(
        _record("thm-main3.classes", "sigma(2) count vs isomorphism classes (4^4 3I, n=2)",
                3, len(merged), merged=merged)
    )
    return out


def random_unimodular(rng: random.Random, steps: int = 6) -> lat.Matrix:
    u = ((1, 0), (0, 1))
    elems = [((1, 1), (0, 1)), ((1, -1), (0, 1)), ((1, 0), (1, 1)), ((1, 0), (-1, 1)),
             ((0, 1), (1, 0)), ((-1, 0), (0, 1))]
    for _ in range(steps):
        u = lat.matmul(u, rng.choice(elems))
    return u


def associated_map(x: ToroidalMap) -> ToroidalMap:
    """``X^# = E^# / (M K)`` with ``M`` the stored basis change."""
    tag, m = tl.associated_equivelar(x.tag)
    return quotient(tag, lat.matmul(m, x.lattice))


def check_associated(max_index: int = 9) -> list[Finding]:
    out = []
    for tag in ("3.4.6.4", "3.12^2"):
        claim = "lemma-X-9" if tag == "3.4.6.4" else "lemma-X-8"
        dev = []
        total = 0
        for h in hnf_lattices(max_index):
            x = quotient(tag, h.matrix)
            if not x.polyhedral:
                continue
            total += 1
            a = orbit_report(x).edge_orbit_count
            b = orbit_report(associated_map(x)).edge_orbit_count
            if a != 2 * b:
                dev.append(f"{h}: m={a}, m#={b}")
        _, mat = tl.associated_equivelar(tag)
        out.append(
            _record(claim, f"m(X) = 2 m(X#) for {tag}, index <= {max_index}", "m = 2 m#",
                    f"{total - len(dev)}/{total} agree", basis_matrix=lat.format_matrix(mat),
                    deviations=dev)
        )
    return out


def check_plane_counts() -> list[Finding]:
    out = []
    for t in tl.TilingType:
        til = tl.build_tiling(t)
        if t in tl.EDGE_HOMOGENEOUS:
            from .symmetry import central_inversion_group

            got = plane_edge_orbits(til, 5, central_inversion_group(til))
            group = "<alpha, beta, chi>"
        else:
            got = plane_edge_orbits(til, 5)
            group = "full symmetry group"
        status_ok = got == til.plane_edge_orbit_count
        f = _record("lemma-uni", f"edge orbits of {t.value} under its {group}",
                    til.plane_edge_orbit_count, got, agrees=status_ok)
        out.append(f)
    return out


def property_suite(max_index: int = 16, tags: Optional[Iterable] = None) -> list[Finding]:
    tags = list(tags or tl.TilingType)
    problems: dict[str, list[str]] = {k: [] for k in ("euler", "scaling", "flags", "roundtrip", "closure")}
    checked = 0
    for tag in tags:
        t = tl.build_tiling(tag)
        cv_, ce, cf = t.counts
        for h in hnf_lattices(max_index):
            checked += 1
            m = quotient(t, h.matrix)
            name = f"{t.tag} {h}"
            if m.euler_characteristic != 0:
                problems["euler"].append(name)
            if m.counts != (cv_ * h.index, ce * h.index, cf * h.index):
                problems["scaling"].append(name)
            fs = flag_system(m)
            try:
                fs.check()
            except ValueError:
                problems["flags"].append(name)
            if not roundtrip_ok(m):
                problems["roundtrip"].append(name)
            if not closure_ok(m):
                problems["closure"].append(name)
    bad = {k: v[:10] for k, v in problems.items() if v}
    return [
        _check("properties", f"Euler, scaling, flag axioms, round trip, group closure (index <= {max_index})",
               "all hold", "all hold" if not bad else bad, not bad, quotients=checked)
    ]


def _same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    pairs = np.unique(np.stack([a, b]), axis=1).shape[1]
    return pairs == np.unique(a).size == np.unique(b).size


def roundtrip_ok(m: ToroidalMap) -> bool:
    fs = flag_system(m)
    v, e, f, labels = reconstruct(fs)
    if (v, e, f) != m.counts:
        return False
    return all(
        _same_partition(np.asarray(lab), arr)
        for lab, arr in zip(labels, (fs.flag_vertex, fs.flag_edge, fs.flag_face))
    )


def closure_ok(m: ToroidalMap) -> bool:
    """Generators and their products are automorphisms; order bounds hold."""
    fs = flag_system(m)
    grp = automorphism_group(fs)
    gens = list(grp.generators)
    elems = gens + [g[h] for g in gens for h in gens]
    for p in elems:
        for s in (fs.s0, fs.s1, fs.s2):
            if not np.array_equal(p[s], s[p]):
                return False
        if p[grp.base] not in set(grp.base_orbit.tolist()):
            return False
    # translations of the tiling always descend to the quotient
    return grp.order % m.index == 0 and grp.order <= fs.size


# ---------------------------------------------------------------------------
# the harness

CHECKS: dict[str, Callable[[], list[Finding]]] = {
    "thm-main3": lambda: check_sigma(12),
    "thm:no-of-orbits": lambda: check_sharpness()
    + [f for t in EDGE_HOMOGENEOUS_BOUNDS for f in bound_findings(t, 16, require_attained=True)],
    "edge-no-of-orbits": lambda: [f for t in SEMI_EQUIVELAR_BOUNDS for f in bound_findings(t, 10)],
    "thm-main1": check_symmetric_cover,
    "thm-main2": check_stretch,
    "prop2": check_duals,
    "lemma-orbb": check_monotone,
    "lemma-isomm": check_classification,
    "lemma-X": check_associated,
    "lemma-uni": check_plane_counts,
    "properties": property_suite,
}


@dataclass
class RunReport:
    command: list[str]
    input_digest: str
    findings: list[Finding]
    wall_time: float

    @property
    def failed(self) -> bool:
        return any(f.status == FAIL for f in self.findings)

    def to_dict(self, include_time: bool = True) -> dict:
        out = {
            "command": self.command,
            "input_digest": self.input_digest,
            "results": {
                "pass": sum(f.status == PASS for f in self.findings),
                "fail": sum(f.status == FAIL for f in self.findings),
                "recorded": sum(f.status == RECORDED for f in self.findings),
            },
            "findings": [f.to_dict() for f in self.findings],
        }
        if include_time:
            out["wall_time"] = round(self.wall_time, 3)
        return out


def run(only: Optional[Iterable[str]] = None, command: Optional[list[str]] = None) -> RunReport:
    names = sorted(CHECKS)
    if only:
        wanted = list(only)
        unknown = [w for w in wanted if not any(n == w or n.startswith(w) for n in names)]
        if unknown:
            raise KeyError(f"unknown claim group(s): {', '.join(unknown)}")
        names = [n for n in names if any(n == w or n.startswith(w) for w in wanted)]
    start = time.perf_counter()
    findings: list[Finding] = []
    for name in names:
        findings.extend(CHECKS[name]())
    findings.sort(key=lambda f: f.claim)
    digest = hashlib.sha256(json.dumps(names).encode()).hexdigest()[:16]
    return RunReport(command or ["reproduce"], digest, findings, time.perf_counter() - start)
