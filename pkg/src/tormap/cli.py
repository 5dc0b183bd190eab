"""``tormap`` command-line interface."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import covers as cv
from . import kernels
from . import lattice as lat
from . import reproduce as rp
from . import tilings as tl
from .symmetry import orbit_report
from .torusmap import (
    MapError,
    ToroidalMap,
    dual_map,
    load_map,
    map_to_json,
    quotient,
    to_dot,
)

EXIT_OK, EXIT_CLAIM, EXIT_USAGE = 0, 1, 2
SCHEMA_PATH = Path(__file__).with_name("report.schema.json")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _emit(args, payload, text: Optional[str] = None) -> None:
    if args.json or text is None:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _matrix(text: str, flag: str) -> lat.Matrix:
    try:
        m = lat.parse_matrix(text)
    except lat.LatticeError as exc:
        raise UsageError(f"{flag}: {exc}") from exc
    if lat.det(m) == 0:
        raise UsageError(f"{flag}: singular matrix {text}")
    return m


def _tag(text: str, flag: str = "--tiling") -> tl.TilingType:
    try:
        return tl.parse_tag(text)
    except tl.TilingError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _load(spec: str, args, analysis: bool = True) -> ToroidalMap:
    """A map from ``map.json`` or inline ``TAG@a,c,b,d``."""
    if "@" in spec and not os.path.exists(spec):
        tag, mat = spec.split("@", 1)
        m = quotient(_tag(tag, "MAP"), _matrix(mat, "MAP"))
    else:
        try:
            m = load_map(spec)
        except OSError as exc:
            raise UsageError(f"MAP: cannot read {spec}: {exc.strerror}") from exc
        except (MapError, ValueError, tl.TilingError, lat.LatticeError) as exc:
            raise UsageError(f"MAP: {exc}") from exc
    if analysis and not getattr(args, "allow_degenerate", False) and not m.polyhedral:
        raise UsageError(f"MAP: {m!r} is not polyhedral (use --allow-degenerate)")
    return m


def _write(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _table(rows: list[list], header: list[str]) -> str:
    cols = list(zip(header, *rows))
    widths = [max(len(str(x)) for x in c) for c in cols]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*(str(x) for x in r)) for r in rows]
    return "\n".join(line.rstrip() for line in lines)


# ---------------------------------------------------------------------------
# subcommands


def cmd_tilings(args) -> int:
    rows = [tl.build_tiling(t).summary() for t in tl.TilingType]
    text = _table(
        [[r["tag"], r["vertex_type"] or "mixed", r["edge_symbol"] or "-", r["cell_vertices"],
          r["cell_edges"], r["cell_faces"], r["plane_edge_orbits"]] for r in rows],
        ["tag", "vertex type", "edge symbol", "V", "E", "F", "plane orbits"],
    )
    _emit(args, rows, text)
    return EXIT_OK


def cmd_lattice_hnf(args) -> int:
    m = _matrix(args.matrix, "--matrix")
    h, u = lat.hnf_with_transform(m)
    payload = {"matrix": lat.flatten(m), "hnf": h.flat(), "transform": lat.flatten(u), "index": h.index}
    _emit(args, payload, f"hnf {h}  (U = {lat.format_matrix(u)}, index {h.index})")
    return EXIT_OK


def cmd_lattice_sublattices(args) -> int:
    if args.n < 1:
        raise UsageError("--n: must be positive")
    forms = lat.sublattices_of_index(args.n)
    _emit(args, [h.flat() for h in forms], "\n".join(str(h) for h in forms))
    return EXIT_OK


def cmd_quotient(args) -> int:
    m = quotient(_tag(args.tiling), _matrix(args.lattice, "--lattice"))
    if args.out:
        _write(args.out, map_to_json(m) + "\n")
    v, e, f = m.counts
    payload = {"tiling": m.tag, "lattice": lat.flatten(m.lattice), "V": v, "E": e, "F": f,
               "polyhedral": m.polyhedral}
    _emit(args, payload, f"{m.tag} {lat.format_matrix(m.lattice)}: V={v} E={e} F={f} "
          f"polyhedral={str(m.polyhedral).lower()}")
    return EXIT_OK


def cmd_orbits(args) -> int:
    m = _load(args.map, args, analysis=False)
    rep = orbit_report(m)
    payload = {"tiling": m.tag, "lattice": lat.flatten(m.lattice), "polyhedral": m.polyhedral,
               **rep.to_dict(full=args.full)}
    reps = " ".join(str(o[0]) for o in rep.edge_orbits)
    _emit(args, payload, f"aut_order={rep.aut_order} m={rep.edge_orbit_count} representatives: {reps}")
    return EXIT_OK


def cmd_dual(args) -> int:
    m = _load(args.map, args, analysis=False)
    d = dual_map(m)
    if args.out:
        if d.tag not in {t.value for t in tl.TilingType}:
            raise UsageError(f"--out: the dual of {m.tag} has no tiling tag to serialize")
        _write(args.out, map_to_json(d) + "\n")
    v, e, f = d.counts
    payload = {"tiling": d.tag, "lattice": lat.flatten(d.lattice), "V": v, "E": e, "F": f}
    _emit(args, payload, f"{d.tag} {lat.format_matrix(d.lattice)}: V={v} E={e} F={f}")
    return EXIT_OK


def _descs(args, descs, orbits: bool = True) -> int:
    payload = [d.to_dict(d.edge_orbits() if orbits else None) for d in descs]
    text = _table(
        [[lat.format_matrix(p["lattice"]), lat.format_matrix(p["hnf_in_K"]), p["sheets"],
          p.get("edge_orbits", "-")] for p in payload],
        ["lattice", "hnf in K", "sheets", "edge orbits"],
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_covers(args) -> int:
    x = _load(args.map, args)
    return _descs(args, cv.covers_of(x, args.n))


def cmd_stretch(args) -> int:
    x = _load(args.map, args)
    return _descs(args, [cv.stretch_cover(x, args.n)])


def cmd_symmetric(args) -> int:
    x = _load(args.map, args)
    try:
        d = cv.symmetric_cover(x, method=args.method, stage=args.stage)
    except tl.UnsupportedTilingError as exc:
        raise UsageError(f"MAP: {exc}") from exc
    return _descs(args, [d])


def cmd_minimal(args) -> int:
    x = _load(args.map, args)
    try:
        d, _ = cv.minimal_k_orbital_cover(x, args.k, args.max_sheets)
    except cv.CoverNotFoundError as exc:
        _emit(args, {"status": "not_found", "k": args.k, "max_sheets": args.max_sheets}, str(exc))
        return EXIT_OK
    return _descs(args, [d])


def cmd_classify(args) -> int:
    x = _load(args.map, args)
    cl = cv.classify_covers(x, args.n)
    payload = {
        "paper_classes": [d.to_dict() for d in cl.paper_classes],
        "merged_classes": [[d.to_dict() for d in g] for g in cl.merged_classes],
        "paper_count": len(cl.paper_classes),
        "merged_count": len(cl.merged_classes),
    }
    text = "\n".join(
        [f"HNF classes: {len(cl.paper_classes)} (sigma({args.n}))",
         f"isomorphism classes: {len(cl.merged_classes)}"]
        + [f"  {' ~ '.join(str(d.hnf_in_K) for d in g)}" for g in cl.merged_classes]
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_verify_bounds(args) -> int:
    if args.tiling == "all":
        tags = [t.value for t in tl.TilingType]
    else:
        tags = [_tag(t).value for t in args.tiling.split(",")]
    findings = [f for t in tags for f in rp.bound_findings(t, args.max_index)]
    rows = [[f.detail["tag"], f.detail["checked"], ",".join(map(str, f.detail["observed_values"])),
             ("=" if f.detail["tag"] in rp.EXACT else "<=") + str(f.expected), f.status]
            for f in findings]
    _emit(args, [f.to_dict() for f in findings],
          _table(rows, ["tag", "polyhedral", "observed m", "bound", "status"]))
    return EXIT_CLAIM if any(f.status == rp.FAIL for f in findings) else EXIT_OK


def cmd_reproduce(args) -> int:
    try:
        report = rp.run(args.only, command=["reproduce", *(args.only or [])])
    except KeyError as exc:
        raise UsageError(f"--only: {exc.args[0]}") from exc
    payload = report.to_dict(include_time=not args.no_time)
    if args.json:
        validate_report(payload)
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        rows = [[f.status.upper(), f.claim, f.description, _short(f.expected), _short(f.observed)]
                for f in report.findings]
        print(_table(rows, ["status", "claim", "check", "expected", "observed"]))
        r = payload["results"]
        print(f"\n{r['pass']} pass, {r['fail']} fail, {r['recorded']} recorded")
    return EXIT_CLAIM if report.failed else EXIT_OK


def _short(x) -> str:
    s = x if isinstance(x, str) else json.dumps(x, sort_keys=True)
    return s if len(s) <= 48 else s[:45] + "..."


def validate_report(payload: dict) -> None:
    import jsonschema

    schema = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    jsonschema.validate(payload, schema)


def cmd_export(args) -> int:
    m = _load(args.map, args, analysis=False)
    if args.format == "dot":
        _write(args.out, to_dot(m))
    else:
        _write(args.out, map_to_json(m) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker threads for the numba kernels")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="reserved; all algorithms are deterministic")

    p = _Parser(prog="tormap", description="Semi-equivelar toroidal maps, their symmetries and covers.",
                parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, **kw):
        sp = sub.add_parser(name, help=help_, parents=[common], **kw)
        sp.set_defaults(func=func)
        return sp

    def degenerate(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--require-polyhedral", dest="allow_degenerate", action="store_false",
                       help="reject non-polyhedral maps (default)")
        g.add_argument("--allow-degenerate", dest="allow_degenerate", action="store_true",
                       help="accept non-polyhedral maps")
        sp.set_defaults(allow_degenerate=False)

    map_help = "map.json file or inline TAG@a,c,b,d"

    sp = sub.add_parser("tilings", help="tiling catalogue", parents=[common])
    tsub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    tsub.add_parser("list", parents=[common]).set_defaults(func=cmd_tilings)

    sp = sub.add_parser("lattice", help="lattice utilities", parents=[common])
    lsub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    h = lsub.add_parser("hnf", parents=[common])
    h.add_argument("--matrix", required=True, help="a,c,b,d")
    h.set_defaults(func=cmd_lattice_hnf)
    s = lsub.add_parser("sublattices", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_lattice_sublattices)

    sp = add("quotient", cmd_quotient, "build tiling / lattice")
    sp.add_argument("--tiling", required=True)
    sp.add_argument("--lattice", required=True, help="a,c,b,d")
    sp.add_argument("--out")

    sp = add("orbits", cmd_orbits, "automorphism group order and edge orbits")
    sp.add_argument("map", help=map_help)
    sp.add_argument("--full", action="store_true", help="include full partitions")

    sp = add("dual", cmd_dual, "dual map")
    sp.add_argument("map", help=map_help)
    sp.add_argument("--out")

    for name, func, extra in (
        ("covers", cmd_covers, "n"),
        ("classify", cmd_classify, "n"),
        ("stretch-cover", cmd_stretch, "n"),
    ):
        sp = add(name, func, f"{name.replace('-', ' ')}")
        sp.add_argument("map", help=map_help)
        sp.add_argument("--n", type=int, required=True)
        degenerate(sp)

    sp = add("symmetric-cover", cmd_symmetric, "orbit-reducing symmetric cover")
    sp.add_argument("map", help=map_help)
    sp.add_argument("--method", choices=["scaled", "invariant"], default="scaled")
    sp.add_argument("--stage", type=int, choices=[1, 2], default=1)
    degenerate(sp)

    sp = add("minimal-cover", cmd_minimal, "least-sheet k-orbital cover")
    sp.add_argument("map", help=map_help)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--max-sheets", type=int, required=True)
    degenerate(sp)

    sp = add("verify-bounds", cmd_verify_bounds, "edge-orbit bound sweeps")
    sp.add_argument("--tiling", default="all")
    sp.add_argument("--max-index", type=int, required=True)

    sp = add("reproduce", cmd_reproduce, "regenerate the claims table")
    sp.add_argument("--only", action="append", help="claim group prefix (repeatable)")
    sp.add_argument("--no-time", action="store_true", help="omit wall time for byte-stable output")

    sp = add("export", cmd_export, "export a map")
    sp.add_argument("map", help=map_help)
    sp.add_argument("--format", choices=["dot", "json"], default="json")
    sp.add_argument("--out")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        for key, default in (("json", False), ("threads", None), ("seed", None)):
            if not hasattr(args, key):
                setattr(args, key, default)
        kernels.set_threads(args.threads)
        return args.func(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
