"""Compare the numba and numpy flag-search backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each backend runs in a fresh interpreter because the backend is chosen at
import time from TORMAP_BACKEND.
"""

import argparse
import json
import os
import subprocess
import sys

CASES = [
    ("3^6", "5,0,0,3"),
    ("4.6.12", "4,0,1,4"),
    ("3^6", "15,0,0,15"),
    ("3^6", "75,0,0,45"),
]

WORKER = """
import json, sys, time
from tormap import kernels, lattice as lat
from tormap.symmetry import automorphism_group
from tormap.torusmap import flag_system, quotient
repeat = int(sys.argv[1])
out = []
for tag, mat in json.loads(sys.argv[2]):
    fs = flag_system(quotient(tag, lat.parse_matrix(mat)))
    automorphism_group(fs)  # warm-up (jit compile, caches)
    best = min(
        (lambda t: (automorphism_group(fs), time.perf_counter() - t)[1])(time.perf_counter())
        for _ in range(repeat)
    )
    out.append({"case": f"{tag} {mat}", "flags": fs.size,
                "aut": automorphism_group(fs).order, "seconds": best})
print(json.dumps({"backend": kernels.BACKEND, "rows": out}))
"""


def run_backend(name: str, repeat: int) -> dict:
    env = dict(os.environ, TORMAP_BACKEND=name)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(repeat), json.dumps(CASES)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    nb = run_backend("numba", args.repeat)
    np_ = run_backend("numpy", args.repeat)
    print(f"{'case':<20} {'flags':>7} {'|Aut|':>6} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    for a, b in zip(nb["rows"], np_["rows"]):
        if a["aut"] != b["aut"]:
            raise SystemExit(f"backends disagree on {a['case']}: {a['aut']} vs {b['aut']}")
        print(f"{a['case']:<20} {a['flags']:>7} {a['aut']:>6} {a['seconds']:>9.4f} "
              f"{b['seconds']:>9.4f} {b['seconds'] / a['seconds']:>7.1f}x")


if __name__ == "__main__":
    main()
