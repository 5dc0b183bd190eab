"""Flag-propagation kernels.

``TORMAP_BACKEND=numpy`` forces the pure-numpy implementation; the default
uses numba when it imports cleanly and falls back to numpy otherwise.
"""

from __future__ import annotations

import os

from . import kernels_np

# the bundled TBB is too old for numba; avoid its warning
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

BACKEND = os.environ.get("TORMAP_BACKEND", "numba").strip().lower()
if BACKEND not in ("numba", "numpy"):
    raise ImportError(f"TORMAP_BACKEND must be 'numba' or 'numpy', not {BACKEND!r}")

if BACKEND == "numba":
    try:
        from . import kernels_nb as _impl
    except ImportError:  # pragma: no cover - numba missing
        BACKEND = "numpy"
        _impl = kernels_np
else:
    _impl = kernels_np

extend_batch = _impl.extend_batch
bfs_tree = kernels_np.bfs_tree
cycle_lengths = kernels_np.cycle_lengths


def set_threads(n: int | None) -> None:
    if n and BACKEND == "numba":
        import numba

        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


__all__ = ["BACKEND", "extend_batch", "bfs_tree", "cycle_lengths", "set_threads", "kernels_np"]
