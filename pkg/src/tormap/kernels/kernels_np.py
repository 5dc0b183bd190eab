"""Pure numpy kernels."""

from __future__ import annotations

from collections import deque

import numpy as np


def bfs_tree(table: np.ndarray, base: int):
    """Spanning tree of the flag graph rooted at ``base``.

    Returns ``(order, parent, gen, layers)``: flags in BFS order, the parent
    and generator index reaching each flag, and layer boundaries in ``order``.
    """
    n = table.shape[1]
    parent = np.full(n, -1, dtype=np.int64)
    gen = np.full(n, -1, dtype=np.int64)
    depth = np.full(n, -1, dtype=np.int64)
    order = [base]
    depth[base] = 0
    q = deque([base])
    while q:
        x = q.popleft()
        for j in range(table.shape[0]):
            y = int(table[j, x])
            if depth[y] < 0:
                depth[y] = depth[x] + 1
                parent[y] = x
                gen[y] = j
                order.append(y)
                q.append(y)
    order = np.asarray(order, dtype=np.int64)
    d = depth[order]
    layers = np.flatnonzero(np.diff(d)) + 1
    bounds = np.concatenate([[0], layers, [len(order)]]).astype(np.int64)
    return order, parent, gen, bounds


def cycle_lengths(perm: np.ndarray) -> np.ndarray:
    """Length of the cycle through each point of a permutation."""
    n = perm.shape[0]
    out = np.zeros(n, dtype=np.int64)
    ids = np.arange(n)
    cur = perm.copy()
    k = 1
    while True:
        hit = (cur == ids) & (out == 0)
        out[hit] = k
        if out.all():
            return out
        cur = perm[cur]
        k += 1


def extend_batch(src, dst, order, parent, gen, bounds, cands):
    """Try each candidate image of ``order[0]``; return ``(ok, images)``.

    Images are propagated layer by layer for the whole batch and then checked
    against every involution at once.
    """
    cands = np.asarray(cands, dtype=np.int64)
    k, n = cands.shape[0], src.shape[1]
    img = np.empty((k, n), dtype=np.int64)
    img[:, order[0]] = cands
    for a, b in zip(bounds[1:-1], bounds[2:]):
        layer = order[a:b]
        img[:, layer] = dst[gen[layer][None, :], img[:, parent[layer]]]
    ok = np.ones(k, dtype=bool)
    for j in range(src.shape[0]):
        ok &= np.all(img[:, src[j]] == dst[j][img], axis=1)
    return ok, img
