"""numba kernels; same contract as :mod:`kernels_np`."""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def _extend_one(src, dst, order, parent, gen, pos, c, img):
    n = order.shape[0]
    img[order[0]] = c
    for i in range(n):
        x = order[i]
        if i > 0:
            img[x] = dst[gen[x], img[parent[x]]]
        ix = img[x]
        # every edge to an already-placed flag must agree
        for j in range(src.shape[0]):
            y = src[j, x]
            if pos[y] <= i and img[y] != dst[j, ix]:
                return False
    return True


@numba.njit(cache=True, nogil=True, parallel=True)
def _extend_many(src, dst, order, parent, gen, pos, cands, ok, imgs):
    for t in numba.prange(cands.shape[0]):
        ok[t] = _extend_one(src, dst, order, parent, gen, pos, cands[t], imgs[t])


def extend_batch(src, dst, order, parent, gen, bounds, cands):
    cands = np.asarray(cands, dtype=np.int64)
    n = src.shape[1]
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    ok = np.zeros(cands.shape[0], dtype=np.bool_)
    imgs = np.empty((cands.shape[0], n), dtype=np.int64)
    _extend_many(src, dst, order, parent, gen, pos, cands, ok, imgs)
    return ok, imgs
