"""Pure-numpy kernels: the fallback backend.

Every routine here has a compiled twin in ``_fast.pyx`` with identical
semantics; ``weaklab.kernels`` picks whichever is importable.  Cube
geometry arrives as flat cell segments: cube ``k`` owns segments
``cube_offsets[k]:cube_offsets[k+1]`` of ``seg_starts``/``seg_ends``
(half-open cell ranges in the flattened grid).  Segments are never empty.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"


def _segment_reduce(ufunc, values, starts, ends, identity):
    idx = np.empty(2 * len(starts), dtype=np.intp)
    idx[0::2] = starts
    idx[1::2] = ends
    padded = np.append(values, identity)
    return ufunc.reduceat(padded, idx)[0::2]


def cube_sums(values, seg_starts, seg_ends, cube_offsets):
    """Per-cube sum of ``values`` over the cube's cells."""
    seg = _segment_reduce(np.add, values, seg_starts, seg_ends, 0.0)
    return np.add.reduceat(np.append(seg, 0.0), cube_offsets[:-1])


def cube_mins(values, seg_starts, seg_ends, cube_offsets):
    seg = _segment_reduce(np.minimum, values, seg_starts, seg_ends, np.inf)
    return np.minimum.reduceat(np.append(seg, np.inf), cube_offsets[:-1])


def cube_maxs(values, seg_starts, seg_ends, cube_offsets):
    seg = _segment_reduce(np.maximum, values, seg_starts, seg_ends, -np.inf)
    return np.maximum.reduceat(np.append(seg, -np.inf), cube_offsets[:-1])


def cube_weak_norms(fvals, masses, seg_starts, seg_ends, cube_offsets, invp):
    """Per-cube weak Lorentz functional sup_t t*(mass{f >= t})^invp.

    Exact for step functions: the sup over t is attained at t -> v- for a
    cell value v, so scanning cumulative masses in descending-value order
    enumerates all candidates.
    """
    ncubes = len(cube_offsets) - 1
    out = np.zeros(ncubes)
    for k in range(ncubes):
        lo, hi = cube_offsets[k], cube_offsets[k + 1]
        if hi - lo == 1:
            s, e = seg_starts[lo], seg_ends[lo]
            f = fvals[s:e]
            m = masses[s:e]
        else:
            parts = [(fvals[seg_starts[j]:seg_ends[j]],
                      masses[seg_starts[j]:seg_ends[j]]) for j in range(lo, hi)]
            f = np.concatenate([p[0] for p in parts])
            m = np.concatenate([p[1] for p in parts])
        order = np.argsort(-f, kind="stable")
        fs = f[order]
        cm = np.cumsum(m[order])
        pos = fs > 0.0
        if pos.any():
            out[k] = np.max(fs[pos] * cm[pos] ** invp)
    return out


def paint_max(out, seg_starts, seg_ends, cube_offsets, cube_values):
    """out[cell] = max(out[cell], cube value) over all cubes covering it."""
    ncubes = len(cube_offsets) - 1
    for k in range(ncubes):
        v = cube_values[k]
        for j in range(cube_offsets[k], cube_offsets[k + 1]):
            s, e = seg_starts[j], seg_ends[j]
            np.maximum(out[s:e], v, out=out[s:e])
    return out


def sup_scan_rows(h, delta, power):
    """Row-wise sup_k a_k * (k*delta)^power over descending positive a_k.

    Evaluates sup_t t*|{h > t}|^power exactly on step data (candidates sit
    just below each attained value; duplicates only add dominated
    candidates).
    """
    h = np.asarray(h, dtype=np.float64)
    a = np.sort(h, axis=1)[:, ::-1]
    k = np.arange(1, h.shape[1] + 1, dtype=np.float64)
    cand = a * (k * delta) ** power
    cand[a <= 0.0] = 0.0
    return cand.max(axis=1) if h.shape[1] else np.zeros(h.shape[0])
