"""Hot inner loops, each with a numba-compiled and a pure-numpy implementation.

The numba path is used when numba imports and ``PCENTERED_NO_NUMBA`` is unset
(or ``0``). Both paths return identical results; tests compare them directly.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


def _numba_disabled() -> bool:
    return os.environ.get("PCENTERED_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")


BACKEND = "numba" if HAVE_NUMBA and not _numba_disabled() else "numpy"


# -- color-subset scan -----------------------------------------------------
#
# For each row of ``subsets`` (color ids, padded with -1) take the vertices
# whose color is in the row, split them into connected components and flag
# every component in which no color occurs exactly once. The result is the
# smallest flagged component by (size, sorted vertex list) together with the
# row index it came from, or (-1, empty) when nothing is flagged. With
# ``stop_at_first`` the scan ends after the first row that flags anything.


@njit(cache=True)
def _lex_less(a, b, size):
    for i in range(size):
        if a[i] != b[i]:
            return a[i] < b[i]
    return False


@njit(cache=True)
def _scan_subsets_jit(indptr, indices, colors, order, cptr, subsets, ncolors, stop_at_first):
    n = colors.shape[0]
    allowed = np.zeros(ncolors, np.bool_)
    stamp = np.full(n, -1, np.int64)
    counts = np.zeros(ncolors, np.int64)
    stack = np.empty(max(n, 1), np.int64)
    members = np.empty(max(n, 1), np.int64)
    best = np.empty(max(n, 1), np.int64)
    best_len = n + 1
    best_sub = -1
    width = subsets.shape[1]
    for si in range(subsets.shape[0]):
        for j in range(width):
            c = subsets[si, j]
            if c >= 0:
                allowed[c] = True
        found = False
        for j in range(width):
            c = subsets[si, j]
            if c < 0:
                continue
            for idx in range(cptr[c], cptr[c + 1]):
                v = order[idx]
                if stamp[v] == si:
                    continue
                stamp[v] = si
                stack[0] = v
                sp = 1
                size = 0
                while sp > 0:
                    sp -= 1
                    x = stack[sp]
                    members[size] = x
                    size += 1
                    counts[colors[x]] += 1
                    for e in range(indptr[x], indptr[x + 1]):
                        w = indices[e]
                        if stamp[w] != si and allowed[colors[w]]:
                            stamp[w] = si
                            stack[sp] = w
                            sp += 1
                unique = False
                for k in range(size):
                    if counts[colors[members[k]]] == 1:
                        unique = True
                for k in range(size):
                    counts[colors[members[k]]] = 0
                if not unique:
                    found = True
                    comp = np.sort(members[:size])
                    if size < best_len or (size == best_len and _lex_less(comp, best, size)):
                        best[:size] = comp
                        best_len = size
                        best_sub = si
        for j in range(width):
            c = subsets[si, j]
            if c >= 0:
                allowed[c] = False
        if stop_at_first and found:
            break
    if best_sub < 0:
        return best_sub, np.empty(0, np.int64)
    return best_sub, best[:best_len].copy()


def _scan_subsets_numpy(indptr, indices, colors, order, cptr, subsets, ncolors, stop_at_first):
    n = colors.shape[0]
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    dst = indices
    best: tuple[int, ...] | None = None
    best_sub = -1
    for si in range(subsets.shape[0]):
        row = subsets[si]
        allowed = np.zeros(ncolors, dtype=bool)
        allowed[row[row >= 0]] = True
        active = allowed[colors]
        if not active.any():
            continue
        emask = active[src] & active[dst]
        es, ed = src[emask], dst[emask]
        labels = np.where(active, np.arange(n, dtype=np.int64), n)
        # min-label propagation with pointer jumping until stable
        while True:
            new = labels.copy()
            np.minimum.at(new, es, labels[ed])
            new[active] = new[new[active]]
            if np.array_equal(new, labels):
                break
            labels = new
        verts = np.flatnonzero(active)
        lab = labels[verts]
        keys = lab * ncolors + colors[verts]
        uk, cnt = np.unique(keys, return_counts=True)
        comps = np.unique(lab)
        good = np.unique(uk[cnt == 1] // ncolors)
        bad = np.setdiff1d(comps, good, assume_unique=True)
        if bad.size == 0:
            continue
        sizes = np.array([np.count_nonzero(lab == b) for b in bad])
        smin = sizes.min()
        cands = [tuple(verts[lab == b].tolist()) for b in bad[sizes == smin]]
        cand = min(cands)
        if best is None or (len(cand), cand) < (len(best), best):
            best = cand
            best_sub = si
        if stop_at_first:
            break
    if best is None:
        return -1, np.empty(0, np.int64)
    return best_sub, np.asarray(best, dtype=np.int64)


def color_index(colors: np.ndarray, ncolors: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertices grouped by color: ``order[cptr[c]:cptr[c+1]]`` are the vertices of color c."""
    order = np.argsort(colors, kind="stable").astype(np.int64)
    cptr = np.zeros(ncolors + 1, dtype=np.int64)
    np.cumsum(np.bincount(colors, minlength=ncolors), out=cptr[1:])
    return order, cptr


def scan_subsets(indptr, indices, colors, subsets, ncolors, stop_at_first=False, backend=None):
    colors = np.ascontiguousarray(colors, dtype=np.int64)
    subsets = np.ascontiguousarray(subsets, dtype=np.int64)
    if subsets.ndim != 2 or subsets.shape[0] == 0 or colors.shape[0] == 0:
        return -1, np.empty(0, np.int64)
    order, cptr = color_index(colors, ncolors)
    fn = _scan_subsets_jit if (backend or BACKEND) == "numba" else _scan_subsets_numpy
    si, verts = fn(indptr, indices, colors, order, cptr, subsets, ncolors, bool(stop_at_first))
    return int(si), verts


# -- realized-structure counting -------------------------------------------
#
# ``present`` is a (samples, candidate edges) boolean matrix, ``structures`` a
# (structures, edges per structure) index matrix into its columns. Returns the
# number of fully present structures per sample.


@njit(cache=True)
def _count_realized_jit(present, structures):
    out = np.zeros(present.shape[0], np.int64)
    for s in range(present.shape[0]):
        total = 0
        for k in range(structures.shape[0]):
            ok = True
            for j in range(structures.shape[1]):
                if not present[s, structures[k, j]]:
                    ok = False
                    break
            if ok:
                total += 1
        out[s] = total
    return out


def _count_realized_numpy(present, structures):
    out = np.empty(present.shape[0], dtype=np.int64)
    step = max(1, (1 << 24) // max(1, structures.size))
    for a in range(0, present.shape[0], step):
        block = present[a : a + step]
        out[a : a + step] = block[:, structures].all(axis=2).sum(axis=1)
    return out


def count_realized(present, structures, backend=None):
    present = np.ascontiguousarray(present, dtype=np.bool_)
    structures = np.ascontiguousarray(structures, dtype=np.int64)
    if structures.shape[0] == 0:
        return np.zeros(present.shape[0], dtype=np.int64)
    fn = _count_realized_jit if (backend or BACKEND) == "numba" else _count_realized_numpy
    return fn(present, structures)
