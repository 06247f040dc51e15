"""Graph constructors: the recursive hard family, G(n, q), and small standard graphs."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import InputError, MaterializationError, limits
from .graph import Graph, subdivide


@dataclass(frozen=True)
class FamilyParams:
    """Parameters of the recursive family.

    ``base_size`` is the number of vertices of the edgeless base graphs and
    ``s`` the subdivision length used by :func:`debski_subdivided`
    (``None`` means ``6 * t``).
    """

    p: int
    t: int
    base_size: int = 2
    s: int | None = None

    def __post_init__(self) -> None:
        if self.p < 0 or self.t < 0:
            raise InputError("p and t must be >= 0")
        if self.base_size < 2:
            raise InputError("base_size must be >= 2")
        if self.s is not None and self.s < 0:
            raise InputError("subdivision length must be >= 0")

    @property
    def subdivision(self) -> int:
        return 6 * self.t if self.s is None else self.s


@lru_cache(maxsize=None)
def _size(pi: int, tau: int, b: int) -> tuple[int, int]:
    if pi == 0 or tau == 0:
        return b, 0
    nb, eb = _size(pi - 1, tau, b)
    nc, ec = _size(pi, tau - 1, b)
    return nb * (1 + nc), eb + nb * (ec + nc)


def debski_size(params: FamilyParams) -> tuple[int, int]:
    """Exact (vertex count, edge count) of the family member, without building it."""
    # iterate the table bottom-up so deep parameters never hit the recursion limit
    for pi in range(params.p + 1):
        for tau in range(params.t + 1):
            _size(pi, tau, params.base_size)
    return _size(params.p, params.t, params.base_size)


def _guard(n_predicted: int, what: str, limit: int | None) -> None:
    cap = limits().materialize_vertices if limit is None else limit
    if n_predicted > cap:
        raise MaterializationError(
            f"{what} would have {n_predicted} vertices, above the materialization limit {cap}"
        )


def _template(pi: int, tau: int, b: int, cache: dict) -> np.ndarray:
    key = (pi, tau)
    if key in cache:
        return cache[key]
    if pi == 0 or tau == 0:
        out = np.zeros((0, 2), dtype=np.int64)
    else:
        nb, _ = _size(pi - 1, tau, b)
        nc, _ = _size(pi, tau - 1, b)
        bot = _template(pi - 1, tau, b, cache)
        child = _template(pi, tau - 1, b, cache)
        offsets = nb + nc * np.arange(nb, dtype=np.int64)
        copies = (child[None, :, :] + offsets[:, None, None]).reshape(-1, 2)
        join = np.column_stack(
            [
                np.repeat(np.arange(nb, dtype=np.int64), nc),
                (offsets[:, None] + np.arange(nc, dtype=np.int64)[None, :]).ravel(),
            ]
        )
        out = np.concatenate([bot, copies, join])
    cache[key] = out
    return out


def debski_graph(params: FamilyParams, limit: int | None = None) -> Graph:
    """Build the unsubdivided family member for ``(p, t, base_size)``.

    The copy of the ``(p-1, t)`` graph occupies the first ids; after it come
    the copies of the ``(p, t-1)`` graph attached to its vertices, in the
    order of those vertices.
    """
    n, _ = debski_size(params)
    _guard(n, f"debski_graph{(params.p, params.t, params.base_size)}", limit)
    edges = _template(params.p, params.t, params.base_size, {})
    return Graph(n, [tuple(e) for e in edges.tolist()])


def debski_subdivided(params: FamilyParams, limit: int | None = None) -> Graph:
    n, m = debski_size(params)
    s = params.subdivision
    _guard(n + s * m, f"debski_subdivided{(params.p, params.t, params.base_size, s)}", limit)
    return subdivide(debski_graph(params, limit=limit), s)


def _check_gnp(n: int, q: float, seed: int) -> None:
    if not 0.0 <= q <= 1.0:
        raise InputError(f"edge probability must lie in [0, 1], got {q}")
    if n < 0:
        raise InputError("n must be >= 0")
    if not 0 <= seed < 2**64:
        raise InputError("seed must be a 64-bit unsigned integer")


def gnp_edge_arrays(n: int, q: float, seed: int, *, chunk: int = 1 << 22):
    """Iterator over ``(us, vs)`` blocks of the G(n, q) edge stream (see :func:`gnp`)."""
    _check_gnp(n, q, seed)
    return _stream(n, q, seed, chunk)


def _stream(n: int, q: float, seed: int, chunk: int):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    u = 0
    while u < n - 1:
        # take whole rows until the chunk is full
        rows = [u]
        count = n - 1 - u
        while rows[-1] + 1 < n - 1 and count + (n - 2 - rows[-1]) <= chunk:
            rows.append(rows[-1] + 1)
            count += n - 1 - rows[-1]
        draws = rng.random(count)
        iu = np.concatenate([np.full(n - 1 - r, r, dtype=np.int64) for r in rows])
        iv = np.concatenate([np.arange(r + 1, n, dtype=np.int64) for r in rows])
        keep = draws < q
        yield iu[keep], iv[keep]
        u = rows[-1] + 1


def gnp(n: int, q: float, seed: int, *, chunk: int = 1 << 22) -> Graph:
    """Erdős–Rényi graph with a reproducible edge stream.

    Candidate pairs are visited in lexicographic order ``(0,1), (0,2), ...,
    (n-2,n-1)``; each consumes one float64 from numpy's PCG64 generator seeded
    with ``SeedSequence(seed)`` and is kept iff the draw is ``< q``. Because
    the draw per pair does not depend on ``q``, raising ``q`` for a fixed
    seed only adds edges.
    """
    blocks = list(gnp_edge_arrays(n, q, seed, chunk=chunk))
    if not blocks:
        return Graph(n, [])
    edges = np.column_stack([np.concatenate([b[0] for b in blocks]),
                             np.concatenate([b[1] for b in blocks])])
    return Graph(n, [tuple(e) for e in edges.tolist()])


def gnp_degrees(n: int, q: float, seed: int, *, chunk: int = 1 << 22) -> np.ndarray:
    """Degree sequence of ``gnp(n, q, seed)`` without building the graph."""
    deg = np.zeros(n, dtype=np.int64)
    for us, vs in gnp_edge_arrays(n, q, seed, chunk=chunk):
        deg += np.bincount(us, minlength=n) + np.bincount(vs, minlength=n)
    return deg


def path(n: int) -> Graph:
    _sizes(n)
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    """Cycle on ``n`` vertices; ``n < 3`` degenerates to the path."""
    _sizes(n)
    if n < 3:
        return path(n)
    return Graph(n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])


def clique(n: int) -> Graph:
    _sizes(n)
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(leaves: int) -> Graph:
    """Centre 0 joined to ``leaves`` leaves."""
    if leaves < 0:
        raise InputError("leaf count must be >= 0")
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def grid(rows: int, cols: int) -> Graph:
    _sizes(rows, cols)
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def edgeless(n: int) -> Graph:
    return Graph(n, [])


def random_tree(n: int, seed: int) -> Graph:
    """Uniform random recursive tree: vertex i attaches to a uniform earlier vertex."""
    _sizes(n)
    rng = np.random.default_rng(seed)
    return Graph(n, [(int(rng.integers(0, i)), i) for i in range(1, n)])


def _sizes(*sizes: int) -> None:
    for s in sizes:
        if s < 1:
            raise InputError(f"sizes must be >= 1, got {s}")


STANDARD = {"path": path, "cycle": cycle, "clique": clique, "star": star, "grid": grid}


def standard(kind: str, *sizes: int) -> Graph:
    try:
        ctor = STANDARD[kind]
    except KeyError:
        raise InputError(f"unknown standard graph {kind!r}; choose from {sorted(STANDARD)}") from None
    return ctor(*sizes)
