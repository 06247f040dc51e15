"""Immutable simple undirected graphs plus the small oracles built on them."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import InputError, check_oracle_size

ROOT = "root"
FRESH = "fresh"

Edge = tuple[int, int]
VertexSet = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``labels`` marks each vertex as ``"root"`` or ``"fresh"`` when the graph
    came out of :func:`subdivide`; ``origin`` maps every fresh vertex to the
    original edge it subdivides and its 1-based position counted from the
    smaller endpoint.
    """

    n: int
    edges: tuple[Edge, ...]
    labels: tuple[str, ...] | None = None
    origin: Mapping[int, tuple[Edge, int]] | None = field(default=None)

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise InputError(f"vertex count must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        norm = []
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.append((u, v) if u < v else (v, u))
        norm.sort()
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise InputError(f"parallel edge {a}")
        object.__setattr__(self, "edges", tuple(norm))
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.n:
                raise InputError("labels must have one entry per vertex")
            bad = set(labels) - {ROOT, FRESH}
            if bad:
                raise InputError(f"unknown vertex labels {sorted(bad)}")
            object.__setattr__(self, "labels", labels)
        if self.origin is not None:
            object.__setattr__(
                self,
                "origin",
                {int(k): ((int(e[0]), int(e[1])), int(pos)) for k, (e, pos) in self.origin.items()},
            )

    # -- derived structure -------------------------------------------------

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhoods as Python-int bitsets."""
        out = []
        for nb in self.adjacency:
            m = 0
            for w in nb:
                m |= 1 << w
            out.append(m)
        return tuple(out)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        deg = np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.fromiter(
            (w for a in self.adjacency for w in a), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    def roots(self) -> VertexSet:
        if self.labels is None:
            return tuple(range(self.n))
        return tuple(v for v, lab in enumerate(self.labels) if lab == ROOT)

    def fresh(self) -> VertexSet:
        if self.labels is None:
            return ()
        return tuple(v for v, lab in enumerate(self.labels) if lab == FRESH)

    def _key(self):
        origin = None if self.origin is None else tuple(sorted(self.origin.items()))
        return (self.n, self.edges, self.labels, origin)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        tag = ", labeled" if self.labels is not None else ""
        return f"Graph(n={self.n}, m={self.m}{tag})"


def validate_vertex_set(g: Graph, s: Iterable[int]) -> VertexSet:
    out = tuple(int(v) for v in s)
    if len(set(out)) != len(out):
        raise InputError("vertex set contains duplicates")
    for v in out:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} out of range for n={g.n}")
    return out


def connected_components(g: Graph, s: Iterable[int] | None = None) -> list[VertexSet]:
    """Components of the subgraph induced by ``s`` (all vertices if omitted).

    Each component is returned sorted; components are ordered by their
    smallest vertex.
    """
    verts = range(g.n) if s is None else validate_vertex_set(g, s)
    inside = set(verts)
    seen: set[int] = set()
    comps = []
    for v in sorted(inside):
        if v in seen:
            continue
        seen.add(v)
        stack = [v]
        comp = []
        while stack:
            x = stack.pop()
            comp.append(x)
            for w in g.adjacency[x]:
                if w in inside and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(g: Graph, s: Iterable[int] | None = None) -> bool:
    return len(connected_components(g, s)) <= 1


def max_degree(g: Graph) -> int:
    return max((len(a) for a in g.adjacency), default=0)


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, VertexSet]:
    """Return ``(h, verts)`` where vertex ``i`` of ``h`` is ``verts[i]`` of ``g``."""
    verts = tuple(sorted(validate_vertex_set(g, s)))
    index = {v: i for i, v in enumerate(verts)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    labels = None if g.labels is None else tuple(g.labels[v] for v in verts)
    return Graph(len(verts), edges, labels), verts


def subdivide(g: Graph, s: int) -> Graph:
    """Replace every edge by a path with ``s`` internal (fresh) vertices.

    Fresh ids are appended after the root ids, edge by edge in sorted edge
    order, walking from the smaller endpoint to the larger.
    """
    if g.labels is not None:
        raise InputError("subdivide expects an unlabeled graph")
    if s < 0:
        raise InputError("subdivision length must be >= 0")
    n = g.n
    edges: list[Edge] = []
    origin: dict[int, tuple[Edge, int]] = {}
    nxt = n
    for u, v in g.edges:
        prev = u
        for pos in range(1, s + 1):
            origin[nxt] = ((u, v), pos)
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, v))
    labels = (ROOT,) * n + (FRESH,) * (nxt - n)
    return Graph(nxt, edges, labels, origin)


def treedepth_exact(g: Graph, limit: int | None = None) -> int:
    """Minimum treedepth by the remove-a-root recursion, memoised on vertex bitsets."""
    check_oracle_size(g.n, limit, "treedepth_exact")
    adj = g.masks
    memo: dict[int, int] = {}

    def components(mask: int) -> list[int]:
        out = []
        rest = mask
        while rest:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                new = adj[b.bit_length() - 1] & mask & ~comp
                comp |= new
                frontier |= new
            out.append(comp)
            rest &= ~comp
        return out

    def td(mask: int) -> int:
        if mask == 0:
            return 0
        if mask in memo:
            return memo[mask]
        comps = components(mask)
        if len(comps) > 1:
            res = max(td(c) for c in comps)
        elif mask & (mask - 1) == 0:
            res = 1
        else:
            best = mask.bit_count()
            rest = mask
            while rest:
                b = rest & -rest
                rest ^= b
                best = min(best, 1 + td(mask ^ b))
            res = best
        memo[mask] = res
        return res

    return td((1 << g.n) - 1)


# -- serialization ---------------------------------------------------------


def graph_to_dict(g: Graph) -> dict:
    d: dict = {"n": g.n, "edges": [list(e) for e in g.edges]}
    if g.labels is not None:
        d["labels"] = list(g.labels)
    if g.origin is not None:
        d["origin"] = [[f, e[0], e[1], pos] for f, (e, pos) in sorted(g.origin.items())]
    return d


def graph_from_dict(d: Mapping) -> Graph:
    try:
        n = d["n"]
        edges = [tuple(e) for e in d["edges"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"graph JSON needs 'n' and 'edges': {exc}") from exc
    if any(len(e) != 2 for e in edges):
        raise InputError("every edge must be a pair")
    origin = None
    if d.get("origin") is not None:
        origin = {int(f): ((int(u), int(v)), int(pos)) for f, u, v, pos in d["origin"]}
    return Graph(n, edges, d.get("labels"), origin)


def dumps(obj: Mapping) -> str:
    """Canonical JSON text: sorted keys, no whitespace variance, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def graph_to_json(g: Graph) -> str:
    return dumps(graph_to_dict(g))


def graph_from_json(text: str) -> Graph:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid graph JSON: {exc}") from exc
    return graph_from_dict(d)


def graph_to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        shape = "point" if g.labels is not None and g.labels[v] == FRESH else "circle"
        lines.append(f"  {v} [shape={shape}];")
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def from_edge_list(n: int, edges: Sequence[Sequence[int]]) -> Graph:
    return Graph(n, [tuple(e) for e in edges])
