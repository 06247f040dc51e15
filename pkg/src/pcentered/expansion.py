"""Shallow-minor density.

Density is |E(H)| / |V(H)| (edges per branch vertex), not half the average
degree. Radius of a branch set is measured inside the subgraph it induces.
"""

from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

from .config import InputError, OracleLimitError, limits
from .graph import Graph, VertexSet


@dataclass(frozen=True)
class MinorModel:
    parts: Mapping[int, VertexSet]
    r: int


@dataclass(frozen=True)
class ShallowMinor:
    density: Fraction
    model: MinorModel
    h_edges: tuple[tuple[int, int], ...]


def _radius_within(g: Graph, part: Iterable[int]) -> int | None:
    """Radius of the subgraph induced by ``part`` (``None`` if disconnected)."""
    verts = set(part)
    if not verts:
        return None
    best = None
    for c in sorted(verts):
        dist = {c: 0}
        queue = deque([c])
        while queue:
            x = queue.popleft()
            for w in g.adjacency[x]:
                if w in verts and w not in dist:
                    dist[w] = dist[x] + 1
                    queue.append(w)
        if len(dist) < len(verts):
            return None
        ecc = max(dist.values())
        best = ecc if best is None else min(best, ecc)
    return best


def model_problems(g: Graph, m: MinorModel, h_edges: Iterable[tuple[int, int]]) -> list[str]:
    """Everything wrong with ``m`` as an r-shallow model of the graph on ``h_edges``."""
    problems = []
    owner: dict[int, int] = {}
    for h, part in m.parts.items():
        if not part:
            problems.append(f"part {h} is empty")
            continue
        for v in part:
            if not 0 <= v < g.n:
                problems.append(f"part {h} has vertex {v} outside the graph")
            elif v in owner:
                problems.append(f"vertex {v} is in parts {owner[v]} and {h}")
            else:
                owner[v] = h
    if problems:
        return problems
    for h, part in m.parts.items():
        rad = _radius_within(g, part)
        if rad is None:
            problems.append(f"part {h} is not connected")
        elif rad > m.r:
            problems.append(f"part {h} has radius {rad} > {m.r}")
    for a, b in h_edges:
        if a == b or a not in m.parts or b not in m.parts:
            problems.append(f"edge ({a}, {b}) does not join two distinct parts")
            continue
        pb = set(m.parts[b])
        if not any(w in pb for v in m.parts[a] for w in g.adjacency[v]):
            problems.append(f"edge ({a}, {b}) is not realized between its parts")
    return problems


def verify_model(g: Graph, m: MinorModel, h_edges: Iterable[tuple[int, int]]) -> bool:
    return not model_problems(g, m, h_edges)


def _quotient(g: Graph, parts: list[int]) -> tuple[tuple[int, int], ...]:
    """Edges between bitset parts that some graph edge realizes."""
    owner = {}
    for i, part in enumerate(parts):
        for v in _bits(part):
            owner[v] = i
    found = set()
    for u, v in g.edges:
        a, b = owner.get(u), owner.get(v)
        if a is not None and b is not None and a != b:
            found.add((a, b) if a < b else (b, a))
    return tuple(sorted(found))


def _bits(mask: int) -> VertexSet:
    out = []
    while mask:
        b = mask & -mask
        mask ^= b
        out.append(b.bit_length() - 1)
    return tuple(out)


def _package(g: Graph, parts: list[int], r: int) -> ShallowMinor:
    if not parts:
        return ShallowMinor(Fraction(0), MinorModel({}, r), ())
    edges = _quotient(g, parts)
    model = MinorModel({i: _bits(p) for i, p in enumerate(parts)}, r)
    return ShallowMinor(Fraction(len(edges), len(parts)), model, edges)


def densest_minor_exact(g: Graph, r: int, *, limit: int | None = None) -> ShallowMinor:
    """Exhaustive search over all families of disjoint connected radius-<=r branch sets.

    Branch sets are generated by smallest vertex, so each family is seen once.
    """
    if r < 0:
        raise InputError("r must be >= 0")
    cap = limits().nabla_vertices if limit is None else limit
    if g.n > cap:
        raise OracleLimitError(f"nabla_r_exact: {g.n} vertices exceeds the limit {cap}")
    if g.n == 0:
        return _package(g, [], r)

    by_min: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for mask in range(1, 1 << g.n):
        verts = _bits(mask)
        rad = _radius_within(g, verts)
        if rad is not None and rad <= r:
            nb = 0
            for v in verts:
                nb |= g.masks[v]
            by_min[verts[0]].append((mask, nb))

    best = [Fraction(0), [by_min[0][0][0]]]
    chosen: list[int] = []

    def rec(v: int, used: int, edges: int) -> None:
        if v == g.n:
            if chosen:
                d = Fraction(edges, len(chosen))
                if d > best[0]:
                    best[0] = d
                    best[1] = list(chosen)
            return
        if used >> v & 1:
            rec(v + 1, used, edges)
            return
        rec(v + 1, used, edges)
        for mask, nb in by_min[v]:
            if mask & used:
                continue
            gained = sum(1 for q in chosen if nb & q)
            chosen.append(mask)
            rec(v + 1, used | mask, edges + gained)
            chosen.pop()

    rec(0, 0, 0)
    return _package(g, best[1], r)


def nabla_r_exact(g: Graph, r: int, *, limit: int | None = None) -> Fraction:
    return densest_minor_exact(g, r, limit=limit).density


def _ball_partition(g: Graph, radius: int) -> list[int]:
    """Cover the vertices by BFS balls grown around high-degree centres."""
    taken = 0
    parts = []
    for c in sorted(range(g.n), key=lambda v: (-g.degree(v), v)):
        if taken >> c & 1:
            continue
        ball = 1 << c
        frontier = [c]
        for _ in range(radius):
            nxt = []
            for x in frontier:
                for w in g.adjacency[x]:
                    if not (taken | ball) >> w & 1:
                        ball |= 1 << w
                        nxt.append(w)
            frontier = nxt
        taken |= ball
        parts.append(ball)
    return parts


def _peel(g: Graph, parts: list[int]) -> list[int]:
    """Densest sub-family of the quotient by repeatedly dropping a minimum-degree part."""
    edges = _quotient(g, parts)
    nbrs: list[set[int]] = [set() for _ in parts]
    for a, b in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    heap = [(len(nb), i) for i, nb in enumerate(nbrs)]
    heapq.heapify(heap)
    alive = len(parts)
    removed = [False] * len(parts)
    m = len(edges)
    best, drop_upto = Fraction(m, max(alive, 1)), 0
    order = []
    while alive > 1:
        deg, x = heapq.heappop(heap)
        if removed[x] or deg != len(nbrs[x]):
            continue
        removed[x] = True
        order.append(x)
        alive -= 1
        m -= deg
        for y in nbrs[x]:
            nbrs[y].discard(x)
            heapq.heappush(heap, (len(nbrs[y]), y))
        d = Fraction(m, alive)
        if d > best:
            best, drop_upto = d, len(order)
    dropped = set(order[:drop_upto])
    return [part for i, part in enumerate(parts) if i not in dropped]


def densest_minor_greedy(g: Graph, r: int) -> ShallowMinor:
    """Lower bound on the r-shallow minor density by ball contraction and peeling.

    Every radius 0..r is tried; the returned model is verified.
    """
    if r < 0:
        raise InputError("r must be >= 0")
    if g.n == 0:
        return _package(g, [], r)
    best = None
    for radius in range(r + 1):
        cand = _package(g, _peel(g, _ball_partition(g, radius)), r)
        if best is None or cand.density > best.density:
            best = cand
    problems = model_problems(g, best.model, best.h_edges)
    if problems:  # pragma: no cover - construction guarantees validity
        raise AssertionError(f"greedy produced an invalid model: {problems}")
    return best


def nabla_r_greedy(g: Graph, r: int) -> Fraction:
    return densest_minor_greedy(g, r).density


def minor_to_dict(sm: ShallowMinor) -> dict:
    return {
        "r": sm.model.r,
        "parts": [list(sm.model.parts[h]) for h in sorted(sm.model.parts)],
        "h_edges": [list(e) for e in sm.h_edges],
        "density": f"{sm.density.numerator}/{sm.density.denominator}",
    }


def minor_from_dict(d: Mapping) -> ShallowMinor:
    num, _, den = str(d["density"]).partition("/")
    parts = {i: tuple(p) for i, p in enumerate(d["parts"])}
    return ShallowMinor(
        Fraction(int(num), int(den or 1)),
        MinorModel(parts, int(d["r"])),
        tuple((int(a), int(b)) for a, b in d["h_edges"]),
    )
