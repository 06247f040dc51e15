"""Minimum number of colors in a p-centered coloring, plus classical oracles."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .centered import MAX_SUBSETS, Coloring, _count_subsets, is_p_centered
from .config import InputError, check_oracle_size
from .graph import Graph

EXACT = "exact"
LOWER_BOUND_ONLY = "lower_bound_only"
TIMEOUT = "timeout"


class _BudgetExhausted(Exception):
    pass


class PartialChecker:
    """Incremental p-centered test for a partial coloring held as bitsets.

    After ``v`` receives a color, any new violation is a connected set of
    colored vertices containing ``v``. For a color set S containing the new
    color, the candidate is the component of ``v`` among colored vertices
    with colors in S. Only color sets grown one color at a time along that
    component's boundary need to be visited: a color not touching the
    component leaves it unchanged.
    """

    def __init__(self, g: Graph, p: int):
        self.g = g
        self.p = p
        self.adj = g.masks
        self.colored = 0
        self.by_color: dict[int, int] = {}
        self.color_of = [-1] * g.n

    def assign(self, v: int, c: int) -> None:
        self.color_of[v] = c
        self.colored |= 1 << v
        self.by_color[c] = self.by_color.get(c, 0) | (1 << v)

    def unassign(self, v: int) -> None:
        c = self.color_of[v]
        self.color_of[v] = -1
        self.colored &= ~(1 << v)
        rest = self.by_color[c] & ~(1 << v)
        if rest:
            self.by_color[c] = rest
        else:
            del self.by_color[c]

    def _component(self, v: int, allowed: int) -> int:
        adj = self.adj
        comp = 1 << v
        frontier = comp
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            new = adj[b.bit_length() - 1] & allowed & ~comp
            comp |= new
            frontier |= new
        return comp

    def violation_at(self, v: int) -> int:
        """Bitset of a violating connected set through ``v``, or 0."""
        c0 = self.color_of[v]
        by_color = self.by_color
        color_of = self.color_of
        seen = set()
        stack = [(c0,)]
        while stack:
            s = stack.pop()
            allowed = 0
            for c in s:
                allowed |= by_color[c]
            comp = self._component(v, allowed)
            if not any((comp & by_color[c]).bit_count() == 1 for c in s):
                return comp
            if len(s) >= self.p:
                continue
            # colors on the boundary of comp among colored vertices
            border = 0
            rest = comp
            while rest:
                b = rest & -rest
                rest ^= b
                border |= self.adj[b.bit_length() - 1]
            border &= self.colored & ~comp
            nxt = set()
            while border:
                b = border & -border
                border ^= b
                nxt.add(color_of[b.bit_length() - 1])
            for d in nxt:
                key = tuple(sorted(s + (d,)))
                if key not in seen:
                    seen.add(key)
                    stack.append(key)
        return 0

    def ok(self, v: int) -> bool:
        c = self.color_of[v]
        # p >= 1: an adjacent vertex of the same color is already a violation
        if self.adj[v] & self.by_color[c] & ~(1 << v):
            return False
        return self.violation_at(v) == 0


@dataclass
class SolveStats:
    nodes: int = 0
    colorings_tested: int = 0
    elapsed: float = 0.0


@dataclass
class SolveResult:
    status: str
    chi: int
    p: int
    coloring: Coloring | None = None
    upper: int | None = None
    stats: SolveStats = field(default_factory=SolveStats)

    def to_dict(self, timing: bool = False) -> dict:
        stats = {"nodes": self.stats.nodes, "colorings_tested": self.stats.colorings_tested}
        if timing:
            stats["elapsed"] = self.stats.elapsed
        return {
            "status": self.status,
            "chi": self.chi,
            "p": self.p,
            "upper": self.upper,
            "coloring": None
            if self.coloring is None
            else {"k": self.coloring.k, "colors": list(self.coloring.colors)},
            "stats": stats,
        }


def search_order(g: Graph) -> list[int]:
    """Maximum-connectivity order: next vertex has most already-ordered neighbours.

    Ties go to higher degree, then smaller id; a new component starts at its
    highest-degree vertex.
    """
    placed = [False] * g.n
    links = [0] * g.n
    order = []
    for _ in range(g.n):
        best = -1
        for v in range(g.n):
            if placed[v]:
                continue
            if best < 0 or (links[v], g.degree(v)) > (links[best], g.degree(best)):
                best = v
        placed[best] = True
        order.append(best)
        for w in g.adjacency[best]:
            links[w] += 1
    return order


def greedy_clique(g: Graph) -> int:
    """Size of a clique found greedily from every start vertex (a lower bound)."""
    if g.n == 0:
        return 0
    adj = g.masks
    by_deg = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    best = 1
    for v in range(g.n):
        cand = adj[v]
        size = 1
        for w in by_deg:
            if cand >> w & 1:
                size += 1
                cand &= adj[w]
        best = max(best, size)
    return best


def _greedy_order(g: Graph, order: str, seed: int) -> list[int]:
    if order == "natural":
        return list(range(g.n))
    if order in ("degree", "degree-descending"):
        return sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    if order == "random":
        return [int(v) for v in np.random.default_rng(seed).permutation(g.n)]
    raise InputError(f"unknown order {order!r}")


def chi_p_greedy(g: Graph, p: int, order: str = "natural", seed: int = 0,
                 verify: bool = True) -> Coloring:
    """A p-centered coloring built greedily.

    Each vertex takes the smallest color that keeps the partial coloring
    p-centered (a fresh color always does). The result is re-verified and,
    should a violation appear, the highest-indexed witness vertex is
    recolored with a fresh color until none remains.
    """
    if p < 1:
        raise InputError("p must be >= 1")
    chk = PartialChecker(g, p)
    colors = [0] * g.n
    k = 0
    for v in _greedy_order(g, order, seed):
        for c in range(k + 1):
            chk.assign(v, c)
            if chk.ok(v):
                break
            chk.unassign(v)
        colors[v] = c
        k = max(k, c + 1)
    f = Coloring(tuple(colors), k)
    if verify and (p >= f.num_used or _count_subsets([(f.num_used, 1, p)]) <= MAX_SUBSETS // 50):
        while True:
            verdict = is_p_centered(g, f, p, first=True)
            if verdict.centered:
                break
            v = max(verdict.witness.vertices)
            colors[v] = k
            k += 1
            f = Coloring(tuple(colors), k)
    return f


def chi_p_exact(g: Graph, p: int, *, max_nodes: int | None = 10_000_000,
                time_limit: float | None = None, max_k: int | None = None) -> SolveResult:
    """Minimum colors of a p-centered coloring by iterative deepening on k.

    For each k, a backtracking search in :func:`search_order` where a vertex
    may only open the next unused color, pruning as soon as the partial
    coloring contains a violating connected set (violations among colored
    vertices persist in every extension). ``max_k`` stops the deepening
    early with status ``lower_bound_only``; an exhausted node or time
    budget gives status ``timeout``. In both cases ``chi`` is a proven
    lower bound and ``coloring`` the best greedy upper bound found.
    """
    if p < 1:
        raise InputError("p must be >= 1")
    start = time.perf_counter()
    stats = SolveStats()
    if g.n == 0:
        return SolveResult(EXACT, 0, p, Coloring((), 0), 0, stats)

    upper_f = min(
        (chi_p_greedy(g, p, order) for order in ("natural", "degree")),
        key=lambda f: f.num_used,
    )
    upper_f = _compact(upper_f)
    upper = upper_f.k
    lower = max(greedy_clique(g), 1)
    order = search_order(g)
    deadline = None if time_limit is None else start + time_limit

    def finish(status: str, chi: int, f: Coloring | None) -> SolveResult:
        stats.elapsed = time.perf_counter() - start
        return SolveResult(status, chi, p, f, upper, stats)

    k = lower
    while k < upper:
        if max_k is not None and k > max_k:
            return finish(LOWER_BOUND_ONLY, k, upper_f)
        try:
            found = _colorable(g, p, k, order, stats, max_nodes, deadline)
        except _BudgetExhausted:
            return finish(TIMEOUT, k, upper_f)
        if found is not None:
            return finish(EXACT, k, found)
        k += 1
    if max_k is not None and upper > max_k + 1:
        return finish(LOWER_BOUND_ONLY, k, upper_f)
    return finish(EXACT, upper, upper_f)


def _compact(f: Coloring) -> Coloring:
    remap = {c: i for i, c in enumerate(f.used)}
    return Coloring(tuple(remap[c] for c in f.colors), len(remap))


def _colorable(g: Graph, p: int, k: int, order: list[int], stats: SolveStats,
               max_nodes: int | None, deadline: float | None) -> Coloring | None:
    chk = PartialChecker(g, p)
    n = g.n
    colors = [-1] * n

    def rec(i: int, top: int) -> bool:
        stats.nodes += 1
        if max_nodes is not None and stats.nodes > max_nodes:
            raise _BudgetExhausted
        if deadline is not None and stats.nodes % 1024 == 0 and time.perf_counter() > deadline:
            raise _BudgetExhausted
        if i == n:
            stats.colorings_tested += 1
            return True
        v = order[i]
        for c in range(min(top + 2, k)):
            chk.assign(v, c)
            if chk.ok(v):
                colors[v] = c
                if rec(i + 1, max(top, c)):
                    return True
            chk.unassign(v)
        return False

    if rec(0, -1):
        return Coloring(tuple(colors), k)
    return None


# -- classical oracles --------------------------------------------------------


def chromatic_number_exact(g: Graph, *, limit: int | None = None) -> int:
    """Smallest k admitting a proper coloring, by plain backtracking."""
    check_oracle_size(g.n, limit, "chromatic_number_exact")
    if g.n == 0:
        return 0
    adj = g.adjacency

    def colorable(k: int) -> bool:
        col = [-1] * g.n

        def rec(v: int, top: int) -> bool:
            if v == g.n:
                return True
            for c in range(min(top + 2, k)):
                if all(col[w] != c for w in adj[v]):
                    col[v] = c
                    if rec(v + 1, max(top, c)):
                        return True
                    col[v] = -1
            return False

        return rec(0, -1)

    k = 1
    while not colorable(k):
        k += 1
    return k


def _paths_on_four(g: Graph) -> list[tuple[int, int, int, int]]:
    adj = g.adjacency
    out = []
    for b in range(g.n):
        for c in adj[b]:
            if c <= b:
                continue
            for a in adj[b]:
                if a == c:
                    continue
                for d in adj[c]:
                    if d != b and d != a:
                        out.append((a, b, c, d))
    return out


def star_chromatic_exact(g: Graph, *, limit: int | None = None) -> int:
    """Smallest k admitting a proper coloring with no 2-colored path on four vertices."""
    check_oracle_size(g.n, limit, "star_chromatic_exact")
    if g.n == 0:
        return 0
    adj = g.adjacency
    paths = _paths_on_four(g)
    # each path is checked once its last vertex (in id order) is colored
    by_last: list[list[tuple[int, int, int, int]]] = [[] for _ in range(g.n)]
    for path in paths:
        by_last[max(path)].append(path)

    def colorable(k: int) -> bool:
        col = [-1] * g.n

        def rec(v: int, top: int) -> bool:
            if v == g.n:
                return True
            for c in range(min(top + 2, k)):
                if any(col[w] == c for w in adj[v]):
                    continue
                col[v] = c
                if all(not (col[a] == col[c2] and col[b] == col[d])
                       for a, b, c2, d in by_last[v]):
                    if rec(v + 1, max(top, c)):
                        return True
                col[v] = -1
            return False

        return rec(0, -1)

    k = 1
    while not colorable(k):
        k += 1
    return k


def result_from_dict(d: dict) -> SolveResult:
    col = d.get("coloring")
    stats = d.get("stats", {})
    return SolveResult(
        d["status"],
        d["chi"],
        d["p"],
        None if col is None else Coloring(tuple(col["colors"]), col["k"]),
        d.get("upper"),
        SolveStats(stats.get("nodes", 0), stats.get("colorings_tested", 0), stats.get("elapsed", 0.0)),
    )
