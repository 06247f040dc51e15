"""Deciding p-centeredness, split-palette variants, and threat enumeration.

The fast verifier uses the color-subset method: for every set S of at most
p used colors, look at the components of the subgraph induced by the
vertices colored in S. A connected H that uses at most p colors and has no
unique color lies inside such a component C (take S = colors of H). Every
color of C belongs to S and occurs in H, so a color unique in C would occur
exactly once in H as well. Hence some component without a unique color
exists iff the coloring is not p-centered.
"""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from . import _kernels
from .config import InputError, check_oracle_size, limits
from .graph import (
    ROOT,
    Graph,
    VertexSet,
    connected_components,
    induced_subgraph,
    is_connected,
    validate_vertex_set,
)

A1 = "A1"
A2 = "A2"

# refuse subset scans beyond this many color sets
MAX_SUBSETS = 50_000_000
_BATCH = 1 << 15
# above this many color sets, try the maximal-set recursion first
_RECURSIVE_FROM = 1 << 12
_MAX_MAXIMAL = 200_000


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        colors = tuple(int(c) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        if self.k < 0:
            raise InputError("palette size k must be >= 0")
        for c in colors:
            if not 0 <= c < self.k:
                raise InputError(f"color {c} outside palette 0..{self.k - 1}")

    @classmethod
    def of(cls, colors: Sequence[int], k: int | None = None) -> "Coloring":
        colors = tuple(int(c) for c in colors)
        if k is None:
            k = max(colors, default=-1) + 1
        return cls(colors, k)

    def __len__(self) -> int:
        return len(self.colors)

    @property
    def used(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.colors)))

    @property
    def num_used(self) -> int:
        return len(set(self.colors))

    def array(self) -> np.ndarray:
        return np.asarray(self.colors, dtype=np.int64)

    def restrict(self, verts: Sequence[int]) -> "Coloring":
        return Coloring(tuple(self.colors[v] for v in verts), self.k)


@dataclass(frozen=True)
class SplitColoring:
    """A coloring whose palette is split into A1 (root colors) and A2 (fresh colors)."""

    base: Coloring
    palette: tuple[str, ...]

    def __post_init__(self) -> None:
        pal = tuple(self.palette)
        object.__setattr__(self, "palette", pal)
        if len(pal) != self.base.k:
            raise InputError("palette must name A1 or A2 for every color id")
        if set(pal) - {A1, A2}:
            raise InputError("palette entries must be 'A1' or 'A2'")

    @property
    def colors(self) -> tuple[int, ...]:
        return self.base.colors

    def used_in(self, which: str) -> tuple[int, ...]:
        return tuple(c for c in self.base.used if self.palette[c] == which)

    def check_labels(self, g: Graph) -> None:
        if g.labels is None:
            raise InputError("split colorings need a root/fresh labeled graph")
        if len(self.base) != g.n:
            raise InputError(f"coloring has {len(self.base)} entries, graph has {g.n} vertices")
        for v, (lab, c) in enumerate(zip(g.labels, self.base.colors)):
            want = A1 if lab == ROOT else A2
            if self.palette[c] != want:
                raise InputError(f"vertex {v} is {lab} but color {c} belongs to {self.palette[c]}")


@dataclass(frozen=True)
class Witness:
    """A connected vertex set certifying a violation or an i-threat."""

    kind: str
    vertices: VertexSet
    colors: Mapping[int, int] = field(default_factory=dict)
    color: int | None = None
    load: tuple[int, int] | None = None

    @classmethod
    def build(cls, kind: str, vertices, f: Coloring, **kw) -> "Witness":
        verts = tuple(sorted(int(v) for v in vertices))
        counts = Counter(f.colors[v] for v in verts)
        return cls(kind, verts, dict(sorted(counts.items())), **kw)


@dataclass(frozen=True)
class Verdict:
    centered: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.centered


def _check_coloring(g: Graph, f: Coloring) -> None:
    if len(f) != g.n:
        raise InputError(f"coloring has {len(f)} entries, graph has {g.n} vertices")


def _count_subsets(sizes_and_budgets: Sequence[tuple[int, int, int]]) -> int:
    total = 1
    for n_used, lo, hi in sizes_and_budgets:
        total *= sum(comb(n_used, j) for j in range(lo, min(hi, n_used) + 1))
    return total


def color_subsets(used: Sequence[int], max_size: int, min_size: int = 1) -> Iterator[tuple[int, ...]]:
    """Subsets of ``used`` with sizes in ``[min_size, max_size]``, by size then lexicographically."""
    for size in range(min_size, min(max_size, len(used)) + 1):
        yield from itertools.combinations(used, size)


def _batches(rows: Iterator[tuple[int, ...]], width: int) -> Iterator[np.ndarray]:
    while True:
        chunk = list(itertools.islice(rows, _BATCH))
        if not chunk:
            return
        arr = np.full((len(chunk), max(width, 1)), -1, dtype=np.int64)
        for i, row in enumerate(chunk):
            arr[i, : len(row)] = row
        yield arr


def _scan(g: Graph, f: Coloring, rows: Iterator[tuple[int, ...]], width: int, first: bool,
          backend: str | None) -> VertexSet | None:
    indptr, indices = g.csr
    colors = f.array()
    best: VertexSet | None = None
    for arr in _batches(rows, width):
        si, verts = _kernels.scan_subsets(indptr, indices, colors, arr, f.k, first, backend)
        if si < 0:
            continue
        cand = tuple(verts.tolist())
        if best is None or (len(cand), cand) < (len(best), best):
            best = cand
        if first:
            break
    return best


def _centered_violation(g: Graph, colors: Sequence[int], allowed: int | None = None) -> VertexSet | None:
    """A connected set (within ``allowed``) with no unique color, or ``None``.

    A component C needs a color unique in C; let v carry it. Connected sets
    through v then have that color exactly once, and the rest lie inside
    components of C - v, which are checked the same way.
    """
    adj = g.masks
    todo = [(1 << g.n) - 1 if allowed is None else allowed]
    while todo:
        left = todo.pop()
        while left:
            # peel off the component of the lowest remaining vertex
            comp = frontier = left & -left
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                new = adj[b.bit_length() - 1] & left & ~comp
                comp |= new
                frontier |= new
            left &= ~comp
            first_of: dict[int, int] = {}
            count: Counter = Counter()
            rest = comp
            while rest:
                b = rest & -rest
                rest ^= b
                v = b.bit_length() - 1
                count[colors[v]] += 1
                first_of.setdefault(colors[v], v)
            unique = [c for c, n in count.items() if n == 1]
            if not unique:
                return tuple(v for v in range(g.n) if comp >> v & 1)
            rest = comp & ~(1 << first_of[min(unique)])
            if rest:
                todo.append(rest)
    return None


def _maximal_sets(groups: Sequence[tuple[Sequence[int], int]]) -> Iterator[tuple[int, ...]]:
    """Color sets taking exactly min(budget, available) colors from each group."""
    choices = [itertools.combinations(used, min(budget, len(used))) for used, budget in groups]
    for combo in itertools.product(*choices):
        yield tuple(c for part in combo for c in part)


def _recursive_check(g: Graph, f: Coloring, groups) -> VertexSet | None:
    """Violation search over maximal color sets, each decided recursively.

    A violating connected set whose colors respect the budgets lies inside
    the subgraph induced by some maximal color set, and anything the
    recursion finds there respects the budgets too.
    """
    by_color: dict[int, int] = {}
    for v, c in enumerate(f.colors):
        by_color[c] = by_color.get(c, 0) | (1 << v)
    for s in _maximal_sets(groups):
        allowed = 0
        for c in s:
            allowed |= by_color[c]
        bad = _centered_violation(g, f.colors, allowed)
        if bad is not None:
            return bad
    return None


def _decide(g: Graph, f: Coloring, rows, width: int, total: int, groups,
            first: bool, backend: str | None) -> Verdict:
    """Subset scan, preceded by the maximal-set recursion when the scan is large.

    The recursion settles centered inputs on its own; for violated ones the
    scan still supplies the canonical witness unless it exceeds ``MAX_SUBSETS``.
    """
    if total > _RECURSIVE_FROM:
        maximal = 1
        for used, budget in groups:
            maximal *= comb(len(used), min(budget, len(used)))
        if maximal <= _MAX_MAXIMAL:
            bad = _recursive_check(g, f, groups)
            if bad is None:
                return Verdict(True)
            if total > MAX_SUBSETS:
                return Verdict(False, Witness.build("violation", bad, f))
    if total > MAX_SUBSETS:
        raise InputError(f"{total} color sets to scan exceeds the limit {MAX_SUBSETS}")
    best = _scan(g, f, rows, width, first, backend)
    if best is None:
        return Verdict(True)
    return Verdict(False, Witness.build("violation", best, f))


def is_p_centered(g: Graph, f: Coloring, p: int, *, first: bool = False,
                  backend: str | None = None) -> Verdict:
    """Decide whether ``f`` is p-centered on ``g`` by the color-subset method.

    The witness is the smallest violating component by (size, vertex list)
    over all color sets; ``first=True`` stops at the first color set (by
    size, then lexicographic) that exposes a violation instead. Large scans
    are preceded by a check over the maximal color sets only (see
    :func:`_recursive_check`); beyond ``MAX_SUBSETS`` color sets the witness
    then comes from that check.
    """
    _check_coloring(g, f)
    if p < 1:
        raise InputError("p must be >= 1")
    used = f.used
    total = _count_subsets([(len(used), 1, p)])
    width = min(p, len(used))
    return _decide(g, f, color_subsets(used, p), width, total, [(used, p)], first, backend)


@lru_cache(maxsize=256)
def _connected_masks(g: Graph) -> np.ndarray:
    """Membership matrix of all connected vertex sets, rows ordered by (size, vertex list)."""
    adj = g.masks
    found = []
    for mask in range(1, 1 << g.n):
        low = mask & -mask
        seen = low
        frontier = low
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            new = adj[b.bit_length() - 1] & mask & ~seen
            seen |= new
            frontier |= new
        if seen == mask:
            verts = tuple(v for v in range(g.n) if mask >> v & 1)
            found.append((len(verts), verts))
    found.sort()
    out = np.zeros((len(found), g.n), dtype=bool)
    for i, (_, verts) in enumerate(found):
        out[i, list(verts)] = True
    out.setflags(write=False)
    return out


def is_p_centered_bruteforce(g: Graph, f: Coloring, p: int, *, limit: int | None = None) -> Verdict:
    """Apply the definition literally: test every connected vertex set of ``g``."""
    _check_coloring(g, f)
    check_oracle_size(g.n, limit, "is_p_centered_bruteforce")
    if g.n == 0:
        return Verdict(True)
    members = _connected_masks(g)
    onehot = np.zeros((g.n, max(f.k, 1)), dtype=np.int64)
    onehot[np.arange(g.n), f.array()] = 1
    counts = members.astype(np.int64) @ onehot
    distinct = (counts > 0).sum(axis=1)
    has_unique = (counts == 1).any(axis=1)
    bad = np.flatnonzero((distinct <= p) & ~has_unique)
    if bad.size == 0:
        return Verdict(True)
    return Verdict(False, Witness.build("violation", np.flatnonzero(members[bad[0]]), f))


def all_violations(g: Graph, f: Coloring, p: int) -> list[Witness]:
    """Every violating component over all color sets (debugging aid; slow)."""
    _check_coloring(g, f)
    seen = set()
    out = []
    for s in color_subsets(f.used, p):
        sset = set(s)
        verts = [v for v in range(g.n) if f.colors[v] in sset]
        for comp in connected_components(g, verts):
            if comp in seen:
                continue
            counts = Counter(f.colors[v] for v in comp)
            if 1 not in counts.values():
                seen.add(comp)
                out.append(Witness.build("violation", comp, f))
    out.sort(key=lambda w: (len(w.vertices), w.vertices))
    return out


def confirm_violation(g: Graph, w: Witness, f: Coloring, p: int) -> bool:
    """Re-check a violation witness against the definition."""
    verts = validate_vertex_set(g, w.vertices)
    if not verts:
        return False
    h, _ = induced_subgraph(g, verts)
    counts = Counter(f.colors[v] for v in verts)
    return is_connected(h) and len(counts) <= p and 1 not in counts.values()


# -- split palettes ---------------------------------------------------------


def split_palette(g: Graph, f: Coloring) -> SplitColoring:
    """Send color c to (1, c) on roots and (2, c) on fresh vertices.

    Encoded densely: (1, c) becomes c and (2, c) becomes k + c.
    """
    if g.labels is None:
        raise InputError("split_palette needs a root/fresh labeled graph")
    _check_coloring(g, f)
    k = f.k
    colors = tuple(c if lab == ROOT else k + c for c, lab in zip(f.colors, g.labels))
    return SplitColoring(Coloring(colors, 2 * k), (A1,) * k + (A2,) * k)


def is_p1p2_centered(g: Graph, f: SplitColoring, p1: int, p2: int, *, first: bool = False,
                     backend: str | None = None) -> Verdict:
    """Per-palette budgets: violations use at most p1 A1-colors and at most p2 A2-colors."""
    f.check_labels(g)
    if p1 < 0 or p2 < 0:
        raise InputError("budgets must be >= 0")
    u1, u2 = f.used_in(A1), f.used_in(A2)
    total = _count_subsets([(len(u1), 0, p1), (len(u2), 0, p2)]) - 1

    def rows() -> Iterator[tuple[int, ...]]:
        for s1 in color_subsets(u1, p1, min_size=0):
            for s2 in color_subsets(u2, p2, min_size=0):
                if s1 or s2:
                    yield s1 + s2

    width = min(p1, len(u1)) + min(p2, len(u2))
    return _decide(g, f.base, rows(), width, total, [(u1, p1), (u2, p2)], first, backend)


def iter_connected_sets(g: Graph, max_size: int) -> Iterator[VertexSet]:
    """Each connected vertex set with at most ``max_size`` vertices, exactly once.

    Extension-based enumeration: sets are grown from their smallest vertex,
    only through vertices that are not neighbours of an earlier member.
    """
    adj = g.masks

    def extend(sub: int, ext: int, nbhd: int, root: int, size: int):
        yield sub
        if size == max_size:
            return
        while ext:
            b = ext & -ext
            ext ^= b
            w = b.bit_length() - 1
            excl = adj[w] & ~nbhd & ~sub
            excl &= ~((1 << (root + 1)) - 1)
            yield from extend(sub | b, ext | excl, nbhd | adj[w], root, size + 1)

    if max_size < 1:
        return
    for v in range(g.n):
        above = ~((1 << (v + 1)) - 1)
        for sub in extend(1 << v, adj[v] & above, adj[v] | (1 << v), v, 1):
            yield tuple(u for u in range(g.n) if sub >> u & 1)


def find_threats(g: Graph, f: SplitColoring, i: int, k1: int, k2: int,
                 max_size: int | None = None, *, limit: int | None = None) -> list[Witness]:
    """All i-threats of load (k1, k2) with at most ``max_size`` vertices.

    An i-threat is a connected set on which i is the only color occurring
    exactly once, with at most k1 colors of A1 and k2 colors of A2 present.
    """
    f.check_labels(g)
    check_oracle_size(g.n, limit, "find_threats")
    if max_size is None:
        max_size = limits().threat_max_size
    out = []
    if i not in set(f.colors):
        return out
    for verts in iter_connected_sets(g, max_size):
        if is_threat(f, verts, i, k1, k2):
            out.append(Witness.build("threat", verts, f.base, color=i, load=(k1, k2)))
    out.sort(key=lambda w: (len(w.vertices), w.vertices))
    return out


def is_threat(f: SplitColoring, verts: Sequence[int], i: int, k1: int, k2: int) -> bool:
    counts = Counter(f.colors[v] for v in verts)
    singles = [c for c, n in counts.items() if n == 1]
    if singles != [i]:
        return False
    n1 = sum(1 for c in counts if f.palette[c] == A1)
    return n1 <= k1 and len(counts) - n1 <= k2


# -- palette-split reduction -------------------------------------------------


def reduction_thresholds(p: int, t: int) -> tuple[int, int, int]:
    """(A1 budget, A2 budget, total budget) = (3p+2, 18tp+6t, 18p^2+9p+2)."""
    return 3 * p + 2, 18 * t * p + 6 * t, 18 * p * p + 9 * p + 2


@dataclass(frozen=True)
class ReductionReport:
    p: int
    t: int
    p1: int
    p2: int
    total: int
    centered_total: bool
    split_centered: bool
    applicable: bool
    holds: bool
    counterexample: Witness | None = None


def reduction_check(g: Graph, f: Coloring, p: int, t: int, *,
                    backend: str | None = None) -> ReductionReport:
    """Check that f centered at the total budget implies the split coloring
    is centered at the per-palette budgets.

    A failure would be an implementation bug: the implication always holds
    because a set within both palette budgets uses at most the total
    number of colors.
    """
    if g.labels is None:
        raise InputError("reduction_check needs a root/fresh labeled graph")
    p1, p2, total = reduction_thresholds(p, t)
    whole = is_p_centered(g, f, total, first=True, backend=backend)
    split = is_p1p2_centered(g, split_palette(g, f), p1, p2, first=True, backend=backend)
    applicable = whole.centered
    holds = (not applicable) or split.centered
    return ReductionReport(
        p, t, p1, p2, total, whole.centered, split.centered, applicable, holds,
        None if holds else split.witness,
    )


# -- serialization ------------------------------------------------------------


def coloring_to_dict(f: Coloring | SplitColoring) -> dict:
    if isinstance(f, SplitColoring):
        return {"k": f.base.k, "colors": list(f.base.colors), "palette": list(f.palette)}
    return {"k": f.k, "colors": list(f.colors)}


def coloring_from_dict(d: Mapping) -> Coloring | SplitColoring:
    try:
        base = Coloring(tuple(d["colors"]), int(d["k"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"coloring JSON needs 'k' and 'colors': {exc}") from exc
    if d.get("palette") is not None:
        return SplitColoring(base, tuple(d["palette"]))
    return base


def witness_to_dict(w: Witness) -> dict:
    d: dict = {
        "kind": w.kind,
        "vertices": list(w.vertices),
        "colors": {str(c): n for c, n in w.colors.items()},
    }
    if w.color is not None:
        d["color"] = w.color
    if w.load is not None:
        d["load"] = list(w.load)
    return d


def witness_from_dict(d: Mapping) -> Witness:
    load = d.get("load")
    return Witness(
        d["kind"],
        tuple(d["vertices"]),
        {int(c): int(n) for c, n in d.get("colors", {}).items()},
        d.get("color"),
        None if load is None else (int(load[0]), int(load[1])),
    )
