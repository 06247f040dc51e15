"""Random-graph lower bound for bounded degree: threshold, pair paths, Janson arithmetic.

Floating-point values are computed in the log domain (natural logs,
``math.log``/``math.exp``) and only exponentiated at the end, so that
quantities such as ``n ** (n / 2)`` never overflow. Serialized reports round
floats to 12 significant digits.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from collections.abc import Iterator, Sequence
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import _kernels
from .centered import Coloring, is_p_centered
from .config import InputError
from .generators import gnp
from .graph import Graph, induced_subgraph, max_degree
from .solver import chi_p_exact, chi_p_greedy, greedy_clique

# constant of the lower bound c * D^(2-1/p) * p * ln(D)^(-1/p)
BOUND_CONSTANT = 1 / (96 * math.e)


class ThresholdRangeError(InputError):
    """q_n falls outside (0, 1] for the requested n."""

    def __init__(self, message: str, min_n: int | None = None):
        super().__init__(message)
        self.min_n = min_n


def _log_q(n: int, p: int) -> float:
    return (p * math.log(12 * math.e / p) + (1 - p) * math.log(n) + math.log(math.log(n))) / (2 * p - 1)


def _q_ok(n: int, p: int) -> bool:
    return n >= 2 and math.log(n) > 0 and _log_q(n, p) <= 0.0


def min_valid_n(p: int) -> int:
    """Smallest n from which q_n stays in (0, 1] (q_n decreases in n for n >= 3)."""
    if p < 2:
        raise InputError("p must be >= 2")
    hi = 3
    while not _q_ok(hi, p):
        hi *= 2
    lo = max(3, hi // 2)
    while lo < hi:
        mid = (lo + hi) // 2
        if _q_ok(mid, p):
            hi = mid
        else:
            lo = mid + 1
    return lo


def q_threshold(n: int, p: int) -> float:
    """q_n = ((12e/p)^p * n^(1-p) * ln n)^(1/(2p-1))."""
    if p < 2:
        raise InputError("p must be >= 2")
    if n < 2:
        raise ThresholdRangeError(f"q_n is not positive for n={n}", min_valid_n(p))
    lq = _log_q(n, p)
    if lq > 0.0:
        n0 = min_valid_n(p)
        raise ThresholdRangeError(
            f"q_n = {math.exp(lq):.6g} > 1 for n={n}, p={p}; the smallest valid n is {n0}", n0
        )
    return math.exp(lq)


def degree_window(n: int, p: int) -> tuple[float, float]:
    q = q_threshold(n, p)
    return n * q / 2, 2 * n * q


def target_bound(max_deg: int, p: int, c: float = BOUND_CONSTANT) -> float:
    """c * D^(2-1/p) * p * ln(D)^(-1/p); NaN for D <= 1 where ln D <= 0."""
    if max_deg <= 1:
        return math.nan
    return c * max_deg ** (2 - 1 / p) * p * math.log(max_deg) ** (-1 / p)


# -- pairs and pair paths --------------------------------------------------------


class NotEnoughPairs(InputError):
    pass


@dataclass(frozen=True)
class PairFamily:
    pairs: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        return len(self.pairs)


def select_pairs(f: Coloring, m: int) -> PairFamily:
    """First ``m`` monochromatic pairs, taken round-robin over the color classes.

    Classes are visited in color order; each pass takes the next two unused
    vertices (by id) of every class that still has them.
    """
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(f.colors):
        classes.setdefault(c, []).append(v)
    queues = [classes[c] for c in sorted(classes)]
    pairs = []
    j = 0
    while len(pairs) < m:
        took = False
        for verts in queues:
            if len(pairs) == m:
                break
            if 2 * j + 1 < len(verts):
                pairs.append((verts[2 * j], verts[2 * j + 1]))
                took = True
        if not took:
            break
        j += 1
    if len(pairs) < m:
        raise NotEnoughPairs(f"only {len(pairs)} disjoint monochromatic pairs, {m} requested")
    return PairFamily(tuple(pairs))


@dataclass(frozen=True)
class PathWitness:
    """Pair indices ``s`` (0-based), ``sigma`` (1-based, sigma[-1] == 1) and the 2p-vertex path."""

    s: tuple[int, ...]
    sigma: tuple[int, ...]
    path: tuple[int, ...]

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.path, self.path[1:]))


def structure_edges(pf: PairFamily, s: Sequence[int], sigma: Sequence[int]) -> list[tuple[int, int]]:
    """Edges x_{s_i}x_{s_{i+1}}, x_{s_1}y_{s_sigma(1)}, y_{s_sigma(i)}y_{s_sigma(i+1)}."""
    p = len(s)
    xs = [pf.pairs[j][0] for j in s]
    ys = [pf.pairs[s[k - 1]][1] for k in sigma]
    edges = [(xs[i], xs[i + 1]) for i in range(p - 1)]
    edges.append((xs[0], ys[0]))
    edges += [(ys[i], ys[i + 1]) for i in range(p - 1)]
    return edges


def structure_path(pf: PairFamily, s: Sequence[int], sigma: Sequence[int]) -> tuple[int, ...]:
    """Vertices x_{s_p}, ..., x_{s_1}, y_{s_sigma(1)}, ..., y_{s_sigma(p)} in path order."""
    xs = [pf.pairs[j][0] for j in s]
    ys = [pf.pairs[s[k - 1]][1] for k in sigma]
    return tuple(reversed(xs)) + tuple(ys)


def sigmas(p: int) -> Iterator[tuple[int, ...]]:
    """Permutations of 1..p (one-line notation) ending in 1, lexicographically."""
    for head in itertools.permutations(range(2, p + 1)):
        yield head + (1,)


def structures(m: int, p: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (s, sigma): s ordered distinct indices into range(m), sigma with sigma(p) = 1."""
    sig = list(sigmas(p))
    for s in itertools.permutations(range(m), p):
        for sg in sig:
            yield s, sg


def find_pair_path(g: Graph, pf: PairFamily, p: int) -> PathWitness | None:
    """Lexicographically first (s, sigma) whose whole edge set is present in ``g``."""
    if p < 2:
        raise InputError("p must be >= 2")
    if pf.m < p:
        return None
    adj = [set(a) for a in g.adjacency]
    xs = [x for x, _ in pf.pairs]
    ys = [y for _, y in pf.pairs]

    def y_chain(s: tuple[int, ...], chain: list[int], left: set[int]) -> list[int] | None:
        # chain holds positions k (1-based) into s, visiting y_{s_k}; must end at k = 1
        last = ys[s[chain[-1] - 1]]
        if not left:
            return chain if chain[-1] == 1 else None
        for k in sorted(left):
            if k == 1 and len(left) > 1:
                continue
            if ys[s[k - 1]] in adj[last]:
                left.remove(k)
                chain.append(k)
                out = y_chain(s, chain, left)
                if out is not None:
                    return out
                chain.pop()
                left.add(k)
        return None

    def x_chain(s: list[int]) -> PathWitness | None:
        if len(s) == p:
            st = tuple(s)
            x1 = xs[st[0]]
            for k in range(2, p + 1):
                if ys[st[k - 1]] not in adj[x1]:
                    continue
                left = set(range(1, p + 1)) - {k}
                chain = y_chain(st, [k], left)
                if chain is not None:
                    sg = tuple(chain)
                    return PathWitness(st, sg, structure_path(pf, st, sg))
            return None
        for j in range(pf.m):
            if j in s:
                continue
            if s and xs[j] not in adj[xs[s[-1]]]:
                continue
            s.append(j)
            out = x_chain(s)
            if out is not None:
                return out
            s.pop()
        return None

    return x_chain([])


def confirm_pair_path(g: Graph, f: Coloring, w: PathWitness, p: int) -> bool:
    """The witness path's vertex set must fail p-centeredness on its own."""
    h, verts = induced_subgraph(g, w.path)
    if not all(v in set(g.adjacency[u]) for u, v in w.edges()):
        return False
    verdict = is_p_centered(h, f.restrict(verts), p, first=True)
    return not verdict.centered


# -- Janson arithmetic ------------------------------------------------------------


def _m_for(n: int, p: int) -> int:
    m = n // 4
    if p < 2:
        raise InputError("p must be >= 2")
    if m < p:
        raise InputError(f"m = floor(n/4) = {m} is smaller than p = {p}")
    return m


def structure_count(m: int, p: int) -> int:
    """|S x Sigma| = (m)_p * (p-1)!."""
    return math.perm(m, p) * math.factorial(p - 1)


def pair_count(m: int, p: int, i: int) -> int:
    """Ordered pairs of structures whose index sets share exactly i indices."""
    return (
        math.comb(m, i)
        * math.comb(m - i, p - i)
        * math.comb(m - p, p - i)
        * (math.factorial(p) * math.factorial(p - 1)) ** 2
    )


def _scaled(count: int, q: float, power: int) -> float:
    """count * q**power, falling back to logs when the direct product leaves float range."""
    if count == 0 or q == 0:
        return 0.0
    try:
        out = float(count) * q**power
    except OverflowError:
        out = math.inf
    if out == 0.0 or not math.isfinite(out):
        return math.exp(math.log(count) + power * math.log(q))
    return out


def janson_mu(n: int, p: int, q: float) -> float:
    """mu = (m)_p (p-1)! q^(2p-1) with m = floor(n/4)."""
    m = _m_for(n, p)
    return _scaled(structure_count(m, p), q, 2 * p - 1)


def janson_delta_upper(n: int, p: int, q: float) -> float:
    """Sum over i = 2..p of pair_count(i) * q^(4p - 2i); bounds Delta over distinct dependent events."""
    m = _m_for(n, p)
    return math.fsum(_scaled(pair_count(m, p, i), q, 4 * p - 2 * i) for i in range(2, p + 1))


def janson_bound(mu: float, delta: float) -> float:
    """exp(-mu + delta / 2)."""
    return math.exp(-mu + delta / 2)


def janson_zero_prob(n: int, p: int, q: float) -> float:
    return janson_bound(janson_mu(n, p, q), janson_delta_upper(n, p, q))


def _exp_or_none(x: float) -> float | None:
    try:
        return math.exp(x)
    except OverflowError:
        return None


@dataclass(frozen=True)
class JansonReport:
    n: int
    p: int
    q: float
    m: int
    mu: float
    delta_upper: float
    log_zero_prob_upper: float
    zero_prob_upper: float | None
    log_coloring_count_bound: float
    coloring_count_bound: float | None
    log_union_bound_product: float
    union_bound_product: float | None
    union_bound_succeeds: bool

    def to_dict(self) -> dict:
        return {k: _round(v) for k, v in asdict(self).items()}


def _round(v):
    if isinstance(v, float) and math.isfinite(v):
        return float(f"{v:.12g}")
    return v


def janson_report(n: int, p: int, q: float | None = None) -> JansonReport:
    """mu, the Delta upper bound, exp(-mu + Delta/2) and the union bound over n^(n/2) colorings."""
    if q is None:
        q = q_threshold(n, p)
    if not 0 < q <= 1:
        raise InputError("q must lie in (0, 1]")
    m = _m_for(n, p)
    mu = janson_mu(n, p, q)
    delta = janson_delta_upper(n, p, q)
    log_zero = -mu + delta / 2
    log_count = (n / 2) * math.log(n)
    log_union = log_count + log_zero
    return JansonReport(
        n, p, q, m, mu, delta, log_zero, _exp_or_none(log_zero), log_count,
        _exp_or_none(log_count), log_union, _exp_or_none(log_union), log_union < 0,
    )


def report_to_dict(r: JansonReport) -> dict:
    return r.to_dict()


# -- Monte Carlo --------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloResult:
    mean: float
    std_err: float
    samples: int


def structure_matrix(pf: PairFamily, p: int) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Column indices (into the candidate edges among pair vertices) of every structure."""
    verts = sorted(v for pair in pf.pairs for v in pair)
    cand = [(a, b) for a, b in itertools.combinations(verts, 2)]
    index = {e: i for i, e in enumerate(cand)}
    rows = []
    for s, sg in structures(pf.m, p):
        rows.append([index[(min(u, v), max(u, v))] for u, v in structure_edges(pf, s, sg)])
    return np.asarray(rows, dtype=np.int64).reshape(-1, 2 * p - 1), cand


def monte_carlo_x(pf: PairFamily, p: int, q: float, samples: int, seed: int,
                  backend: str | None = None) -> MonteCarloResult:
    """Empirical mean of X, the number of realized structures, over G(n, q) samples.

    Only edges among pair vertices can realize a structure, so only those are drawn.
    """
    mat, cand = structure_matrix(pf, p)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    counts = []
    step = max(1, min(samples, (1 << 22) // max(1, len(cand))))
    done = 0
    while done < samples:
        b = min(step, samples - done)
        present = rng.random((b, len(cand))) < q
        counts.append(_kernels.count_realized(present, mat, backend))
        done += b
    x = np.concatenate(counts).astype(np.float64)
    return MonteCarloResult(float(x.mean()), float(x.std(ddof=1) / math.sqrt(samples)), samples)


# -- experiment ---------------------------------------------------------------


@dataclass(frozen=True)
class ProbeParams:
    n: int
    p: int
    seed: int = 0
    trials: int = 50
    colorings: int = 20
    q: float | None = None
    exact_limit: int = 24
    max_nodes: int = 2_000_000

    def __post_init__(self) -> None:
        if self.p < 2:
            raise InputError("p must be >= 2")
        if self.n < 4 * self.p:
            raise InputError("n must be >= 4p")
        if self.trials < 0 or self.colorings < 1:
            raise InputError("trials must be >= 0 and colorings >= 1")
        if self.q is not None and not 0 <= self.q <= 1:
            raise InputError("q must lie in [0, 1]")

    def edge_probability(self) -> float:
        """Explicit q, else q_n, capped at 1 when n is below the valid range."""
        if self.q is not None:
            return self.q
        try:
            return q_threshold(self.n, self.p)
        except ThresholdRangeError:
            return 1.0


def trial_seed(master: int, trial: int) -> int:
    return int(np.random.SeedSequence([master, trial]).generate_state(1, dtype=np.uint64)[0])


@dataclass
class ExperimentRow:
    trial: int
    seed: int
    n: int
    p: int
    q: float
    max_degree: int
    target_bound: float
    chi_exact_or_bound: int
    status: str
    violated_fraction: float
    witness_found: float
    witness_confirmed: float


def run_trial(params: ProbeParams, trial: int) -> ExperimentRow:
    seed = trial_seed(params.seed, trial)
    q = params.edge_probability()
    g = gnp(params.n, q, seed)
    d = max_degree(g)
    if params.n <= params.exact_limit:
        res = chi_p_exact(g, params.p, max_nodes=params.max_nodes)
        chi, status = res.chi, res.status
        if res.status == "exact" and res.chi < greedy_clique(g):  # pragma: no cover
            raise AssertionError("exact value below the clique bound")
    else:
        chi, status = chi_p_greedy(g, params.p, "degree").num_used, "greedy_upper"

    k = math.ceil(params.n / 2)
    m = params.n // 4
    rng = np.random.default_rng(np.random.SeedSequence([params.seed, trial, 1]))
    violated = found = confirmed = 0
    for _ in range(params.colorings):
        f = Coloring(tuple(int(c) for c in rng.integers(0, k, params.n)), k)
        w = None
        try:
            w = find_pair_path(g, select_pairs(f, m), params.p)
        except NotEnoughPairs:
            pass
        if w is not None:
            found += 1
            violated += 1
            confirmed += confirm_pair_path(g, f, w, params.p)
        elif not is_p_centered(g, f, params.p, first=True).centered:
            violated += 1
    return ExperimentRow(
        trial, seed, params.n, params.p, q, d, target_bound(d, params.p), chi, status,
        violated / params.colorings, found / params.colorings,
        confirmed / found if found else 1.0,
    )


def lower_bound_experiment(params: ProbeParams) -> list[ExperimentRow]:
    """One row per trial, ordered by trial index; rows depend only on (params, trial)."""
    return [run_trial(params, t) for t in range(params.trials)]


CSV_COLUMNS = [f.name for f in fields(ExperimentRow)]


def rows_to_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.12g}"
    return str(v)
