"""Exact simplet counting by enumerating connected node subsets."""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .core import PrimalGraph, SimplicialComplex, induced_maximal_simplices, primal_graph, scan_masks
from .simpletgen import MatchTable, SimpletCatalog, build_match_table

DEFAULT_MAX_SUBSETS = 10**9


class EnumerationBudgetError(RuntimeError):
    """Raised when exact counting would enumerate too many subsets."""


@dataclass(frozen=True)
class CountReport:
    """Per-simplet counts aligned with a catalog, plus run metadata.

    ``counts`` holds exact ints for exact runs and floats for estimates.
    ``elapsed`` is wall time in seconds; it is informational only.
    """

    k: int
    counts: tuple
    codes: tuple[str, ...]
    method: str
    samples: int = 0
    seed: int | None = None
    elapsed: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if len(self.counts) != len(self.codes):
            raise ValueError("counts and codes are not aligned")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be non-negative")

    @property
    def total(self):
        if all(isinstance(c, int) for c in self.counts):
            return sum(self.counts)
        return math.fsum(self.counts)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.codes, self.counts))


def connected_subsets(graph: PrimalGraph, k: int, roots=None):
    """Yield every connected ``k``-subset of ``graph`` exactly once, sorted.

    Reverse search in the ESU style: a subset is grown from its smallest node
    and extended only by nodes that are larger than the root and not already
    adjacent to the current subset, so each subset has a unique parent.
    """
    if k < 1:
        raise ValueError("k must be positive")
    nbrs = graph.neighbor_sets
    for v in range(graph.num_nodes) if roots is None else roots:
        if k == 1:
            yield (v,)
            continue
        ext = [u for u in nbrs[v] if u > v]
        yield from _extend([v], ext, nbrs[v] | {v}, v, k, nbrs)


def _extend(sub, ext, closed, root, k, nbrs):
    if len(sub) == k - 1:
        for w in ext:
            yield tuple(sorted(sub + [w]))
        return
    ext = list(ext)
    while ext:
        w = ext.pop()
        grown = ext + [u for u in nbrs[w] if u > root and u not in closed]
        yield from _extend(sub + [w], grown, closed | nbrs[w], root, k, nbrs)


def estimate_connected_subsets(graph: PrimalGraph, k: int, cap: float = math.inf) -> float:
    """Upper bound on the number of connected ``k``-subsets.

    Every connected subset through ``v`` lies inside the radius ``k - 1``
    ball around ``v``; the sum over ``v`` counts each subset ``k`` times.
    Stops early once the running bound passes ``cap``.
    """
    nbrs = graph.neighbor_sets
    total = 0.0
    for v in range(graph.num_nodes):
        ball, frontier = {v}, {v}
        for _ in range(k - 1):
            frontier = set().union(*(nbrs[u] for u in frontier)) - ball
            if not frontier:
                break
            ball |= frontier
        total += math.comb(len(ball) - 1, k - 1) / k
        if total > cap:
            break
    return total


def count_exact(
    complex: SimplicialComplex,
    catalog: SimpletCatalog,
    threads: int = 1,
    max_subsets: float = DEFAULT_MAX_SUBSETS,
    match_table: MatchTable | None = None,
) -> CountReport:
    """Exact occurrence count of every simplet of size ``catalog.k``."""
    start = time.perf_counter()
    k = catalog.k
    graph = primal_graph(complex)
    est = estimate_connected_subsets(graph, k, cap=max_subsets)
    if est > max_subsets:
        raise EnumerationBudgetError(
            f"about {est:.3g} connected {k}-subsets exceed the budget of {max_subsets:.3g}"
        )
    table = match_table or build_match_table(catalog)
    complex.incidence  # build the index once, before any worker thread touches it
    roots = range(graph.num_nodes)
    threads = max(1, int(threads))
    chunks = [roots[i::threads] for i in range(threads)]

    def work(chunk):
        counts = [0] * len(catalog)
        entries = table.entries
        for xs in connected_subsets(graph, k, chunk):
            w = 0
            for m in scan_masks(complex, xs):
                w |= 1 << m
            counts[entries[w]] += 1
        return counts

    if threads == 1:
        parts = [work(chunks[0])]
    else:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(work, chunks))
    counts = tuple(sum(col) for col in zip(*parts))
    return CountReport(k, counts, tuple(catalog.codes_hex), "exact",
                       elapsed=time.perf_counter() - start)


def count_exact_subsets(complex: SimplicialComplex, catalog: SimpletCatalog) -> CountReport:
    """Literal oracle: every ``k``-subset, a connectivity filter, canonical lookup."""
    start = time.perf_counter()
    k = catalog.k
    graph = primal_graph(complex)
    counts = [0] * len(catalog)
    for xs in itertools.combinations(range(complex.num_nodes), k):
        if not graph.is_connected_subset(xs):
            continue
        pos = {u: i for i, u in enumerate(xs)}
        fam = [[pos[u] for u in s] for s in induced_maximal_simplices(complex, xs)]
        counts[catalog.index_of(fam)] += 1
    return CountReport(k, tuple(counts), tuple(catalog.codes_hex), "exact-subsets",
                       elapsed=time.perf_counter() - start)
