"""Color-coding estimator for simplet counts.

The pipeline is build -> sample -> scan -> match:

* ``build`` colors the primal graph with ``k`` colors and counts, by dynamic
  programming over rooted tree shapes, the colorful treelet occurrences
  rooted at every node.
* ``sample`` draws size-``k`` colorful treelet occurrences uniformly; a node
  set is therefore drawn with probability proportional to its number of
  spanning trees.
* ``scan`` recovers the maximal simplices induced on each sampled node set.
* ``match`` maps each family to its simplet and reweights by
  ``N_ct / (x * n_st) * k^k / k!``.
"""
from __future__ import annotations

import itertools
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import PrimalGraph, SimplicialComplex, primal_graph, scan_masks
from .exact import CountReport
from .simpletgen import MatchTable, SimpletCatalog, build_match_table

log = logging.getLogger(__name__)

INT64_MAX = 2**63 - 1
BLOCK_SIZE = 4096
MAX_COLOR_ATTEMPTS = 20


class NoColorfulTreeletError(RuntimeError):
    """The coloring admits no colorful size-k treelet."""


@dataclass(frozen=True)
class Treelet:
    """Rooted tree shape; ``shape`` is the sorted tuple of child shapes.

    For size >= 2 the tree splits into ``stem`` (the tree minus its last
    root child) and ``branch`` (that last child's subtree); ``d`` counts the
    root children isomorphic to ``branch``.
    """

    id: int
    size: int
    shape: tuple
    stem: int | None = None
    branch: int | None = None
    d: int = 1


def _shape_size(shape) -> int:
    return 1 + sum(_shape_size(c) for c in shape)


def _shape_key(shape):
    return (_shape_size(shape), tuple(_shape_key(c) for c in shape))


@lru_cache(maxsize=None)
def enumerate_treelets(k: int) -> tuple[Treelet, ...]:
    """All rooted tree shapes of size 1..k, ordered by size, with their splits."""
    if not 1 <= k <= 6:
        raise ValueError("treelets are enumerated for 1 <= k <= 6")
    by_size: dict[int, list[tuple]] = {1: [()]}
    for n in range(2, k + 1):
        shapes = set()
        for stem_size in range(1, n):
            for stem in by_size[stem_size]:
                for branch in by_size[n - stem_size]:
                    shapes.add(tuple(sorted(stem + (branch,), key=_shape_key)))
        by_size[n] = sorted(shapes, key=_shape_key)
    ids = {}
    out = []
    for n in range(1, k + 1):
        for shape in by_size[n]:
            ids[shape] = len(out)
            if n == 1:
                out.append(Treelet(0, 1, shape))
                continue
            branch = shape[-1]
            stem = shape[:-1]
            out.append(Treelet(len(out), n, shape, ids[stem], ids[branch], shape.count(branch)))
    return tuple(out)


@dataclass
class TreeletTable:
    """Colorful treelet counts ``C(v, T, S)`` for one coloring.

    ``counts[(treelet id, color mask)]`` is an int64 array over nodes; absent
    keys are all-zero.  Size-``k`` entries are non-zero only at color-0
    nodes, so every unrooted colorful tree is counted once.
    """

    k: int
    colors: np.ndarray
    treelets: tuple[Treelet, ...]
    counts: dict[tuple[int, int], np.ndarray]
    n_ct: int
    _step_cache: dict = field(default_factory=dict, repr=False)

    def get(self, tid: int, mask: int, v: int) -> int:
        arr = self.counts.get((tid, mask))
        return 0 if arr is None else int(arr[v])

    @property
    def top_treelets(self) -> list[Treelet]:
        return [t for t in self.treelets if t.size == self.k]

    def root_distribution(self):
        """Cumulative root weights over ``(treelet, node)`` pairs."""
        full = (1 << self.k) - 1
        arrs, labels = [], []
        for t in self.top_treelets:
            arr = self.counts.get((t.id, full))
            if arr is None:
                continue
            nz = np.flatnonzero(arr)
            arrs.append(arr[nz])
            labels.extend((t.id, int(v)) for v in nz)
        if not arrs:
            return np.zeros(0, dtype=np.int64), []
        return np.cumsum(np.concatenate(arrs)), labels


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _check(bound: int, what: str):
    if bound > INT64_MAX:
        raise OverflowError(
            f"treelet count overflow while computing {what}; retry with a smaller k or graph"
        )


def build(graph: PrimalGraph, k: int, rng_seed=None, colors=None) -> TreeletTable:
    """Color the graph and fill the rooted colorful treelet table.

    ``colors`` overrides the random coloring (tests and fixed-coloring runs).
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    n = graph.num_nodes
    if colors is None:
        colors = np.random.default_rng(rng_seed).integers(0, k, size=n)
    colors = np.asarray(colors, dtype=np.int64)
    if colors.shape != (n,) or (n and (colors.min() < 0 or colors.max() >= k)):
        raise ValueError(f"colors must be {n} values in [0, {k})")
    treelets = enumerate_treelets(k)
    adj = graph.csr
    max_deg = graph.max_degree()
    counts: dict[tuple[int, int], np.ndarray] = {}
    for c in range(k):
        col = (colors == c).astype(np.int64)
        if col.any():
            counts[(0, 1 << c)] = col
    spread: dict[tuple[int, int], np.ndarray] = {}
    full = (1 << k) - 1
    for t in treelets[1:]:
        stem, branch = treelets[t.stem], treelets[t.branch]
        masks = [full] if t.size == k else [m for m in range(1 << k) if _popcount(m) == t.size]
        for s in masks:
            acc = None
            for s1 in _submasks_of_size(s, stem.size):
                c1 = counts.get((stem.id, s1))
                c2 = counts.get((branch.id, s ^ s1))
                if c1 is None or c2 is None:
                    continue
                key = (branch.id, s ^ s1)
                if key not in spread:
                    _check(max_deg * int(c2.max()), "neighbor sums")
                    spread[key] = adj @ c2
                ac2 = spread[key]
                _check(int(c1.max()) * int(ac2.max()), f"treelet {t.id}")
                term = c1 * ac2
                if acc is None:
                    acc = term
                else:
                    _check(int(acc.max()) + int(term.max()), f"treelet {t.id}")
                    acc = acc + term
            if acc is None:
                continue
            if t.size == k:
                acc = np.where(colors == 0, acc, 0)
            if t.d > 1:
                if np.any(acc % t.d):
                    raise AssertionError(f"inexact division by d={t.d} for treelet {t.id}")
                acc //= t.d
            if acc.any():
                counts[(t.id, s)] = acc
    n_ct = sum(int(counts[(t.id, full)].sum(dtype=object))
               for t in treelets if t.size == k and (t.id, full) in counts)
    _check(n_ct, "N_ct")
    return TreeletTable(k, colors, treelets, counts, n_ct)


@lru_cache(maxsize=None)
def _submasks_of_size(mask: int, size: int) -> tuple[int, ...]:
    bits = [i for i in range(mask.bit_length()) if mask >> i & 1]
    return tuple(sum(1 << b for b in comb) for comb in itertools.combinations(bits, size))


@dataclass(frozen=True)
class SampleBatch:
    """Multiset of sampled colorful connected node sets (sorted tuples)."""

    node_sets: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.node_sets)


def _step(graph: PrimalGraph, table: TreeletTable, v: int, tid: int, s: int):
    """Cumulative weights over ``(neighbor, stem colors)`` choices at ``v``; cached."""
    key = (v, tid, s)
    hit = table._step_cache.get(key)
    if hit is not None:
        return hit
    t = table.treelets[tid]
    stem, branch = table.treelets[t.stem], table.treelets[t.branch]
    nbrs = graph.neighbor_arrays[v]
    weights, choices = [], []
    for s1 in _submasks_of_size(s, stem.size):
        c1 = table.get(stem.id, s1, v)
        c2 = table.counts.get((branch.id, s ^ s1))
        if c1 == 0 or c2 is None:
            continue
        w = c1 * c2[nbrs]
        nz = np.flatnonzero(w)
        if len(nz):
            weights.append(w[nz])
            choices.extend((int(nbrs[j]), s1) for j in nz)
    cum = np.cumsum(np.concatenate(weights))
    table._step_cache[key] = (cum, choices)
    return cum, choices


def _sample_block(graph, table, roots, rng) -> list[tuple[int, ...]]:
    out = []
    treelets = table.treelets
    full = (1 << table.k) - 1
    for tid, v in roots:
        nodes = []
        stack = [(v, tid, full)]
        while stack:
            u, t, s = stack.pop()
            if treelets[t].size == 1:
                nodes.append(u)
                continue
            cum, choices = _step(graph, table, u, t, s)
            r = int(rng.integers(0, int(cum[-1])))
            w, s1 = choices[int(np.searchsorted(cum, r, side="right"))]
            stack.append((u, treelets[t].stem, s1))
            stack.append((w, treelets[t].branch, s ^ s1))
        out.append(tuple(sorted(nodes)))
    return out


def sample(graph: PrimalGraph, table: TreeletTable, x: int, rng_seed=0, threads: int = 1,
           stream=()) -> SampleBatch:
    """Draw ``x`` colorful size-``k`` treelet occurrences uniformly at random.

    Samples are produced in fixed blocks, each with its own generator seeded
    from ``(rng_seed, *stream, block index)``, so the batch does not depend on
    ``threads``.
    """
    if x < 1:
        raise ValueError("x must be at least 1")
    if table.n_ct == 0:
        raise NoColorfulTreeletError("no colorful treelets under this coloring")
    cum, labels = table.root_distribution()
    seed = [int(s) for s in np.atleast_1d(rng_seed)] + [int(s) for s in stream]
    blocks = [(b, min(BLOCK_SIZE, x - b * BLOCK_SIZE)) for b in range(math.ceil(x / BLOCK_SIZE))]

    def run(block):
        b, size = block
        rng = np.random.default_rng(seed + [b])
        r = rng.integers(0, table.n_ct, size=size)
        roots = [labels[i] for i in np.searchsorted(cum, r, side="right")]
        return _sample_block(graph, table, roots, rng)

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    return SampleBatch(tuple(itertools.chain.from_iterable(parts)))


def scan(batch: SampleBatch, complex: SimplicialComplex, threads: int = 1):
    """Maximal simplices (size >= 2) induced on each sampled node set."""

    def one(nodes):
        return tuple(
            tuple(nodes[i] for i in range(len(nodes)) if m >> i & 1)
            for m in scan_masks(complex, nodes)
        )

    complex.incidence
    if threads > 1 and len(batch) > BLOCK_SIZE:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, batch.node_sets, chunksize=BLOCK_SIZE))
    return [one(nodes) for nodes in batch.node_sets]


def match(batch: SampleBatch, scans, k: int, n_ct: int, match_table: MatchTable,
          catalog: SimpletCatalog, seed=None) -> CountReport:
    """Turn scanned families into reweighted per-simplet estimates."""
    if len(batch) == 0 or len(scans) != len(batch):
        raise ValueError("scans must align with a non-empty batch")
    hits = [0] * len(catalog)
    for nodes, fam in zip(batch.node_sets, scans):
        pos = {u: i for i, u in enumerate(nodes)}
        w = 0
        for s in fam:
            m = 0
            for u in s:
                m |= 1 << pos[u]
            w |= 1 << m
        try:
            hits[match_table.entries[w]] += 1
        except KeyError:
            raise AssertionError(f"sampled family {fam} matches no simplet") from None
    return CountReport(k, estimates_from_hits(hits, catalog, n_ct, len(batch)),
                       tuple(catalog.codes_hex), "sc3", samples=len(batch), seed=seed)


def estimates_from_hits(hits, catalog: SimpletCatalog, n_ct: int, x: int) -> tuple[float, ...]:
    k = catalog.k
    scale = Fraction(n_ct * k**k, x * math.factorial(k))
    return tuple(float(h * scale / nst) for h, nst in zip(hits, catalog.spanning_tree_counts))


def estimate_with_table(complex: SimplicialComplex, graph: PrimalGraph, table: TreeletTable,
                        catalog: SimpletCatalog, x: int, rng_seed=0, threads: int = 1,
                        match_table: MatchTable | None = None, stream=()) -> CountReport:
    """Sample, scan and match against an already built table (fixed coloring)."""
    match_table = match_table or build_match_table(catalog)
    batch = sample(graph, table, x, rng_seed, threads, stream=stream)
    scans = scan(batch, complex, threads)
    return match(batch, scans, catalog.k, table.n_ct, match_table, catalog, seed=rng_seed)


def sc3(complex: SimplicialComplex, catalog: SimpletCatalog, x: int, rng_seed=None,
        threads: int = 1, match_table: MatchTable | None = None,
        max_attempts: int = MAX_COLOR_ATTEMPTS, empty: str = "retry") -> CountReport:
    """Color-coding estimate of every simplet count of size ``catalog.k``.

    With ``empty="retry"`` a coloring with no colorful treelet is redrawn,
    up to ``max_attempts`` times.  That conditions on a non-empty coloring,
    which inflates the mean by ``1 / P(N_ct > 0)``; noticeable only on tiny
    graphs.  ``empty="zero"`` instead returns an all-zero estimate for such a
    coloring, which keeps the estimator exactly unbiased.
    ``rng_seed=None`` picks a fresh seed, recorded in the report.
    """
    if empty not in ("retry", "zero"):
        raise ValueError(f"empty must be 'retry' or 'zero', got {empty!r}")
    start = time.perf_counter()
    k = catalog.k
    if k < 3:
        raise ValueError("sc3 needs k >= 3")
    if rng_seed is None:
        rng_seed = int(np.random.SeedSequence().entropy % 2**63)
    base = [int(v) for v in np.atleast_1d(rng_seed)]
    if len(base) == 1 and np.ndim(rng_seed) == 0:
        rng_seed = base[0]
    else:
        rng_seed = base
    graph = primal_graph(complex)
    match_table = match_table or build_match_table(catalog)
    for attempt in range(max_attempts):
        table = build(graph, k, rng_seed=base + [0, attempt])
        if table.n_ct > 0:
            break
        if empty == "zero":
            return CountReport(k, (0.0,) * len(catalog), tuple(catalog.codes_hex), "sc3",
                               samples=x, seed=rng_seed, elapsed=time.perf_counter() - start)
        log.info("coloring %d has no colorful treelet; recoloring", attempt)
    else:
        raise NoColorfulTreeletError(f"no colorful treelets after {max_attempts} colorings")
    report = estimate_with_table(complex, graph, table, catalog, x, base, threads,
                                 match_table, stream=(1, attempt))
    return CountReport(k, report.counts, report.codes, "sc3", samples=x, seed=rng_seed,
                       elapsed=time.perf_counter() - start)
