"""Graphlet and simplet enumeration, spanning-tree counts and match tables."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .core import (
    PrimalGraph,
    Simplet,
    canonical_word,
    canonicalize,
    closure_word,
    code_from_word,
    down_word,
    masks_connected,
    maximal_masks,
    members_of,
    permuted_words,
    word_masks,
)

log = logging.getLogger(__name__)

SIMPLET_COUNTS = {1: 1, 2: 1, 3: 3, 4: 14, 5: 157, 6: 15942}
GRAPHLET_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112}
CATALOG_FORMAT = "simplet-catalog"
CATALOG_VERSION = 1


@dataclass(frozen=True)
class Graphlet:
    k: int
    edges: tuple[tuple[int, int], ...]
    canonical_code: bytes = field(repr=False)


def generate_graphlets(k: int) -> list[Graphlet]:
    """One representative per class of connected simple graphs on ``k`` nodes.

    Brute force over all edge subsets of ``K_k``.
    """
    if not 2 <= k <= 6:
        raise ValueError("graphlets are generated for 2 <= k <= 6")
    pairs = [(1 << a) | (1 << b) for a, b in itertools.combinations(range(k), 2)]
    found: dict[int, tuple[int, ...]] = {}
    for sel in range(1, 1 << len(pairs)):
        masks = [pairs[i] for i in range(len(pairs)) if sel >> i & 1]
        if not masks_connected(k, masks):
            continue
        word, _ = canonical_word(k, masks)
        found.setdefault(word, tuple(masks))
    out = []
    for word in sorted(found):
        edges = tuple(sorted(members_of(m) for m in word_masks(word)))
        out.append(Graphlet(k, edges, code_from_word(k, word)))
    return out


def spanning_tree_count(graph: PrimalGraph) -> int:
    """Number of spanning trees by the matrix-tree theorem, in exact integers.

    Returns 0 for a disconnected graph.  Uses fraction-free (Bareiss)
    elimination on the Laplacian with its first row and column removed.
    """
    n = graph.num_nodes
    if n <= 1:
        return 1
    lap = [[0] * n for _ in range(n)]
    for u, nbrs in enumerate(graph.adjacency):
        lap[u][u] = len(nbrs)
        for v in nbrs:
            lap[u][v] = -1
    return _bareiss_det([row[1:] for row in lap[1:]])


def _bareiss_det(a: list[list[int]]) -> int:
    a = [row[:] for row in a]
    n = len(a)
    sign, prev = 1, 1
    for i in range(n - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, n) if a[r][i] != 0), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SimpletCatalog:
    """All simplets of size ``k`` in a fixed order, with ``n_st`` of each primal graph."""

    k: int
    simplets: tuple[Simplet, ...]
    spanning_tree_counts: tuple[int, ...]
    index_by_code: dict[bytes, int] = field(repr=False, compare=False)

    def __len__(self):
        return len(self.simplets)

    @property
    def codes_hex(self) -> list[str]:
        return [s.canonical_code.hex() for s in self.simplets]

    def index_of(self, family) -> int:
        return self.index_by_code[canonicalize(self.k, family).canonical_code]

    def total_maximal_simplices(self) -> int:
        return sum(s.num_maximal for s in self.simplets)


def _make_catalog(k: int, simplets) -> SimpletCatalog:
    simplets = sorted(simplets, key=lambda s: (s.num_maximal, s.canonical_code))
    nst = []
    for s in simplets:
        c = spanning_tree_count(s.primal_graph())
        if c < 1:
            raise ValueError(f"simplet {s.maximal_simplices} has a disconnected primal graph")
        nst.append(c)
    return SimpletCatalog(
        k=k,
        simplets=tuple(simplets),
        spanning_tree_counts=tuple(nst),
        index_by_code={s.canonical_code: i for i, s in enumerate(simplets)},
    )


def _simplet_from_closed(k: int, closed: int) -> Simplet:
    masks = maximal_masks(m for m in word_masks(closed) if bin(m).count("1") >= 2)
    return canonicalize(k, [members_of(m) for m in masks])


def expand_simplets(k: int, graphlets: list[Graphlet]) -> SimpletCatalog:
    """Expand every graphlet into the simplets sharing it as primal graph.

    Cliques are decided open or closed from the largest size down to 3;
    sibling states that are isomorphic are expanded only once.
    """
    if k == 1:
        return _make_catalog(1, [Simplet(1, ((0,),), code_from_word(1, 1 << 1))])
    if len(graphlets) != GRAPHLET_COUNTS[k]:
        raise ValueError(f"expected {GRAPHLET_COUNTS[k]} graphlets of size {k}, got {len(graphlets)}")
    found: dict[bytes, Simplet] = {}
    for g in graphlets:
        edge_masks = [(1 << a) | (1 << b) for a, b in g.edges]
        adj = closure_word(edge_masks)
        cliques = [m for m in range(1 << k)
                   if bin(m).count("1") > 2 and all(adj >> e & 1 for e in _pair_masks(m))]
        start = closure_word(edge_masks)

        def expand(i: int, closed: int):
            if i <= 2:
                s = _simplet_from_closed(k, closed)
                found.setdefault(s.canonical_code, s)
                return
            open_cliques = [c for c in cliques if bin(c).count("1") == i and not closed >> c & 1]
            seen: set[int] = set()
            for sel in range(1 << len(open_cliques)):
                nxt = closed
                for j, c in enumerate(open_cliques):
                    if sel >> j & 1:
                        nxt |= down_word(c)
                key = int(permuted_words(k, word_masks(nxt)).min())
                if key in seen:
                    continue
                seen.add(key)
                expand(i - 1, nxt)

        expand(k, start)
    catalog = _make_catalog(k, found.values())
    if k in SIMPLET_COUNTS and len(catalog) != SIMPLET_COUNTS[k]:
        raise AssertionError(f"expanded {len(catalog)} simplets of size {k}, expected {SIMPLET_COUNTS[k]}")
    return catalog


@lru_cache(maxsize=None)
def _pair_masks(m: int) -> tuple[int, ...]:
    return tuple((1 << a) | (1 << b) for a, b in itertools.combinations(members_of(m), 2))


@lru_cache(maxsize=None)
def get_catalog(k: int) -> SimpletCatalog:
    """Process-wide cached catalog for ``k``."""
    return expand_simplets(k, generate_graphlets(k)) if k >= 2 else expand_simplets(1, [])


@dataclass(frozen=True)
class MatchTable:
    """Family word of every relabeled maximal-simplex family -> simplet index."""

    k: int
    entries: dict[int, int] = field(repr=False)

    def __len__(self):
        return len(self.entries)

    def lookup(self, masks) -> int:
        w = 0
        for m in masks:
            w |= 1 << m
        return self.entries[w]


def build_match_table(catalog: SimpletCatalog, allow_k6: bool = False) -> MatchTable:
    if catalog.k >= 6 and not allow_k6:
        raise ValueError("the k=6 match table is large; pass allow_k6=True to build it")
    entries: dict[int, int] = {}
    for idx, s in enumerate(catalog.simplets):
        for w in np.unique(permuted_words(catalog.k, s.masks)).tolist():
            prev = entries.setdefault(int(w), idx)
            assert prev == idx, "two simplets share a relabeled family"
    return MatchTable(catalog.k, entries)


@lru_cache(maxsize=None)
def get_match_table(k: int) -> MatchTable:
    return build_match_table(get_catalog(k), allow_k6=True)


# ------------------------------------------------------------ serialization


def save_catalog(catalog: SimpletCatalog, path) -> None:
    lines = [f"# {CATALOG_FORMAT} v{CATALOG_VERSION}", f"k {catalog.k}", f"count {len(catalog)}"]
    for i, (s, nst) in enumerate(zip(catalog.simplets, catalog.spanning_tree_counts)):
        lines.append(f"{i} {s.canonical_code.hex()} {','.join(map(str, s.masks))} {nst}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_catalog(path) -> SimpletCatalog:
    text = Path(path).read_text().splitlines()
    if not text or text[0].strip() != f"# {CATALOG_FORMAT} v{CATALOG_VERSION}":
        raise ValueError(f"{path}: not a {CATALOG_FORMAT} v{CATALOG_VERSION} file")
    try:
        k = int(text[1].split()[1])
        count = int(text[2].split()[1])
        simplets, nsts = [], []
        for lineno, line in enumerate(text[3:], start=4):
            idx, code, masks, nst = line.split()
            if int(idx) != len(simplets):
                raise ValueError(f"{path}:{lineno}: index out of order")
            ms = [int(m) for m in masks.split(",")]
            s = Simplet(k, tuple(sorted(members_of(m) for m in ms)), bytes.fromhex(code))
            simplets.append(s)
            nsts.append(int(nst))
    except (IndexError, ValueError) as exc:
        raise ValueError(f"{path}: malformed catalog ({exc})") from exc
    if len(simplets) != count:
        raise ValueError(f"{path}: header says {count} simplets, found {len(simplets)}")
    return SimpletCatalog(k, tuple(simplets), tuple(nsts),
                          {s.canonical_code: i for i, s in enumerate(simplets)})
