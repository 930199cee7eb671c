"""Simplicial complexes stored by their maximal simplices, primal graphs,
induced subcomplexes and canonical forms under node relabeling.

Small families over ``[k]`` are handled as bit masks: a simplex ``{0, 2}``
is the mask ``0b101`` and a family of simplices is the *family word*
``sum(1 << mask)``.  For ``k <= 6`` a family word fits in 64 bits, which is
what makes exhaustive canonicalization over all ``k!`` relabelings cheap.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
import scipy.sparse as sp

MAX_K = 6


@dataclass(frozen=True)
class SimplicialComplex:
    """A simplicial complex given by its antichain of maximal simplices.

    The downward closure is implicit.  Use :meth:`from_simplices` to build a
    complex from arbitrary (possibly redundant) simplices; the plain
    constructor validates and rejects anything that is not already an
    antichain of sorted tuples.
    """

    num_nodes: int
    maximal_simplices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_nodes < 0:
            raise ValueError("num_nodes must be non-negative")
        simplices = tuple(tuple(int(u) for u in s) for s in self.maximal_simplices)
        object.__setattr__(self, "maximal_simplices", simplices)
        seen = set()
        for s in simplices:
            if len(s) == 0:
                raise ValueError("empty simplex")
            if any(a >= b for a, b in zip(s, s[1:])):
                raise ValueError(f"simplex {s} is not strictly ascending")
            if s[0] < 0 or s[-1] >= self.num_nodes:
                raise ValueError(f"simplex {s} has a node id outside [0, {self.num_nodes})")
            if s in seen:
                raise ValueError(f"duplicate maximal simplex {s}")
            seen.add(s)
        for i, sigma in enumerate(simplices):
            for j in _superset_candidates(self.incidence, sigma):
                if j != i and len(simplices[j]) > len(sigma):
                    if set(sigma) <= self._sets[j]:
                        raise ValueError(
                            f"simplex {sigma} is contained in {simplices[j]} (not an antichain)"
                        )

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[int]], num_nodes: int | None = None):
        """Reduce arbitrary simplices to their maximal antichain."""
        simplices = [tuple(s) for s in simplices]
        return cls(num_nodes=_infer_num_nodes(simplices, num_nodes),
                   maximal_simplices=maximal_antichain(simplices))

    @cached_property
    def _sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(s) for s in self.maximal_simplices)

    @cached_property
    def incidence(self) -> tuple[frozenset, ...]:
        """Per node, the ids of the maximal simplices containing it."""
        inc = [[] for _ in range(self.num_nodes)]
        for i, s in enumerate(self.maximal_simplices):
            for u in s:
                inc[u].append(i)
        return tuple(frozenset(x) for x in inc)

    @property
    def num_simplices(self) -> int:
        return len(self.maximal_simplices)

    def size_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for s in self.maximal_simplices:
            out[len(s)] = out.get(len(s), 0) + 1
        return dict(sorted(out.items()))

    def relabel(self, perm: Sequence[int]) -> SimplicialComplex:
        """Apply the node map ``u -> perm[u]``."""
        return SimplicialComplex.from_simplices(
            ([perm[u] for u in s] for s in self.maximal_simplices), self.num_nodes
        )


def _infer_num_nodes(simplices, num_nodes):
    if num_nodes is not None:
        return num_nodes
    top = -1
    for s in simplices:
        for u in s:
            top = max(top, int(u))
    return top + 1


def _superset_candidates(incidence, sigma):
    # Any superset of sigma must contain its rarest node.
    return min((incidence[u] for u in sigma), key=len)


def maximal_antichain(simplices: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    """Deduplicate and drop every simplex contained in another one.

    Returns sorted tuples in a canonical (sorted) order.
    """
    uniq = sorted({tuple(sorted(set(int(u) for u in s))) for s in simplices}, key=lambda s: (-len(s), s))
    kept: list[tuple[int, ...]] = []
    kept_sets: list[frozenset] = []
    by_node: dict[int, list[int]] = {}
    for s in uniq:
        if not s:
            continue
        sset = frozenset(s)
        cand = min((by_node.get(u, ()) for u in s), key=len)
        if any(sset <= kept_sets[j] for j in cand):
            continue
        idx = len(kept)
        kept.append(s)
        kept_sets.append(sset)
        for u in s:
            by_node.setdefault(u, []).append(idx)
    return tuple(sorted(kept))


@dataclass(frozen=True)
class PrimalGraph:
    """Pairwise skeleton of a complex: every 2-subset of a simplex is an edge."""

    num_nodes: int
    adjacency: tuple[tuple[int, ...], ...]
    edge_count: int

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Iterable[tuple[int, int]]) -> PrimalGraph:
        nbrs = [set() for _ in range(num_nodes)]
        for u, v in edges:
            if u == v:
                raise ValueError("self-loop")
            nbrs[u].add(v)
            nbrs[v].add(u)
        adjacency = tuple(tuple(sorted(x)) for x in nbrs)
        return cls(num_nodes, adjacency, sum(len(x) for x in adjacency) // 2)

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def neighbor_arrays(self) -> tuple[np.ndarray, ...]:
        return tuple(np.asarray(a, dtype=np.int64) for a in self.adjacency)

    @cached_property
    def csr(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency matrix with int64 entries."""
        indptr = np.zeros(self.num_nodes + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in self.adjacency])
        indices = np.fromiter(itertools.chain.from_iterable(self.adjacency), dtype=np.int64,
                              count=int(indptr[-1]))
        data = np.ones(len(indices), dtype=np.int64)
        return sp.csr_matrix((data, indices, indptr), shape=(self.num_nodes, self.num_nodes))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, a in enumerate(self.adjacency) for v in a if u < v]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def is_connected_subset(self, nodes: Iterable[int]) -> bool:
        nodes = set(nodes)
        if not nodes:
            return False
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in self.neighbor_sets[u] & nodes:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(nodes)

    def induced(self, nodes: Iterable[int]) -> PrimalGraph:
        """Subgraph on ``nodes``, relabeled to ``0..len-1`` in ascending order."""
        nodes = sorted(nodes)
        pos = {u: i for i, u in enumerate(nodes)}
        edges = [(pos[u], pos[v]) for u in nodes for v in self.adjacency[u] if v in pos and u < v]
        return PrimalGraph.from_edges(len(nodes), edges)


def primal_graph(complex: SimplicialComplex) -> PrimalGraph:
    edges = set()
    for s in complex.maximal_simplices:
        edges.update(itertools.combinations(s, 2))
    return PrimalGraph.from_edges(complex.num_nodes, edges)


def induced_maximal_simplices(complex: SimplicialComplex, nodes: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    """Maximal simplices of the subcomplex induced on ``nodes``.

    Brute force over every maximal simplex.  Nodes covered by no intersection
    of size two or more come back as singletons.
    """
    xs = set(int(u) for u in nodes)
    for u in xs:
        if not 0 <= u < complex.num_nodes:
            raise ValueError(f"node {u} out of range")
    pieces = [tuple(sorted(xs.intersection(s))) for s in complex.maximal_simplices]
    family = maximal_antichain(p for p in pieces if len(p) >= 2)
    covered = set(itertools.chain.from_iterable(family))
    return tuple(sorted(family + tuple((u,) for u in xs - covered)))


# ---------------------------------------------------------------- bit masks


def mask_of(positions: Iterable[int]) -> int:
    m = 0
    for i in positions:
        m |= 1 << i
    return m


def members_of(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def family_word(masks: Iterable[int]) -> int:
    w = 0
    for m in masks:
        w |= 1 << m
    return w


def word_masks(word: int) -> list[int]:
    return [m for m in range(word.bit_length()) if word >> m & 1]


@lru_cache(maxsize=None)
def down_word(mask: int) -> int:
    """Family word of every non-empty submask of ``mask`` (its closure)."""
    w = 0
    sub = mask
    while sub:
        w |= 1 << sub
        sub = (sub - 1) & mask
    return w


def closure_word(masks: Iterable[int]) -> int:
    w = 0
    for m in masks:
        w |= down_word(m)
    return w


def maximal_masks(masks: Iterable[int]) -> list[int]:
    ms = sorted(set(masks), key=lambda m: -bin(m).count("1"))
    out: list[int] = []
    for m in ms:
        if not any(m & q == m for q in out):
            out.append(m)
    return sorted(out)


def masks_connected(k: int, masks: Iterable[int]) -> bool:
    """Whether the union of the simplices spans ``[k]`` as one component."""
    comp = [i for i in range(k)]

    def find(a):
        while comp[a] != a:
            comp[a] = comp[comp[a]]
            a = comp[a]
        return a

    covered = 0
    for m in masks:
        covered |= m
        ids = members_of(m)
        for b in ids[1:]:
            comp[find(b)] = find(ids[0])
    if covered != (1 << k) - 1:
        return False
    return len({find(i) for i in range(k)}) == 1


@lru_cache(maxsize=None)
def permutation_tables(k: int):
    """``(perms, mask_image, bit_image)`` for all ``k!`` relabelings.

    ``mask_image[p, m]`` is mask ``m`` under perm ``p``; ``bit_image`` holds
    ``1 << mask_image`` as uint64, so a permuted family word is an OR-reduce.
    """
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be in [1, {MAX_K}]")
    perms = np.array(list(itertools.permutations(range(k))), dtype=np.int64)
    masks = np.arange(1 << k)
    bits = (masks[:, None] >> np.arange(k)) & 1  # (2^k, k)
    mask_image = (bits[None, :, :] << perms[:, None, :]).sum(axis=2)  # (k!, 2^k)
    bit_image = np.left_shift(np.uint64(1), mask_image.astype(np.uint64))
    return perms, mask_image, bit_image


def permuted_words(k: int, masks: Sequence[int]) -> np.ndarray:
    """Family word of ``masks`` under every relabeling of ``[k]``."""
    _, _, bit_image = permutation_tables(k)
    return np.bitwise_or.reduce(bit_image[:, list(masks)], axis=1)


def canonical_word(k: int, masks: Sequence[int]) -> tuple[int, int]:
    """Minimal family word over all relabelings and the index of a minimizing perm."""
    words = permuted_words(k, masks)
    p = int(np.argmin(words))
    return int(words[p]), p


def code_from_word(k: int, word: int) -> bytes:
    return bytes([k]) + word.to_bytes(8, "big")


@dataclass(frozen=True)
class Simplet:
    """Canonical representative of a connected complex on ``[k]``."""

    k: int
    maximal_simplices: tuple[tuple[int, ...], ...]
    canonical_code: bytes = field(repr=False)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(sorted(mask_of(s) for s in self.maximal_simplices))

    @property
    def num_maximal(self) -> int:
        return len(self.maximal_simplices)

    def primal_edges(self) -> list[tuple[int, int]]:
        edges = set()
        for s in self.maximal_simplices:
            edges.update(itertools.combinations(s, 2))
        return sorted(edges)

    def primal_graph(self) -> PrimalGraph:
        return PrimalGraph.from_edges(self.k, self.primal_edges())


def canonicalize(k: int, family: Iterable[Iterable[int]]) -> Simplet:
    """Canonical simplet of a connected antichain over ``[k]``.

    Two families get the same ``canonical_code`` exactly when some
    relabeling of ``[k]`` maps one onto the other.
    """
    masks = sorted({mask_of(s) for s in family})
    if any(m == 0 or m >> k for m in masks):
        raise ValueError(f"family has an empty simplex or a node outside [0, {k})")
    if len(maximal_masks(masks)) != len(masks):
        raise ValueError("family is not an antichain")
    if not masks_connected(k, masks):
        raise ValueError("family is disconnected or does not cover [k]")
    word, p = canonical_word(k, masks)
    perm = permutation_tables(k)[0][p]
    simplices = tuple(sorted(tuple(sorted(int(perm[i]) for i in members_of(m))) for m in masks))
    return Simplet(k, simplices, code_from_word(k, word))


def scan_masks(complex: SimplicialComplex, nodes: Sequence[int]) -> list[int]:
    """Maximal simplices of size >= 2 induced on ``nodes``, as masks over positions.

    ``nodes`` must be sorted; bit ``i`` of a mask stands for ``nodes[i]``.
    Only maximal simplices meeting ``nodes`` in two or more places are
    touched, found through the node incidence index.
    """
    inc = complex.incidence
    cand: set[int] = set()
    for a, b in itertools.combinations(nodes, 2):
        cand |= inc[a] & inc[b]
    pos = {u: i for i, u in enumerate(nodes)}
    sets = complex._sets
    current: list[int] = []
    for j in sorted(cand):
        m = 0
        for u in sets[j].intersection(pos):
            m |= 1 << pos[u]
        if any(m & q == m for q in current):
            continue
        current = [q for q in current if q & m != q]
        current.append(m)
    return sorted(current)
