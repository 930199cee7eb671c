"""Seeded generators of synthetic simplicial complexes."""
from __future__ import annotations

import numpy as np

from .core import SimplicialComplex


class _Antichain:
    """Incrementally maintained set of maximal simplices."""

    def __init__(self, num_nodes: int):
        self.simplices: set[frozenset] = set()
        self.by_node: list[set[frozenset]] = [set() for _ in range(num_nodes)]

    def __len__(self):
        return len(self.simplices)

    def add(self, nodes) -> None:
        s = frozenset(int(u) for u in nodes)
        touching = set().union(*(self.by_node[u] for u in s))
        if any(s <= t for t in touching):
            return
        for t in [t for t in touching if t < s]:
            self.simplices.discard(t)
            for u in t:
                self.by_node[u].discard(t)
        self.simplices.add(s)
        for u in s:
            self.by_node[u].add(s)

    def complex(self, num_nodes: int) -> SimplicialComplex:
        return SimplicialComplex.from_simplices([sorted(s) for s in self.simplices], num_nodes)


def random_complex(num_nodes: int, num_simplices: int, max_size: int = 5, rng_seed=0,
                   min_size: int = 1) -> SimplicialComplex:
    """Reduce ``num_simplices`` uniformly drawn node sets to their antichain."""
    rng = np.random.default_rng(rng_seed)
    max_size = min(max_size, num_nodes)
    chain = _Antichain(num_nodes)
    for _ in range(num_simplices):
        size = int(rng.integers(min_size, max_size + 1))
        chain.add(rng.choice(num_nodes, size=size, replace=False))
    return chain.complex(num_nodes)


def group_contact_complex(num_nodes: int = 242, num_simplices: int = 8010, num_groups: int = 10,
                          rng_seed=0, cross_rate: float = 0.02,
                          size_weights=(0.30, 0.40, 0.22, 0.08)) -> SimplicialComplex:
    """Face-to-face-contact-like complex with exactly ``num_simplices`` maximal simplices.

    Nodes are split into ``num_groups`` near-equal groups.  Candidate
    interactions of 2 to 5 nodes are drawn inside one group, except that a
    fraction ``cross_rate`` are pairs joining two groups.  Candidates are
    folded into the antichain until it holds the requested number of
    simplices.
    """
    rng = np.random.default_rng(rng_seed)
    groups = np.array_split(rng.permutation(num_nodes), num_groups)
    weights = np.asarray(size_weights, dtype=float) / np.sum(size_weights)
    chain = _Antichain(num_nodes)
    for _ in range(200 * num_simplices):
        if len(chain) == num_simplices:
            break
        if rng.random() < cross_rate:
            a, b = rng.choice(num_groups, size=2, replace=False)
            chain.add((rng.choice(groups[a]), rng.choice(groups[b])))
        else:
            g = groups[int(rng.integers(num_groups))]
            size = 2 + int(rng.choice(len(weights), p=weights))
            chain.add(rng.choice(g, size=size, replace=False))
    else:
        raise RuntimeError("could not reach the requested number of maximal simplices")
    return chain.complex(num_nodes)


# Three structurally distinct families for separability checks.

def filled_triangle_complex(num_nodes: int = 40, rng_seed=0, attach: float = 0.7) -> SimplicialComplex:
    """Filled triangles that mostly grow off an edge of an earlier triangle."""
    rng = np.random.default_rng(rng_seed)
    chain = _Antichain(num_nodes)
    triangles = []
    for _ in range(int(num_nodes * rng.uniform(1.2, 1.6))):
        if triangles and rng.random() < attach:
            base = triangles[int(rng.integers(len(triangles)))]
            a, b = rng.choice(base, size=2, replace=False)
            c = int(rng.integers(num_nodes))
            if c in base:
                continue
            tri = (a, b, c)
        else:
            tri = tuple(rng.choice(num_nodes, size=3, replace=False))
        triangles.append(tri)
        chain.add(tri)
    return chain.complex(num_nodes)


def hollow_triangle_complex(num_nodes: int = 40, rng_seed=0) -> SimplicialComplex:
    """Triangles present only as three edges, never filled."""
    rng = np.random.default_rng(rng_seed)
    chain = _Antichain(num_nodes)
    for _ in range(int(num_nodes * rng.uniform(0.6, 0.8))):
        a, b, c = rng.choice(num_nodes, size=3, replace=False)
        chain.add((a, b))
        chain.add((b, c))
        chain.add((a, c))
    return chain.complex(num_nodes)


def star_complex(num_nodes: int = 40, rng_seed=0, double: float = 0.15) -> SimplicialComplex:
    """A few hubs joined by plain edges to many leaves.

    Hubs are never adjacent, so the primal graph is bipartite.  A fraction
    ``double`` of the leaves attach to two hubs, which links the stars.
    """
    rng = np.random.default_rng(rng_seed)
    num_hubs = int(rng.integers(3, 6))
    hubs = rng.choice(num_nodes, size=num_hubs, replace=False)
    chain = _Antichain(num_nodes)
    hub_set = set(hubs.tolist())
    for u in range(num_nodes):
        if u in hub_set:
            continue
        fanout = 2 if rng.random() < double else 1
        for h in rng.choice(hubs, size=fanout, replace=False):
            chain.add((u, h))
    return chain.complex(num_nodes)


FAMILIES = {
    "filled": filled_triangle_complex,
    "hollow": hollow_triangle_complex,
    "star": star_complex,
}
