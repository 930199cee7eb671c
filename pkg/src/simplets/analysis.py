"""Characterizing complexes from simplet counts.

Null-model randomization, characteristic profiles, the normalized count
error, cosine similarity between profiles and k-means++ clustering.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from collections.abc import Sequence

import numpy as np

from .core import SimplicialComplex
from .exact import CountReport

log = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-3
DEFAULT_C_SHUFFLE = 1000
SWITCH_ATTEMPTS = 10


class NullModelWarning(UserWarning):
    pass


@dataclass(frozen=True)
class NullModelConfig:
    c_shuffle: int = DEFAULT_C_SHUFFLE
    seed: int | None = None

    def __post_init__(self):
        if self.c_shuffle < 1:
            raise ValueError("c_shuffle must be at least 1")


class _Uniforms:
    """Buffered uniform draws from one generator."""

    def __init__(self, rng: np.random.Generator, chunk: int = 1 << 16):
        self.rng, self.chunk = rng, chunk
        self.buf, self.pos = rng.random(chunk).tolist(), 0

    def __call__(self) -> float:
        if self.pos == len(self.buf):
            self.buf, self.pos = self.rng.random(self.chunk).tolist(), 0
        self.pos += 1
        return self.buf[self.pos - 1]


def shuffle_maximal_simplices(complex: SimplicialComplex, config: NullModelConfig):
    """Run the node-switching rounds; returns ``(simplices, degenerate)``.

    ``simplices`` is the switched list before re-maximalization, in input
    order and with the input sizes.  Each round picks a size with
    probability proportional to how many maximal simplices have it, a
    uniform pair of distinct simplices of that size, and performs
    ``size // 2`` single-node swaps between them.  A swap that would repeat
    a node inside a simplex is redrawn a few times, then skipped.
    """
    simplices = [list(s) for s in complex.maximal_simplices]
    by_size: dict[int, list[int]] = {}
    for i, s in enumerate(simplices):
        by_size.setdefault(len(s), []).append(i)
    sizes = sorted(by_size)
    if not any(len(by_size[t]) >= 2 for t in sizes):
        return simplices, True
    rng = np.random.default_rng(config.seed)
    rounds = config.c_shuffle * len(simplices)
    weights = np.array([len(by_size[t]) for t in sizes], dtype=float)
    uni = _Uniforms(rng)
    skipped = 0
    done = 0
    while done < rounds:
        batch = min(1 << 16, rounds - done)
        picks = rng.choice(len(sizes), size=batch, p=weights / weights.sum()).tolist()
        for pick in picks:
            t = sizes[pick]
            group = by_size[t]
            m = len(group)
            if m < 2:
                continue
            i = int(uni() * m)
            j = int(uni() * (m - 1))
            if j >= i:
                j += 1
            a, b = simplices[group[i]], simplices[group[j]]
            for _ in range(t // 2):
                for _ in range(SWITCH_ATTEMPTS):
                    p, q = int(uni() * t), int(uni() * t)
                    u, w = a[p], b[q]
                    if u == w or (w not in a and u not in b):
                        a[p], b[q] = w, u
                        break
                else:
                    skipped += 1
        done += batch
    if skipped:
        log.debug("null model: %d switches skipped after %d attempts", skipped, SWITCH_ATTEMPTS)
    return simplices, False


def null_model(complex: SimplicialComplex, config: NullModelConfig = NullModelConfig()) -> SimplicialComplex:
    """Randomized complex with the same number and sizes of maximal simplices.

    Switching may create duplicates or nested simplices; those are removed
    when the result is reduced back to an antichain.
    """
    simplices, degenerate = shuffle_maximal_simplices(complex, config)
    if degenerate:
        warnings.warn("no simplex size occurs twice; null model returns the input unchanged",
                      NullModelWarning, stacklevel=2)
        return complex
    out = SimplicialComplex.from_simplices(simplices, complex.num_nodes)
    removed = len(simplices) - out.num_simplices
    if removed:
        log.info("null model: re-maximalization removed %d simplices", removed)
    return out


@dataclass(frozen=True)
class CharacteristicProfile:
    k: int
    values: tuple[float, ...]
    codes: tuple[str, ...]
    provenance: dict = field(default_factory=dict, compare=False)

    @property
    def norm(self) -> float:
        return math.sqrt(math.fsum(v * v for v in self.values))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _ratios(report: CountReport) -> np.ndarray:
    total = float(report.total)
    if total <= 0:
        raise ValueError("report has a zero total")
    return np.asarray(report.counts, dtype=float) / total


def significance_vector(counts: CountReport, null_counts, epsilon: float = DEFAULT_EPSILON) -> np.ndarray:
    """Per-simplet contrast of count ratios against the null model.

    ``null_counts`` is a report or a list of replica reports; replica ratios
    are averaged.
    """
    nulls = [null_counts] if isinstance(null_counts, CountReport) else list(null_counts)
    if not nulls:
        raise ValueError("no null-model counts")
    for r in nulls:
        if r.k != counts.k or r.codes != counts.codes:
            raise ValueError("reports do not share k and simplet order")
    ours = _ratios(counts)
    theirs = np.mean([_ratios(r) for r in nulls], axis=0)
    return (ours - theirs) / (ours + theirs + epsilon)


def characteristic_profile(counts: CountReport, null_counts, epsilon: float = DEFAULT_EPSILON,
                           provenance: dict | None = None) -> CharacteristicProfile:
    """Unit-normalized significance vector (all zeros if it vanishes)."""
    mu = significance_vector(counts, null_counts, epsilon)
    norm = float(np.sqrt(np.sum(mu * mu)))
    values = mu / norm if norm > 0 else np.zeros_like(mu)
    return CharacteristicProfile(counts.k, tuple(float(v) for v in values), counts.codes,
                                 dict(provenance or {}))


def normalized_error(exact: CountReport, estimate: CountReport) -> float:
    """Sum of absolute count deviations divided by the exact total."""
    if exact.k != estimate.k or exact.codes != estimate.codes:
        raise ValueError("reports do not share k and simplet order")
    total = float(exact.total)
    if total <= 0:
        raise ValueError("exact report has a zero total")
    return math.fsum(abs(float(a) - float(b)) for a, b in zip(exact.counts, estimate.counts)) / total


def cosine_similarity_matrix(profiles: Sequence[CharacteristicProfile]) -> np.ndarray:
    if len({p.k for p in profiles}) > 1:
        raise ValueError("profiles do not share k")
    x = np.array([p.values for p in profiles], dtype=float)
    norms = np.linalg.norm(x, axis=1)
    if np.any(norms == 0):
        raise ValueError("cosine similarity is undefined for a zero profile")
    x = x / norms[:, None]
    sim = np.clip(x @ x.T, -1.0, 1.0)
    np.fill_diagonal(sim, 1.0)
    return sim


def kmeans_pp(vectors, n_clusters: int, trials: int = 10, rng_seed=0,
              max_iter: int = 300) -> list[np.ndarray]:
    """k-means++ seeding then Lloyd iterations, once per trial.

    Trial ``t`` uses a generator seeded with ``(rng_seed, t)``.  Returns one
    label array per trial.
    """
    x = np.asarray(vectors, dtype=float)
    if x.ndim != 2:
        raise ValueError("vectors must share one dimension")
    n = len(x)
    if not 1 <= n_clusters <= n:
        raise ValueError("need 1 <= n_clusters <= number of vectors")
    out = []
    for trial in range(trials):
        rng = np.random.default_rng([int(rng_seed), trial])
        centers = _seed_pp(x, n_clusters, rng)
        labels, prev_obj = None, math.inf
        for _ in range(max_iter):
            d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            new = d2.argmin(axis=1)
            obj = float(d2[np.arange(n), new].sum())
            assert obj <= prev_obj + 1e-9 * max(1.0, prev_obj), "k-means objective increased"
            prev_obj = obj
            if labels is not None and np.array_equal(new, labels):
                break
            labels = new
            for c in range(n_clusters):
                members = x[labels == c]
                if len(members):
                    centers[c] = members.mean(axis=0)
        out.append(labels)
    return out


def _seed_pp(x: np.ndarray, n_clusters: int, rng: np.random.Generator) -> np.ndarray:
    n = len(x)
    chosen = [int(rng.integers(n))]
    d2 = ((x - x[chosen[0]]) ** 2).sum(axis=1)
    while len(chosen) < n_clusters:
        total = d2.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            rest = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rng.choice(rest))
        chosen.append(nxt)
        d2 = np.minimum(d2, ((x - x[nxt]) ** 2).sum(axis=1))
    return x[chosen].copy()
